// Wire types as served by the dtconsult HTTP API. The UI never derives
// interview facts itself; everything here is read back from the server.

export type Phase = "awaiting_priorities" | "interviewing" | "completed";

export type Role = "system" | "user" | "assistant" | "tool";

export interface Message {
  id: number;
  role: Role;
  content: string;
  modality: "text" | "audio_transcribed";
  timestamp: string;
  detected_language: string | null;
  tool_call_id: string | null;
}

export interface ClientProfile {
  company_name: string;
  client_name: string;
  industry_type: string;
  industry_size: string;
  job_title: string;
}

export interface SessionSummary {
  session_id: string;
  profile: ClientProfile;
  catalog_version: string;
  status: "active" | "completed";
  phase: Phase;
  created_at: string;
  updated_at: string;
  message_count: number;
}

export interface SessionView extends SessionSummary {
  state: unknown;
  messages: Message[];
}

export interface CategoryProgress {
  id: string;
  display_name: string;
  asked: number;
  remaining: number;
}

export interface ProgressSnapshot {
  total_asked: number;
  total_remaining: number;
  per_category: CategoryProgress[];
}

export interface ProgressView {
  phase: Phase;
  progress: ProgressSnapshot | null;
}

export interface TurnResponse {
  session_id: string;
  assistant_text: string;
  phase: Phase;
  progress: ProgressSnapshot | null;
  new_messages: Message[];
}

export interface QuestionScore {
  question_id: string;
  question_text: string;
  score: number;
  rationale: string;
}

export interface Report {
  session_id: string;
  generated_at: string;
  current_practices: string[];
  challenges: string[];
  strategic_goals: string[];
  scores: QuestionScore[] | null;
}

export interface ReportDoc {
  report: Report;
  markdown: string;
}

export interface HealthInfo {
  status: string;
  catalog_version: string;
  total_questions: number;
}

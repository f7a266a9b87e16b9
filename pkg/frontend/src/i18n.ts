// Locale layer for the UI chrome. The consultant's replies arrive in the
// client's own language from the backend; only our labels live here.

export type Locale = "en" | "tr";

const STRINGS: Record<string, Record<Locale, string>> = {
  "app.title": { en: "Needs Assessment Interview", tr: "İhtiyaç Analizi Görüşmesi" },
  "login.token": { en: "Access token", tr: "Erişim anahtarı" },
  "login.server": { en: "Server address", tr: "Sunucu adresi" },
  "login.connect": { en: "Connect", tr: "Bağlan" },
  "login.failed": { en: "Could not reach the server with that token.", tr: "Bu anahtarla sunucuya ulaşılamadı." },
  "nav.sessions": { en: "Sessions", tr: "Görüşmeler" },
  "nav.new": { en: "New interview", tr: "Yeni görüşme" },
  "nav.report": { en: "Report", tr: "Rapor" },
  "nav.chat": { en: "Interview", tr: "Görüşme" },
  "profile.heading": { en: "Who are we talking to?", tr: "Kiminle görüşüyoruz?" },
  "profile.company_name": { en: "Company name", tr: "Şirket adı" },
  "profile.client_name": { en: "Your name", tr: "Adınız" },
  "profile.industry_type": { en: "Industry", tr: "Sektör" },
  "profile.industry_size": { en: "Company size", tr: "Şirket büyüklüğü" },
  "profile.job_title": { en: "Job title", tr: "Görev" },
  "profile.start": { en: "Start interview", tr: "Görüşmeyi başlat" },
  "profile.required": { en: "This field is required.", tr: "Bu alan zorunludur." },
  "sessions.empty": { en: "No interviews yet. Start one from the form.", tr: "Henüz görüşme yok. Formdan bir tane başlatın." },
  "sessions.filter.company": { en: "Filter by company", tr: "Şirkete göre süz" },
  "sessions.filter.status": { en: "Any status", tr: "Tüm durumlar" },
  "sessions.open": { en: "Open", tr: "Aç" },
  "sessions.status.active": { en: "active", tr: "devam ediyor" },
  "sessions.status.completed": { en: "completed", tr: "tamamlandı" },
  "chat.placeholder": { en: "Type your answer...", tr: "Cevabınızı yazın..." },
  "chat.send": { en: "Send", tr: "Gönder" },
  "chat.record": { en: "Hold to speak", tr: "Konuşmak için basılı tutun" },
  "chat.recording": { en: "Recording... release to send", tr: "Kaydediliyor... göndermek için bırakın" },
  "chat.mic_unavailable": { en: "Voice input is not available in this browser.", tr: "Bu tarayıcıda sesli giriş kullanılamıyor." },
  "chat.voice_note": { en: "voice", tr: "ses" },
  "chat.turn_in_flight": { en: "The consultant is still working on the previous answer.", tr: "Danışman önceki cevap üzerinde çalışıyor." },
  "chat.retry": { en: "Retry", tr: "Tekrar dene" },
  "chat.turn_failed": { en: "That didn't get through.", tr: "Bu iletilemedi." },
  "chat.completed": { en: "Interview complete. The report tab is ready.", tr: "Görüşme tamamlandı. Rapor sekmesi hazır." },
  "chat.priorities.hint": {
    en: "Tell the consultant which areas matter most, or set the order directly:",
    tr: "Danışmana hangi alanların öncelikli olduğunu söyleyin ya da sırayı doğrudan belirleyin:",
  },
  "chat.priorities.placeholder": { en: "e.g. supply, production, r&d", tr: "örn. tedarik, üretim, ar-ge" },
  "chat.priorities.set": { en: "Set priorities", tr: "Öncelikleri belirle" },
  "progress.label": { en: "Questions answered", tr: "Yanıtlanan sorular" },
  "report.heading": { en: "Findings", tr: "Bulgular" },
  "report.generate": { en: "Generate report", tr: "Rapor oluştur" },
  "report.generate_scored": { en: "Generate with maturity scores", tr: "Olgunluk puanlarıyla oluştur" },
  "report.none": { en: "No report yet for this session.", tr: "Bu görüşme için henüz rapor yok." },
  "report.current_practices": { en: "Current practices", tr: "Mevcut uygulamalar" },
  "report.challenges": { en: "Challenges", tr: "Zorluklar" },
  "report.strategic_goals": { en: "Strategic goals", tr: "Stratejik hedefler" },
  "report.scores": { en: "Maturity scores", tr: "Olgunluk puanları" },
  "report.empty_section": { en: "none identified", tr: "tespit edilmedi" },
  "error.unauthorized": { en: "The access token was rejected.", tr: "Erişim anahtarı reddedildi." },
  "error.not_found": { en: "That session no longer exists.", tr: "Bu görüşme artık mevcut değil." },
  "error.generic": { en: "Something went wrong.", tr: "Bir şeyler ters gitti." },
};

let current: Locale = "en";

export function setLocale(locale: Locale): void {
  current = locale;
}

export function getLocale(): Locale {
  return current;
}

export function t(key: string): string {
  const entry = STRINGS[key];
  if (!entry) return key; // visible fallback beats a crash
  return entry[current] ?? entry.en;
}

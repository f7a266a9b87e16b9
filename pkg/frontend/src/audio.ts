// Microphone capture via the browser's MediaRecorder, producing webm/opus.
// Transcription happens server-side; no audio processing in the client.

export function recordingSupported(): boolean {
  return typeof MediaRecorder !== "undefined"
    && !!navigator.mediaDevices?.getUserMedia;
}

export class Recorder {
  private recorder: MediaRecorder | null = null;
  private chunks: BlobPart[] = [];

  async start(): Promise<void> {
    const stream = await navigator.mediaDevices.getUserMedia({ audio: true });
    this.chunks = [];
    this.recorder = new MediaRecorder(stream, { mimeType: "audio/webm" });
    this.recorder.ondataavailable = (event) => {
      if (event.data.size > 0) this.chunks.push(event.data);
    };
    this.recorder.start();
  }

  stop(): Promise<Blob> {
    return new Promise((resolve, reject) => {
      const recorder = this.recorder;
      if (!recorder) {
        reject(new Error("not recording"));
        return;
      }
      recorder.onstop = () => {
        recorder.stream.getTracks().forEach((track) => track.stop());
        this.recorder = null;
        resolve(new Blob(this.chunks, { type: "audio/webm" }));
      };
      recorder.stop();
    });
  }

  get active(): boolean {
    return this.recorder !== null;
  }
}

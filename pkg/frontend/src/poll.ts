import { ApiError, GatewayApi, JobRecord } from "./api";

export interface JobPollerEvents {
  onStatus: (job: JobRecord) => void;
  onTerminal: (job: JobRecord) => void;
  onError: (code: string, message: string, consecutiveFailures: number) => void;
  onBanner: (message: string) => void;
}

// Polls a job to its terminal state: 1s interval backing off to 5s.
// Network failures retry on the same backoff; after 5 consecutive failures
// a banner fires (and polling keeps trying). NotFound stops immediately.
export class JobPoller {
  initialDelayMs = 1000;
  maxDelayMs = 5000;
  backoffFactor = 2;
  bannerThreshold = 5;

  private delayMs = this.initialDelayMs;
  private failures = 0;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private stopped = true;

  constructor(
    private api: GatewayApi,
    private jobId: string,
    private events: JobPollerEvents,
  ) {}

  start(): void {
    this.stopped = false;
    this.delayMs = this.initialDelayMs;
    this.failures = 0;
    void this.tick();
  }

  stop(): void {
    this.stopped = true;
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
  }

  get running(): boolean {
    return !this.stopped;
  }

  private async tick(): Promise<void> {
    if (this.stopped) return;
    try {
      const job = await this.api.jobStatus(this.jobId);
      this.failures = 0;
      this.events.onStatus(job);
      if (job.status === "done" || job.status === "failed") {
        this.stop();
        this.events.onTerminal(job);
        return;
      }
    } catch (err) {
      const apiErr =
        err instanceof ApiError ? err : new ApiError("NetworkError", String(err), 0);
      if (apiErr.code === "NotFound") {
        this.stop();
        this.events.onError(apiErr.code, apiErr.message, 1);
        return;
      }
      this.failures += 1;
      this.events.onError(apiErr.code, apiErr.message, this.failures);
      if (this.failures === this.bannerThreshold) {
        this.events.onBanner(
          `still cannot reach the server after ${this.failures} attempts; retrying`,
        );
      }
    }
    if (this.stopped) return;
    this.timer = setTimeout(() => void this.tick(), this.delayMs);
    this.delayMs = Math.min(this.maxDelayMs, Math.floor(this.delayMs * this.backoffFactor));
  }
}

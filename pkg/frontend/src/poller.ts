/** Repeatedly run an async task on a fixed interval (default 5 s). */
export class Poller {
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private task: () => Promise<void>,
    public intervalMs = 5000,
  ) {}

  start(): void {
    if (this.timer !== null) return;
    void this.task(); // immediate first run, then on the interval
    this.timer = setInterval(() => void this.task(), this.intervalMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }
}

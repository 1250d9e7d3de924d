import { ApiClient } from './api';
import type { CueData } from './types';

export interface CaptionOverlayOptions {
  api: ApiClient;
  sessionId: string;
  video: HTMLVideoElement;
  /** Caption window fetched ahead of playback, in milliseconds. */
  windowMs?: number;
}

/**
 * Renders the transformed caption for the current playback position on
 * top of a video element. Cues are fetched window by window; preference
 * changes take effect from the next fetched window (call `refresh()`).
 */
export class CaptionOverlay {
  readonly el: HTMLElement;
  private readonly options: CaptionOverlayOptions;
  private readonly windowMs: number;
  private cues: CueData[] = [];
  private windowStart = -1;
  private windowEnd = -1;
  private fetching = false;
  private readonly onTimeUpdate: () => void;

  constructor(options: CaptionOverlayOptions) {
    this.options = options;
    this.windowMs = options.windowMs ?? 30_000;
    this.el = document.createElement('div');
    this.el.className = 'caption-overlay';
    this.el.style.display = 'none';

    const container = options.video.parentElement ?? document.body;
    container.appendChild(this.el);

    this.onTimeUpdate = () => {
      void this.tick(Math.floor(options.video.currentTime * 1000));
    };
    options.video.addEventListener('timeupdate', this.onTimeUpdate);
  }

  /** Drop fetched cues so the next tick re-fetches with current prefs. */
  refresh(): void {
    this.cues = [];
    this.windowStart = -1;
    this.windowEnd = -1;
  }

  detach(): void {
    this.options.video.removeEventListener('timeupdate', this.onTimeUpdate);
    this.el.remove();
  }

  async tick(positionMs: number): Promise<void> {
    if (positionMs < this.windowStart || positionMs >= this.windowEnd) {
      if (this.fetching) {
        return;
      }
      this.fetching = true;
      const start = Math.max(0, positionMs - 1000);
      try {
        const response = await this.options.api.getCaptions(
          this.options.sessionId, start, positionMs + this.windowMs);
        this.cues = response.cues;
        this.windowStart = start;
        this.windowEnd = positionMs + this.windowMs;
      } finally {
        this.fetching = false;
      }
    }
    this.render(positionMs);
  }

  private render(positionMs: number): void {
    const active = this.cues.find(
      (cue) => cue.start_ms <= positionMs && positionMs < cue.end_ms);
    if (!active) {
      this.el.style.display = 'none';
      this.el.textContent = '';
      return;
    }
    if (this.el.textContent !== active.text) {
      this.el.textContent = active.text;
    }
    this.el.style.display = 'block';
  }
}

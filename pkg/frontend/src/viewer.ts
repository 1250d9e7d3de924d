import { ApiClient, ApiError } from './api';
import { ChatPanel } from './chatPanel';
import { StyleGrid } from './grid';
import { CaptionOverlay } from './overlay';
import type { PrefsData, ProjectConfigData, SoundRepresentation } from './types';

const REPRESENTATIONS: Array<[SoundRepresentation, string]> = [
  ['default', 'Default'],
  ['source_focused', 'Source-focused'],
  ['onomatopoeia', 'Onomatopoeia'],
  ['sensory_quality', 'Sensory quality'],
];

/**
 * Viewer view: local video file with a caption overlay, the style grid,
 * sound-representation and genre toggles, and the chat panel. The video
 * never leaves the machine; only caption requests hit the service.
 */
export class ViewerView {
  readonly el: HTMLElement;
  private readonly api: ApiClient;
  private sessionId: string | null = null;
  private grid: StyleGrid | null = null;
  private chat: ChatPanel | null = null;
  private overlay: CaptionOverlay | null = null;
  private readonly statusEl: HTMLElement;
  private readonly controlsEl: HTMLElement;
  private readonly videoEl: HTMLVideoElement;
  private readonly videoWrap: HTMLElement;
  private modeButtons = new Map<SoundRepresentation, HTMLButtonElement>();
  private genreToggle: HTMLInputElement | null = null;

  constructor(api: ApiClient) {
    this.api = api;
    this.el = document.createElement('div');
    this.el.className = 'viewer-view';

    this.statusEl = document.createElement('p');
    this.statusEl.className = 'status';
    this.controlsEl = document.createElement('div');
    this.controlsEl.className = 'viewer-controls';

    this.videoWrap = document.createElement('div');
    this.videoWrap.className = 'video-wrap';
    this.videoEl = document.createElement('video');
    this.videoEl.controls = true;
    this.videoWrap.appendChild(this.videoEl);

    this.el.append(this.buildLoaders(), this.statusEl, this.videoWrap,
                   this.controlsEl);
  }

  private buildLoaders(): HTMLElement {
    const bar = document.createElement('div');
    bar.className = 'toolbar';

    const configInput = document.createElement('input');
    configInput.type = 'file';
    configInput.accept = '.json,.captune.json';
    configInput.addEventListener('change', () => {
      const file = configInput.files?.[0];
      if (file) {
        void file.text().then((text) => this.openSession(JSON.parse(text)));
      }
    });

    const videoInput = document.createElement('input');
    videoInput.type = 'file';
    videoInput.accept = 'video/*';
    videoInput.addEventListener('change', () => {
      const file = videoInput.files?.[0];
      if (file) {
        this.videoEl.src = URL.createObjectURL(file);
      }
    });

    bar.append(configInput, videoInput);
    return bar;
  }

  async openSession(config: ProjectConfigData): Promise<void> {
    try {
      const created = await this.api.createSession(config);
      this.sessionId = created.session_id;
      this.buildControls(config, created.prefs);
      this.statusEl.textContent =
        `Session ready for "${config.metadata.title || config.original_track.source_name}".`;
    } catch (error) {
      this.statusEl.textContent = error instanceof ApiError
        ? `${error.payload.code}: ${error.payload.message}`
        : String(error);
    }
  }

  private buildControls(config: ProjectConfigData, prefs: PrefsData): void {
    if (!this.sessionId) return;
    const sessionId = this.sessionId;
    this.controlsEl.replaceChildren();
    this.overlay?.detach();

    this.grid = new StyleGrid({
      space: config.space,
      onSelect: (cell) => {
        void this.api.setPrefs(sessionId, { cell }).then(
          (response) => this.applyPrefs(response.prefs),
          (error) => { this.statusEl.textContent = String(error); });
      },
    });
    this.grid.setSelected(prefs.target);

    const modes = document.createElement('div');
    modes.className = 'mode-toggles';
    this.modeButtons = new Map();
    for (const [value, label] of REPRESENTATIONS) {
      const button = document.createElement('button');
      button.textContent = label;
      button.className = value === prefs.representation ? 'mode active' : 'mode';
      button.addEventListener('click', () => {
        void this.api.setPrefs(sessionId, { representation: value }).then(
          (response) => this.applyPrefs(response.prefs));
      });
      this.modeButtons.set(value, button);
      modes.appendChild(button);
    }

    const genreLabel = document.createElement('label');
    genreLabel.className = 'genre-toggle';
    this.genreToggle = document.createElement('input');
    this.genreToggle.type = 'checkbox';
    this.genreToggle.checked = prefs.genre_aligned;
    this.genreToggle.addEventListener('change', () => {
      void this.api.setPrefs(sessionId, {
        genre_aligned: this.genreToggle!.checked,
      }).then((response) => this.applyPrefs(response.prefs));
    });
    genreLabel.append(this.genreToggle, document.createTextNode(' Match genre'));
    modes.appendChild(genreLabel);

    this.chat = new ChatPanel({
      api: this.api,
      sessionId,
      onPrefs: (updated) => this.applyPrefs(updated),
    });

    this.overlay = new CaptionOverlay({
      api: this.api,
      sessionId,
      video: this.videoEl,
    });

    this.controlsEl.append(this.grid.el, modes, this.chat.el);
  }

  /** Server preferences are authoritative; mirror them everywhere. */
  applyPrefs(prefs: PrefsData): void {
    this.grid?.setSelected(prefs.target);
    for (const [value, button] of this.modeButtons) {
      button.className = value === prefs.representation ? 'mode active' : 'mode';
    }
    if (this.genreToggle) {
      this.genreToggle.checked = prefs.genre_aligned;
    }
    this.overlay?.refresh();
  }
}

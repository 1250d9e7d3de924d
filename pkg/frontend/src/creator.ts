import { ApiClient, ApiError } from './api';
import { SliderPreviewPanel } from './sliderPreview';
import type { CueData, ParamPointData } from './types';

type CueRow = Omit<CueData, 'transformed'>;

/**
 * Creator view: upload a caption file, review the cue list with NSI
 * highlighting, calibrate, explore previews per cue, edit/lock cues,
 * set the anchors, and export the project configuration.
 */
export class CreatorView {
  readonly el: HTMLElement;
  private readonly api: ApiClient;
  private projectId: string | null = null;
  private cues: CueRow[] = [];
  private selectedCue: number | null = null;
  private readonly statusEl: HTMLElement;
  private readonly listEl: HTMLElement;
  private readonly previewHost: HTMLElement;
  private previewPanel: SliderPreviewPanel | null = null;

  constructor(api: ApiClient) {
    this.api = api;
    this.el = document.createElement('div');
    this.el.className = 'creator-view';

    this.statusEl = document.createElement('p');
    this.statusEl.className = 'status';
    this.listEl = document.createElement('div');
    this.listEl.className = 'cue-list';
    this.previewHost = document.createElement('div');

    this.el.append(
      this.buildUploadForm(),
      this.statusEl,
      this.buildToolbar(),
      this.listEl,
      this.previewHost,
    );
  }

  private setStatus(text: string): void {
    this.statusEl.textContent = text;
  }

  private buildUploadForm(): HTMLElement {
    const form = document.createElement('form');
    form.className = 'upload-form';
    const file = document.createElement('input');
    file.type = 'file';
    file.accept = '.srt';
    const title = document.createElement('input');
    title.placeholder = 'Title';
    const genre = document.createElement('input');
    genre.placeholder = 'Genre';
    const synopsis = document.createElement('input');
    synopsis.placeholder = 'Synopsis';
    const submit = document.createElement('button');
    submit.type = 'submit';
    submit.textContent = 'Create project';
    form.append(file, title, genre, synopsis, submit);

    form.addEventListener('submit', (event) => {
      event.preventDefault();
      const selected = file.files?.[0];
      if (!selected) {
        this.setStatus('Choose an .srt file first.');
        return;
      }
      void selected.text().then(async (srt) => {
        try {
          const created = await this.api.createProject(srt, {
            title: title.value, genre: genre.value, synopsis: synopsis.value,
          });
          this.projectId = created.project_id;
          this.setStatus(`Project ${created.project_id} created.`);
          await this.reloadCuesFrom(srt);
        } catch (error) {
          this.setStatus(this.describe(error));
        }
      });
    });
    return form;
  }

  private buildToolbar(): HTMLElement {
    const bar = document.createElement('div');
    bar.className = 'toolbar';

    const calibrate = document.createElement('button');
    calibrate.textContent = 'Calibrate';
    calibrate.addEventListener('click', () => void this.calibrate());

    const lower = document.createElement('input');
    lower.placeholder = 'lower d,e';
    lower.value = '2,2';
    const upper = document.createElement('input');
    upper.placeholder = 'upper d,e';
    upper.value = '8,7';
    const anchors = document.createElement('button');
    anchors.textContent = 'Set anchors';
    anchors.addEventListener('click', () =>
      void this.setAnchors(lower.value, upper.value));

    const exportBtn = document.createElement('button');
    exportBtn.textContent = 'Export config';
    exportBtn.addEventListener('click', () => void this.exportConfig());

    bar.append(calibrate, lower, upper, anchors, exportBtn);
    return bar;
  }

  private async reloadCuesFrom(srt: string): Promise<void> {
    // The list view parses locally only for display; the service owns the data.
    this.cues = parseSrtForDisplay(srt);
    this.renderList();
  }

  private renderList(): void {
    this.listEl.replaceChildren();
    for (const cue of this.cues) {
      const row = document.createElement('div');
      row.className = cue.kind === 'nsi' ? 'cue-row nsi' : 'cue-row';
      if (cue.index === this.selectedCue) {
        row.classList.add('previewing');
      }
      const label = document.createElement('span');
      label.textContent = `#${cue.index} ${formatMs(cue.start_ms)} ${cue.text}`;
      row.appendChild(label);
      if (cue.kind === 'nsi') {
        if (cue.category) {
          const tag = document.createElement('span');
          tag.className = 'category-tag';
          tag.textContent = cue.category.replace('_', ' ');
          row.appendChild(tag);
        }
        const lockToggle = document.createElement('button');
        lockToggle.textContent = cue.locked ? 'Unlock' : 'Lock';
        lockToggle.addEventListener('click', () => void this.toggleLock(cue, lockToggle));
        const previewBtn = document.createElement('button');
        previewBtn.textContent = 'Preview';
        previewBtn.addEventListener('click', () => this.openPreview(cue.index));
        row.append(lockToggle, previewBtn);
      }
      this.listEl.appendChild(row);
    }
  }

  private async toggleLock(cue: CueRow, button: HTMLButtonElement): Promise<void> {
    if (!this.projectId) return;
    try {
      cue.locked = !cue.locked;
      button.textContent = cue.locked ? 'Unlock' : 'Lock';
      await this.api.updateCue(this.projectId, cue.index, { lock: cue.locked });
    } catch (error) {
      cue.locked = !cue.locked;
      button.textContent = cue.locked ? 'Unlock' : 'Lock';
      this.setStatus(this.describe(error));
    }
  }

  private openPreview(cueIndex: number): void {
    if (!this.projectId) return;
    this.selectedCue = cueIndex;
    this.renderList();
    this.previewHost.replaceChildren();
    this.previewPanel = new SliderPreviewPanel({
      api: this.api,
      projectId: this.projectId,
      cueIndex,
    });
    this.previewHost.appendChild(this.previewPanel.el);
  }

  private async calibrate(): Promise<void> {
    if (!this.projectId) {
      this.setStatus('Create a project first.');
      return;
    }
    try {
      const baseline = await this.api.calibrate(this.projectId);
      this.setStatus(`Baseline: detail ${baseline.detail}, `
        + `expressiveness ${baseline.expressiveness}`);
    } catch (error) {
      this.setStatus(this.describe(error));
    }
  }

  private async setAnchors(lowerRaw: string, upperRaw: string): Promise<void> {
    if (!this.projectId) {
      this.setStatus('Create a project first.');
      return;
    }
    const lower = parsePoint(lowerRaw);
    const upper = parsePoint(upperRaw);
    if (!lower || !upper) {
      this.setStatus("Anchors must look like '2,2'.");
      return;
    }
    try {
      await this.api.setAnchors(this.projectId, lower, upper);
      this.setStatus(`Anchors set: (${lowerRaw}) to (${upperRaw}).`);
    } catch (error) {
      this.setStatus(this.describe(error));
    }
  }

  private async exportConfig(): Promise<void> {
    if (!this.projectId) {
      this.setStatus('Create a project first.');
      return;
    }
    try {
      const payload = await this.api.exportConfig(this.projectId);
      const blob = new Blob([payload], { type: 'application/json' });
      const link = document.createElement('a');
      link.href = URL.createObjectURL(blob);
      link.download = 'project.captune.json';
      link.click();
      URL.revokeObjectURL(link.href);
      this.setStatus('Configuration exported.');
    } catch (error) {
      this.setStatus(this.describe(error));
    }
  }

  private describe(error: unknown): string {
    if (error instanceof ApiError) {
      return `${error.payload.code}: ${error.payload.message}`;
    }
    return error instanceof Error ? error.message : String(error);
  }
}

function parsePoint(raw: string): ParamPointData | null {
  const parts = raw.split(',').map((p) => Number(p.trim()));
  if (parts.length !== 2 || parts.some(Number.isNaN)) {
    return null;
  }
  return { detail: parts[0], expressiveness: parts[1] };
}

function formatMs(ms: number): string {
  const total = Math.floor(ms / 1000);
  const minutes = Math.floor(total / 60);
  const seconds = total % 60;
  return `${String(minutes).padStart(2, '0')}:${String(seconds).padStart(2, '0')}`;
}

/** Display-only SRT scan (brackets mark NSI); the service owns parsing. */
export function parseSrtForDisplay(srt: string): CueRow[] {
  const cues: CueRow[] = [];
  const blocks = srt.replace(/^﻿/, '').split(/\r?\n\r?\n/);
  for (const block of blocks) {
    const lines = block.split(/\r?\n/).filter((line) => line.trim() !== '');
    if (lines.length < 3) continue;
    const index = Number(lines[0].trim());
    const timing = lines[1].match(
      /^(\d{2}):(\d{2}):(\d{2}),(\d{3})\s+-->\s+(\d{2}):(\d{2}):(\d{2}),(\d{3})/);
    if (!Number.isInteger(index) || !timing) continue;
    const toMs = (h: string, m: string, s: string, f: string) =>
      ((Number(h) * 60 + Number(m)) * 60 + Number(s)) * 1000 + Number(f);
    const text = lines.slice(2).join('\n');
    const trimmed = text.trim();
    const nsi = (trimmed.startsWith('[') && trimmed.endsWith(']'))
      || (trimmed.startsWith('(') && trimmed.endsWith(')'));
    cues.push({
      index,
      start_ms: toMs(timing[1], timing[2], timing[3], timing[4]),
      end_ms: toMs(timing[5], timing[6], timing[7], timing[8]),
      text,
      kind: nsi ? 'nsi' : 'speech',
      category: null,
      locked: false,
    });
  }
  return cues;
}

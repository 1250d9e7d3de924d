import { ApiClient } from './api';
import { debounce } from './debounce';
import type { PreviewResponse } from './types';

export interface SliderPreviewOptions {
  api: ApiClient;
  projectId: string;
  cueIndex: number;
  /** Debounce window for slider drags; at most one request per period. */
  debounceMs?: number;
  onResult?: (result: PreviewResponse) => void;
}

/**
 * Creator-side preview panel: two sliders in the symmetric -10..10 range
 * drive debounced preview requests; the response caption is rendered
 * verbatim together with the mapped parameter values.
 */
export class SliderPreviewPanel {
  readonly el: HTMLElement;
  readonly detailSlider: HTMLInputElement;
  readonly exprSlider: HTMLInputElement;
  readonly captionEl: HTMLElement;
  readonly valuesEl: HTMLElement;
  private readonly requestPreview: ((detail: number, expr: number) => void) & { cancel: () => void };
  private readonly options: SliderPreviewOptions;
  private generation = 0;

  constructor(options: SliderPreviewOptions) {
    this.options = options;
    this.el = document.createElement('div');
    this.el.className = 'slider-preview';

    this.detailSlider = this.buildSlider('Level of Detail');
    this.exprSlider = this.buildSlider('Expressiveness');
    this.captionEl = document.createElement('p');
    this.captionEl.className = 'preview-caption';
    this.valuesEl = document.createElement('p');
    this.valuesEl.className = 'preview-values';
    this.el.append(this.captionEl, this.valuesEl);

    this.requestPreview = debounce((detail: number, expr: number) => {
      void this.issue(detail, expr);
    }, options.debounceMs ?? 300);
  }

  private buildSlider(label: string): HTMLInputElement {
    const wrapper = document.createElement('label');
    wrapper.className = 'slider-row';
    wrapper.textContent = label;
    const input = document.createElement('input');
    input.type = 'range';
    input.min = '-10';
    input.max = '10';
    input.step = '1';
    input.value = '0';
    input.addEventListener('input', () => this.scheduled());
    wrapper.appendChild(input);
    this.el.appendChild(wrapper);
    return input;
  }

  private scheduled(): void {
    this.requestPreview(Number(this.detailSlider.value), Number(this.exprSlider.value));
  }

  private async issue(detail: number, expr: number): Promise<void> {
    const generation = ++this.generation;
    try {
      const result = await this.options.api.preview(
        this.options.projectId, this.options.cueIndex, detail, expr);
      if (generation !== this.generation) {
        return; // a newer drag superseded this response
      }
      this.captionEl.textContent = result.text;
      this.valuesEl.textContent =
        `detail ${result.values.detail.toFixed(1)}, ` +
        `expressiveness ${result.values.expressiveness.toFixed(1)}` +
        (result.recalibrated_expressiveness === null
          ? ''
          : ` (expressiveness recalibrated to ${result.recalibrated_expressiveness})`);
      this.options.onResult?.(result);
    } catch (error) {
      if (generation === this.generation) {
        this.captionEl.textContent = '';
        this.valuesEl.textContent = error instanceof Error ? error.message : String(error);
      }
    }
  }
}

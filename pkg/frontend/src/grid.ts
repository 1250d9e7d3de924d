import type { ParamPointData, SpaceData } from './types';

export interface GridCellView {
  detail: number;
  expressiveness: number;
  enabled: boolean;
  selected: boolean;
}

export interface StyleGridOptions {
  space: SpaceData;
  /** Called only for enabled cells; the caller issues the request. */
  onSelect: (cell: { detail: number; expressiveness: number }) => void;
}

const CORNER_LABELS: Array<[string, string]> = [
  ['top-left', 'Evocative'],
  ['top-right', 'Cinematic'],
  ['bottom-left', 'Minimalist'],
  ['bottom-right', 'Informative'],
];

/**
 * The 10x10 style selector: level of detail on the horizontal axis,
 * expressiveness on the vertical axis (10 at the top). Cells outside the
 * creator-defined anchors are disabled and never issue a request; exactly
 * one cell is selected at any time.
 */
export class StyleGrid {
  readonly el: HTMLElement;
  private readonly cells = new Map<string, HTMLButtonElement>();
  private readonly space: SpaceData;
  private readonly onSelect: StyleGridOptions['onSelect'];
  private selected: ParamPointData;

  constructor(options: StyleGridOptions) {
    this.space = options.space;
    this.onSelect = options.onSelect;
    this.selected = { ...options.space.baseline };

    this.el = document.createElement('div');
    this.el.className = 'style-grid';

    const table = document.createElement('div');
    table.className = 'style-grid-cells';
    for (let expressiveness = 10; expressiveness >= 1; expressiveness--) {
      for (let detail = 1; detail <= 10; detail++) {
        table.appendChild(this.buildCell(detail, expressiveness));
      }
    }
    for (const [corner, label] of CORNER_LABELS) {
      const tag = document.createElement('span');
      tag.className = `style-grid-corner style-grid-corner-${corner}`;
      tag.textContent = label;
      this.el.appendChild(tag);
    }
    this.el.appendChild(table);
    this.applySelection();
  }

  private isEnabled(detail: number, expressiveness: number): boolean {
    const { lower_anchor, upper_anchor } = this.space;
    return detail >= lower_anchor.detail && detail <= upper_anchor.detail
      && expressiveness >= lower_anchor.expressiveness
      && expressiveness <= upper_anchor.expressiveness;
  }

  private buildCell(detail: number, expressiveness: number): HTMLButtonElement {
    const cell = document.createElement('button');
    const enabled = this.isEnabled(detail, expressiveness);
    cell.type = 'button';
    cell.className = enabled ? 'grid-cell enabled' : 'grid-cell disabled';
    cell.dataset.detail = String(detail);
    cell.dataset.expressiveness = String(expressiveness);
    cell.title = enabled
      ? `Level of Detail ${detail}, Expressiveness ${expressiveness}`
      : 'Outside the creator-defined range';
    cell.addEventListener('click', () => {
      if (!enabled) {
        cell.classList.add('show-tooltip');
        setTimeout(() => cell.classList.remove('show-tooltip'), 1200);
        return;
      }
      this.onSelect({ detail, expressiveness });
    });
    this.cells.set(`${detail},${expressiveness}`, cell);
    return cell;
  }

  /** Sync the highlighted cell with the server's effective preferences. */
  setSelected(target: ParamPointData): void {
    this.selected = {
      detail: Math.round(target.detail),
      expressiveness: Math.round(target.expressiveness),
    };
    this.applySelection();
  }

  private applySelection(): void {
    for (const cell of this.cells.values()) {
      cell.classList.remove('selected');
    }
    const key = `${Math.round(this.selected.detail)},${Math.round(this.selected.expressiveness)}`;
    this.cells.get(key)?.classList.add('selected');
  }

  cellViews(): GridCellView[] {
    const views: GridCellView[] = [];
    for (const cell of this.cells.values()) {
      views.push({
        detail: Number(cell.dataset.detail),
        expressiveness: Number(cell.dataset.expressiveness),
        enabled: cell.classList.contains('enabled'),
        selected: cell.classList.contains('selected'),
      });
    }
    return views;
  }
}

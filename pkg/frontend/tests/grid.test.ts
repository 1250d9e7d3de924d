import { afterEach, describe, expect, it, vi } from 'vitest';
import { ApiClient } from '../src/api';
import { StyleGrid } from '../src/grid';
import { JAMIE_SPACE, stubServer } from './helpers';

afterEach(() => {
  vi.unstubAllGlobals();
});

function cellAt(grid: StyleGrid, detail: number, expressiveness: number): HTMLButtonElement {
  const cell = grid.el.querySelector<HTMLButtonElement>(
    `[data-detail="${detail}"][data-expressiveness="${expressiveness}"]`);
  if (!cell) throw new Error(`no cell (${detail}, ${expressiveness})`);
  return cell;
}

describe('StyleGrid', () => {
  it('enables exactly the 42 cells inside the anchors', () => {
    const grid = new StyleGrid({ space: JAMIE_SPACE, onSelect: () => {} });
    const views = grid.cellViews();
    expect(views).toHaveLength(100);
    expect(views.filter((v) => v.enabled)).toHaveLength(42);
    for (const view of views) {
      const inside = view.detail >= 2 && view.detail <= 8
        && view.expressiveness >= 2 && view.expressiveness <= 7;
      expect(view.enabled).toBe(inside);
    }
  });

  it('pre-selects the baseline cell', () => {
    const grid = new StyleGrid({ space: JAMIE_SPACE, onSelect: () => {} });
    const selected = grid.cellViews().filter((v) => v.selected);
    expect(selected).toHaveLength(1);
    expect(selected[0]).toMatchObject({ detail: 3, expressiveness: 2 });
  });

  it('issues no request when a disabled cell is clicked', () => {
    const { calls } = stubServer(() => ({ prefs: {} }));
    const api = new ApiClient('http://stub');
    const grid = new StyleGrid({
      space: JAMIE_SPACE,
      onSelect: (cell) => void api.setPrefs('session-1', { cell }),
    });

    cellAt(grid, 9, 9).click();
    cellAt(grid, 1, 1).click();
    expect(calls).toHaveLength(0);

    cellAt(grid, 6, 5).click();
    expect(calls).toHaveLength(1);
    expect(calls[0].method).toBe('PUT');
    expect(calls[0].url).toBe('http://stub/sessions/session-1/prefs');
    expect(calls[0].body).toEqual({ cell: { detail: 6, expressiveness: 5 } });
  });

  it('shows a tooltip hint on disabled cells instead of selecting', () => {
    const onSelect = vi.fn();
    const grid = new StyleGrid({ space: JAMIE_SPACE, onSelect });
    const disabled = cellAt(grid, 10, 10);
    disabled.click();
    expect(onSelect).not.toHaveBeenCalled();
    expect(disabled.classList.contains('show-tooltip')).toBe(true);
    expect(disabled.title).toMatch(/outside/i);
  });

  it('mirrors the server selection via setSelected', () => {
    const grid = new StyleGrid({ space: JAMIE_SPACE, onSelect: () => {} });
    grid.setSelected({ detail: 6, expressiveness: 5 });
    const selected = grid.cellViews().filter((v) => v.selected);
    expect(selected).toHaveLength(1);
    expect(selected[0]).toMatchObject({ detail: 6, expressiveness: 5 });
  });

  it('renders the four corner reference labels', () => {
    const grid = new StyleGrid({ space: JAMIE_SPACE, onSelect: () => {} });
    const labels = Array.from(
      grid.el.querySelectorAll('.style-grid-corner'),
      (node) => node.textContent);
    expect(labels).toEqual(
      expect.arrayContaining(['Minimalist', 'Informative', 'Evocative', 'Cinematic']));
  });
});

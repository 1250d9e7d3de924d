import { afterEach, describe, expect, it, vi } from 'vitest';
import { ApiClient, ApiError } from '../src/api';
import { parseSrtForDisplay } from '../src/creator';

afterEach(() => {
  vi.unstubAllGlobals();
});

describe('ApiClient', () => {
  it('raises ApiError with the service payload on failures', async () => {
    vi.stubGlobal('fetch', vi.fn(async () => ({
      ok: false,
      status: 422,
      statusText: 'Unprocessable Entity',
      json: async () => ({
        code: 'DisabledCell',
        message: 'cell (9, 9) is outside the creator-defined boundaries',
        details: { cell: [9, 9] },
      }),
    }) as unknown as Response));

    const api = new ApiClient('http://stub');
    const error = await api.setPrefs('s1', {
      cell: { detail: 9, expressiveness: 9 },
    }).catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.status).toBe(422);
    expect(error.payload.code).toBe('DisabledCell');
  });

  it('builds caption window queries', async () => {
    const urls: string[] = [];
    vi.stubGlobal('fetch', vi.fn(async (url: RequestInfo | URL) => {
      urls.push(String(url));
      return {
        ok: true, status: 200, statusText: 'OK',
        json: async () => ({ cues: [] }),
      } as unknown as Response;
    }));

    const api = new ApiClient('http://stub');
    await api.getCaptions('s1', 0, 5000);
    await api.getCaptions('s1');
    expect(urls[0]).toBe('http://stub/sessions/s1/captions?from_ms=0&to_ms=5000');
    expect(urls[1]).toBe('http://stub/sessions/s1/captions');
  });
});

describe('parseSrtForDisplay', () => {
  it('flags fully wrapped cues as non-speech', () => {
    const cues = parseSrtForDisplay(
      '1\n00:00:01,000 --> 00:00:02,500\n[Loud thunder sound]\n\n'
      + '2\n00:00:04,000 --> 00:00:05,500\nBella? Where are you?\n');
    expect(cues).toHaveLength(2);
    expect(cues[0]).toMatchObject({ index: 1, start_ms: 1000, kind: 'nsi' });
    expect(cues[1].kind).toBe('speech');
  });

  it('keeps multi-line text together', () => {
    const cues = parseSrtForDisplay(
      '1\n00:00:01,000 --> 00:00:04,000\nfirst line\nsecond line\n');
    expect(cues[0].text).toBe('first line\nsecond line');
  });
});

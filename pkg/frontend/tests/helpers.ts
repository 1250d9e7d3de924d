import { vi } from 'vitest';
import type { SpaceData } from '../src/types';

export const JAMIE_SPACE: SpaceData = {
  baseline: { detail: 3, expressiveness: 2 },
  lower_anchor: { detail: 2, expressiveness: 2 },
  upper_anchor: { detail: 8, expressiveness: 7 },
};

export interface StubCall {
  url: string;
  method: string;
  body: unknown;
}

/**
 * Installs a stub server on global fetch. Each handler receives the
 * parsed request and returns the JSON payload to respond with.
 */
export function stubServer(
  handler: (call: StubCall) => unknown,
): { calls: StubCall[] } {
  const calls: StubCall[] = [];
  const fetchStub = vi.fn(async (url: RequestInfo | URL, init?: RequestInit) => {
    const call: StubCall = {
      url: String(url),
      method: init?.method ?? 'GET',
      body: init?.body ? JSON.parse(String(init.body)) : undefined,
    };
    calls.push(call);
    const payload = handler(call);
    return {
      ok: true,
      status: 200,
      statusText: 'OK',
      json: async () => payload,
      text: async () => JSON.stringify(payload),
    } as unknown as Response;
  });
  vi.stubGlobal('fetch', fetchStub);
  return { calls };
}

import { afterEach, describe, expect, it, vi } from 'vitest';
import { ApiClient } from '../src/api';
import { ChatPanel } from '../src/chatPanel';
import type { PrefsData } from '../src/types';
import { stubServer } from './helpers';

afterEach(() => {
  vi.unstubAllGlobals();
});

const UPDATED_PREFS: PrefsData = {
  target: { detail: 2, expressiveness: 2 },
  representation: 'source_focused',
  genre_aligned: false,
};

describe('ChatPanel', () => {
  it('sends the utterance and renders the reply verbatim', async () => {
    const reply = "I've decreased the Level of Detail (now at 2) and changed "
      + 'the sound representation mode to Source-focused. Your preferences '
      + 'have been updated.';
    const { calls } = stubServer(() => ({
      intent: { recognized: true, explanation: '', detail_delta: -2,
                expressiveness_delta: null, representation: 'source_focused',
                genre_aligned: null },
      prefs: UPDATED_PREFS,
      reply,
    }));
    const onPrefs = vi.fn();
    const panel = new ChatPanel({
      api: new ApiClient('http://stub'), sessionId: 's1', onPrefs,
    });

    panel.input.value = 'I want to know what is making the sounds, but keep it brief';
    await panel.send();

    expect(calls[0].url).toBe('http://stub/sessions/s1/chat');
    const entries = Array.from(
      panel.log.querySelectorAll('.chat-entry'), (node) => node.textContent);
    expect(entries[1]).toBe(reply);
    expect(onPrefs).toHaveBeenCalledWith(UPDATED_PREFS);
  });

  it('does not apply preferences for unrecognized intents', async () => {
    stubServer(() => ({
      intent: { recognized: false, explanation: 'no mapping', detail_delta: null,
                expressiveness_delta: null, representation: null,
                genre_aligned: null },
      prefs: UPDATED_PREFS,
      reply: 'no mapping',
    }));
    const onPrefs = vi.fn();
    const panel = new ChatPanel({
      api: new ApiClient('http://stub'), sessionId: 's1', onPrefs,
    });

    panel.input.value = 'hello';
    await panel.send();

    expect(onPrefs).not.toHaveBeenCalled();
  });

  it('ignores empty input', async () => {
    const { calls } = stubServer(() => ({}));
    const panel = new ChatPanel({
      api: new ApiClient('http://stub'), sessionId: 's1', onPrefs: () => {},
    });
    panel.input.value = '   ';
    await panel.send();
    expect(calls).toHaveLength(0);
  });
});

import { ApiClient } from './api';
import type { PrefsData } from './types';

export interface ChatPanelOptions {
  api: ApiClient;
  sessionId: string;
  /** Applied after every reply so the grid and toggles stay in sync. */
  onPrefs: (prefs: PrefsData) => void;
}

/** Conversational preference panel; replies are rendered verbatim. */
export class ChatPanel {
  readonly el: HTMLElement;
  readonly input: HTMLInputElement;
  readonly log: HTMLElement;
  private readonly options: ChatPanelOptions;
  private pending = false;

  constructor(options: ChatPanelOptions) {
    this.options = options;
    this.el = document.createElement('div');
    this.el.className = 'chat-panel';

    this.log = document.createElement('div');
    this.log.className = 'chat-log';

    const form = document.createElement('form');
    this.input = document.createElement('input');
    this.input.type = 'text';
    this.input.placeholder = 'e.g. keep the captions brief';
    const send = document.createElement('button');
    send.type = 'submit';
    send.textContent = 'Send';
    form.append(this.input, send);
    form.addEventListener('submit', (event) => {
      event.preventDefault();
      void this.send();
    });

    this.el.append(this.log, form);
  }

  private append(role: 'viewer' | 'assistant', text: string): void {
    const entry = document.createElement('p');
    entry.className = `chat-entry chat-${role}`;
    entry.textContent = text;
    this.log.appendChild(entry);
    this.log.scrollTop = this.log.scrollHeight;
  }

  async send(): Promise<void> {
    const utterance = this.input.value.trim();
    if (!utterance || this.pending) {
      return;
    }
    this.pending = true;
    this.input.value = '';
    this.append('viewer', utterance);
    try {
      const response = await this.options.api.chat(this.options.sessionId, utterance);
      this.append('assistant', response.reply);
      if (response.intent.recognized) {
        this.options.onPrefs(response.prefs);
      }
    } catch (error) {
      this.append('assistant', error instanceof Error ? error.message : String(error));
    } finally {
      this.pending = false;
    }
  }
}

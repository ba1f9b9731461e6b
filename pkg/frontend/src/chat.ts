// Respondent chat screen: renders ChatViewState into the DOM and wires the
// start/send controls to the service client. Full re-render per state
// change keeps the view a pure function of the state.

import { ApiError, SurveyApi } from './api';
import {
  ChatViewState,
  initialState,
  inputEnabled,
  replyReceived,
  sendFailed,
  sendPending,
  sessionStarted,
  startFailed,
  startPending,
} from './state';

export class ChatController {
  state: ChatViewState = initialState();

  constructor(
    private readonly api: SurveyApi,
    private readonly root: HTMLElement,
  ) {}

  render(): void {
    const s = this.state;
    this.root.innerHTML = '';

    const list = document.createElement('div');
    list.className = 'messages';
    for (const message of s.messages) {
      const bubble = document.createElement('div');
      bubble.className = `bubble ${message.speaker}${message.pending ? ' pending' : ''}`;
      const text = document.createElement('p');
      text.textContent = message.text;
      const badge = document.createElement('span');
      badge.className = 'phase-badge';
      badge.textContent = message.phase;
      bubble.append(text, badge);
      list.append(bubble);
    }
    this.root.append(list);

    if (s.error) {
      const banner = document.createElement('div');
      banner.className = 'banner error';
      banner.textContent = s.error;
      const retry = document.createElement('button');
      retry.className = 'retry';
      retry.textContent = 'Retry';
      retry.addEventListener('click', () => void this.start());
      if (s.sessionId === null) banner.append(retry);
      this.root.append(banner);
    }

    if (s.complete) {
      const banner = document.createElement('div');
      banner.className = 'banner complete';
      banner.textContent = 'Conversation complete. Thank you!';
      this.root.append(banner);
    }

    if (s.sessionId === null) {
      const start = document.createElement('button');
      start.id = 'start';
      start.textContent = 'Start conversation';
      start.disabled = s.requestInFlight;
      start.addEventListener('click', () => void this.start());
      this.root.append(start);
      return;
    }

    const form = document.createElement('form');
    form.id = 'composer';
    const input = document.createElement('input');
    input.id = 'composer-input';
    input.type = 'text';
    input.autocomplete = 'off';
    input.placeholder = s.complete ? 'Session complete' : 'Type your reply';
    input.disabled = !inputEnabled(s);
    const send = document.createElement('button');
    send.id = 'send';
    send.type = 'submit';
    send.textContent = 'Send';
    send.disabled = !inputEnabled(s);
    form.append(input, send);
    form.addEventListener('submit', (event) => {
      event.preventDefault();
      const text = input.value.trim();
      if (text) void this.send(text);
    });
    this.root.append(form);
    if (inputEnabled(s)) input.focus();
  }

  private update(state: ChatViewState): void {
    this.state = state;
    this.render();
  }

  async start(): Promise<void> {
    if (this.state.requestInFlight || this.state.sessionId !== null) return;
    this.update(startPending(this.state));
    try {
      const created = await this.api.createSession();
      this.update(sessionStarted(this.state, created));
    } catch (err) {
      const message = err instanceof ApiError ? err.message : String(err);
      this.update(startFailed(this.state, `Could not reach the survey service (${message}).`));
    }
  }

  async send(text: string): Promise<void> {
    const sessionId = this.state.sessionId;
    if (sessionId === null || !inputEnabled(this.state)) return;
    this.update(sendPending(this.state, text));
    try {
      const reply = await this.api.sendMessage(sessionId, text);
      this.update(replyReceived(this.state, reply));
    } catch (err) {
      const message = err instanceof ApiError ? err.message : String(err);
      this.update(sendFailed(this.state, `Message failed (${message}); please retry.`));
    }
  }
}

export function mountChat(api: SurveyApi, root: HTMLElement): ChatController {
  const controller = new ChatController(api, root);
  controller.render();
  return controller;
}

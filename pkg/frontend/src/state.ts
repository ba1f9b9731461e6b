// Pure view-state transitions for the chat screen. The reducer owns the
// invariants the UI relies on: the message list mirrors the server
// transcript order, and input is enabled only when a session is open and
// no request is in flight.

import type { MessageReply, SessionCreated } from './api';

export interface ChatMessage {
  speaker: 'agent' | 'respondent';
  text: string;
  phase: string;
  pending?: boolean; // optimistic respondent bubble awaiting the server reply
}

export interface ChatViewState {
  sessionId: string | null;
  messages: ChatMessage[];
  requestInFlight: boolean;
  complete: boolean;
  error: string | null;
}

export function initialState(): ChatViewState {
  return { sessionId: null, messages: [], requestInFlight: false, complete: false, error: null };
}

export function inputEnabled(state: ChatViewState): boolean {
  return state.sessionId !== null && !state.requestInFlight && !state.complete;
}

export function startPending(state: ChatViewState): ChatViewState {
  return { ...state, requestInFlight: true, error: null };
}

export function sessionStarted(state: ChatViewState, created: SessionCreated): ChatViewState {
  return {
    sessionId: created.session_id,
    messages: [{ speaker: 'agent', text: created.agent_text, phase: created.phase }],
    requestInFlight: false,
    complete: false,
    error: null,
  };
}

export function startFailed(state: ChatViewState, message: string): ChatViewState {
  return { ...state, requestInFlight: false, error: message };
}

export function sendPending(state: ChatViewState, text: string): ChatViewState {
  return {
    ...state,
    requestInFlight: true,
    error: null,
    messages: [
      ...state.messages,
      { speaker: 'respondent', text, phase: lastPhase(state), pending: true },
    ],
  };
}

export function replyReceived(state: ChatViewState, reply: MessageReply): ChatViewState {
  const settled = state.messages.map((m) => (m.pending ? { ...m, pending: false } : m));
  return {
    ...state,
    requestInFlight: false,
    complete: reply.session_complete,
    messages: [...settled, { speaker: 'agent', text: reply.agent_reply, phase: reply.phase }],
  };
}

export function sendFailed(state: ChatViewState, message: string): ChatViewState {
  // roll the optimistic bubble back so the transcript mirror stays exact
  return {
    ...state,
    requestInFlight: false,
    error: message,
    messages: state.messages.filter((m) => !m.pending),
  };
}

export function lastPhase(state: ChatViewState): string {
  for (let i = state.messages.length - 1; i >= 0; i -= 1) {
    const message = state.messages[i];
    if (message && message.speaker === 'agent') return message.phase;
  }
  return 'opening';
}

export function renderedTexts(state: ChatViewState): string[] {
  return state.messages.map((m) => m.text);
}

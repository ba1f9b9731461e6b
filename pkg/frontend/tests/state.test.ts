import { describe, expect, it } from 'vitest';

import {
  initialState,
  inputEnabled,
  lastPhase,
  renderedTexts,
  replyReceived,
  sendFailed,
  sendPending,
  sessionStarted,
  startFailed,
  startPending,
} from '../src/state';

const CREATED = {
  session_id: 'a'.repeat(32),
  agent_text: 'Can you describe your recent experience interacting with the system?',
  phase: 'opening',
};

describe('chat view state', () => {
  it('starts with input disabled and no session', () => {
    const state = initialState();
    expect(state.sessionId).toBeNull();
    expect(inputEnabled(state)).toBe(false);
  });

  it('renders the opening prompt as the first agent bubble', () => {
    const state = sessionStarted(startPending(initialState()), CREATED);
    expect(renderedTexts(state)).toEqual([CREATED.agent_text]);
    expect(state.messages[0]?.speaker).toBe('agent');
    expect(inputEnabled(state)).toBe(true);
  });

  it('a failed start keeps no session id and reports the error', () => {
    const state = startFailed(startPending(initialState()), 'service down');
    expect(state.sessionId).toBeNull();
    expect(state.error).toBe('service down');
    expect(inputEnabled(state)).toBe(false);
  });

  it('locks input while a request is in flight', () => {
    let state = sessionStarted(startPending(initialState()), CREATED);
    state = sendPending(state, "I don't really like it");
    expect(state.requestInFlight).toBe(true);
    expect(inputEnabled(state)).toBe(false);
    expect(state.messages.at(-1)?.pending).toBe(true);
  });

  it('appends the agent reply and re-enables input', () => {
    let state = sessionStarted(startPending(initialState()), CREATED);
    state = sendPending(state, "I don't really like it");
    state = replyReceived(state, {
      agent_reply: 'Can you explain what makes you dislike it?',
      phase: 'opening_followup',
      session_complete: false,
    });
    expect(renderedTexts(state)).toEqual([
      CREATED.agent_text,
      "I don't really like it",
      'Can you explain what makes you dislike it?',
    ]);
    expect(state.messages.every((m) => !m.pending)).toBe(true);
    expect(inputEnabled(state)).toBe(true);
    expect(lastPhase(state)).toBe('opening_followup');
  });

  it('rolls back the optimistic bubble when the request fails', () => {
    let state = sessionStarted(startPending(initialState()), CREATED);
    state = sendPending(state, 'hello');
    state = sendFailed(state, 'timeout');
    expect(renderedTexts(state)).toEqual([CREATED.agent_text]);
    expect(state.error).toBe('timeout');
    expect(inputEnabled(state)).toBe(true);
  });

  it('disables input permanently once the session completes', () => {
    let state = sessionStarted(startPending(initialState()), CREATED);
    state = sendPending(state, 'quite a lot');
    state = replyReceived(state, {
      agent_reply: 'Thank you for sharing your thoughts. This concludes the conversation.',
      phase: 'closed',
      session_complete: true,
    });
    expect(state.complete).toBe(true);
    expect(inputEnabled(state)).toBe(false);
  });
});

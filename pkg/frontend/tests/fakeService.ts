// In-memory stand-in for the survey service wire API, faithful to the
// bundled prompt set's Figure-style branching. Tests install it as the
// global fetch; the live e2e exercises the real server instead.

import type { MessageReply, TranscriptTurn } from '../src/api';

const OPENING = 'Can you describe your recent experience interacting with the system?';
const DISLIKE_FOLLOWUP = 'Can you explain what makes you dislike it?';
const GENERIC_FOLLOWUP = 'Could you say more about that?';
const CONCEPTUAL = [
  'Can you tell me your thoughts on system performance?',
  'Can you tell me your thoughts on system purpose?',
  'Can you tell me your thoughts on system process?',
];
const DESCRIPTIVE =
  'To what extent do you think the system performs its task accurately in this situation?';
const CLOSING = 'Thank you for sharing your thoughts. This concludes the conversation.';

const NEGATIVE_WORDS = new Set(['dislike', 'hate', 'bad', 'suspicious', 'failed', 'dont']);
const POSITIVE_WORDS = new Set(['like', 'good', 'great', 'reliable', 'love']);

interface FakeSession {
  id: string;
  phase: string;
  slot: number;
  openingFollowupUsed: boolean;
  turns: TranscriptTurn[];
  valence: string[];
}

function classify(text: string): 'positive' | 'negative' | 'unclear' {
  const tokens = text.toLowerCase().replace(/'/g, '').split(/[^a-z]+/).filter(Boolean);
  let score = 0;
  tokens.forEach((token, i) => {
    let value = 0;
    if (POSITIVE_WORDS.has(token)) value = 1;
    if (NEGATIVE_WORDS.has(token)) value = -1;
    if (value !== 0) {
      const window = tokens.slice(Math.max(0, i - 3), i);
      if (window.some((w) => ['not', 'no', 'never', 'dont'].includes(w))) value = -value;
      score += value;
    }
  });
  if (score > 0) return 'positive';
  if (score < 0) return 'negative';
  return 'unclear';
}

export class FakeService {
  sessions = new Map<string, FakeSession>();
  failNextSend = false;
  private counter = 0;

  private pushTurn(
    session: FakeSession,
    speaker: 'agent' | 'respondent',
    text: string,
    intentLabel: string | null,
  ): void {
    session.turns.push({
      index: session.turns.length,
      speaker,
      text,
      phase: session.phase,
      intent: intentLabel ? { label: intentLabel as never, score: 0 } : null,
      timestamp: session.turns.length,
      provenance: speaker === 'agent' ? 'fake' : '',
    });
  }

  createSession(): { session_id: string; agent_text: string; phase: string } {
    this.counter += 1;
    const id = this.counter.toString(16).padStart(32, '0');
    const session: FakeSession = {
      id, phase: 'opening', slot: 0, openingFollowupUsed: false, turns: [], valence: [],
    };
    this.pushTurn(session, 'agent', OPENING, null);
    this.sessions.set(id, session);
    return { session_id: id, agent_text: OPENING, phase: 'opening' };
  }

  private nextConceptualOrDescriptive(session: FakeSession): string {
    if (session.slot < CONCEPTUAL.length) {
      const text = CONCEPTUAL[session.slot] as string;
      session.phase = `conceptual:${session.slot}`;
      return text;
    }
    session.phase = 'descriptive';
    return DESCRIPTIVE;
  }

  sendMessage(id: string, text: string): MessageReply | { status: number; detail: string } {
    const session = this.sessions.get(id);
    if (!session) return { status: 404, detail: `no session '${id}'` };
    if (session.phase === 'closed') return { status: 409, detail: 'session closed' };
    const intent = classify(text);
    this.pushTurn(session, 'respondent', text, intent);
    session.valence.push(intent);

    let reply: string;
    if (session.phase === 'opening') {
      if (intent !== 'positive' && !session.openingFollowupUsed) {
        session.openingFollowupUsed = true;
        session.phase = 'opening_followup';
        reply = intent === 'negative' ? DISLIKE_FOLLOWUP : GENERIC_FOLLOWUP;
      } else {
        reply = this.nextConceptualOrDescriptive(session);
      }
    } else if (session.phase === 'opening_followup') {
      reply = this.nextConceptualOrDescriptive(session);
    } else if (session.phase.startsWith('conceptual')) {
      session.slot += 1;
      reply = this.nextConceptualOrDescriptive(session);
    } else {
      session.phase = 'closed';
      reply = CLOSING;
    }
    this.pushTurn(session, 'agent', reply, null);
    return { agent_reply: reply, phase: session.phase, session_complete: session.phase === 'closed' };
  }

  /** Install as globalThis.fetch. */
  fetch = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = new URL(String(input), 'http://fake');
    const respond = (status: number, body: unknown) =>
      new Response(JSON.stringify(body), {
        status,
        headers: { 'Content-Type': 'application/json' },
      });

    if (url.pathname === '/health') return respond(200, { status: 'ok' });
    if (url.pathname === '/sessions' && init?.method === 'POST') {
      return respond(200, this.createSession());
    }
    const message = url.pathname.match(/^\/sessions\/([0-9a-f]+)\/messages$/);
    if (message && init?.method === 'POST') {
      if (this.failNextSend) {
        this.failNextSend = false;
        throw new TypeError('network down');
      }
      const { text } = JSON.parse(String(init.body)) as { text: string };
      const result = this.sendMessage(message[1] as string, text);
      if ('status' in result) return respond(result.status, { detail: result.detail });
      return respond(200, result);
    }
    const transcript = url.pathname.match(/^\/sessions\/([0-9a-f]+)\/transcript$/);
    if (transcript) {
      const session = this.sessions.get(transcript[1] as string);
      if (!session) return respond(404, { detail: 'unknown session' });
      return respond(200, { session_id: session.id, turns: session.turns });
    }
    const indicators = url.pathname.match(/^\/sessions\/([0-9a-f]+)\/indicators$/);
    if (indicators) {
      const session = this.sessions.get(indicators[1] as string);
      if (!session) return respond(404, { detail: 'unknown session' });
      return respond(200, {
        session_id: session.id,
        turn_count: session.valence.length,
        valence_sequence: session.valence,
        valence_transitions: {},
        mean_response_tokens: 3.5,
        followup_count: session.openingFollowupUsed ? 1 : 0,
        ending: session.phase === 'closed' ? 'completed' : 'abandoned',
      });
    }
    return respond(404, { detail: `no route ${url.pathname}` });
  };
}

// Typed client for the survey service wire API. All dialog branching lives
// on the server; this module only moves JSON.

export interface SessionCreated {
  session_id: string;
  agent_text: string;
  phase: string;
}

export interface MessageReply {
  agent_reply: string;
  phase: string;
  session_complete: boolean;
}

export interface TurnIntent {
  label: 'positive' | 'negative' | 'unclear';
  score: number;
}

export interface TranscriptTurn {
  index: number;
  speaker: 'agent' | 'respondent';
  text: string;
  phase: string;
  intent: TurnIntent | null;
  timestamp: number;
  provenance: string;
}

export interface Transcript {
  session_id: string;
  turns: TranscriptTurn[];
}

export interface Indicators {
  session_id: string;
  turn_count: number;
  valence_sequence: string[];
  valence_transitions: Record<string, number>;
  mean_response_tokens: number;
  followup_count: number;
  ending: 'completed' | 'abandoned' | 'turn_limited';
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = 'ApiError';
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url, init);
  } catch (err) {
    throw new ApiError(0, `service unreachable: ${String(err)}`);
  }
  if (!response.ok) {
    let detail = `HTTP ${response.status}`;
    try {
      const body = (await response.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // non-JSON error body; keep the status line
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class SurveyApi {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl.replace(/\/$/, '')}${path}`;
  }

  health(): Promise<{ status: string }> {
    return request(this.url('/health'));
  }

  createSession(promptSetId = 'default'): Promise<SessionCreated> {
    return request(this.url('/sessions'), {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ prompt_set_id: promptSetId }),
    });
  }

  sendMessage(sessionId: string, text: string, idempotencyKey?: string): Promise<MessageReply> {
    return request(this.url(`/sessions/${sessionId}/messages`), {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(
        idempotencyKey ? { text, idempotency_key: idempotencyKey } : { text },
      ),
    });
  }

  transcript(sessionId: string): Promise<Transcript> {
    return request(this.url(`/sessions/${sessionId}/transcript`));
  }

  indicators(sessionId: string): Promise<Indicators> {
    return request(this.url(`/sessions/${sessionId}/indicators`));
  }
}

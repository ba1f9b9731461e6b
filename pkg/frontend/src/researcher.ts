// Researcher view: read-only transcript with intent tags plus the trust
// indicator summary for one session.

import { ApiError, Indicators, SurveyApi, Transcript } from './api';

function intentBadge(label: string): HTMLElement {
  const badge = document.createElement('span');
  badge.className = `intent intent-${label}`;
  badge.textContent = label;
  return badge;
}

function renderTranscript(transcript: Transcript): HTMLElement {
  const section = document.createElement('section');
  section.className = 'transcript';
  const heading = document.createElement('h2');
  heading.textContent = `Transcript ${transcript.session_id}`;
  section.append(heading);
  for (const turn of transcript.turns) {
    const row = document.createElement('div');
    row.className = `turn ${turn.speaker}`;
    const text = document.createElement('p');
    text.textContent = `${turn.speaker}: ${turn.text}`;
    row.append(text);
    const phase = document.createElement('span');
    phase.className = 'phase-badge';
    phase.textContent = turn.phase;
    row.append(phase);
    if (turn.intent) row.append(intentBadge(turn.intent.label));
    section.append(row);
  }
  return section;
}

function renderIndicators(indicators: Indicators): HTMLElement {
  const section = document.createElement('section');
  section.className = 'indicators';
  const heading = document.createElement('h2');
  heading.textContent = 'Trust indicators';
  section.append(heading);

  const strip = document.createElement('div');
  strip.className = 'valence-strip';
  for (const label of indicators.valence_sequence) strip.append(intentBadge(label));
  section.append(strip);

  const stats: Array<[string, string]> = [
    ['Respondent turns', String(indicators.turn_count)],
    ['Follow-ups issued', String(indicators.followup_count)],
    ['Mean response tokens', indicators.mean_response_tokens.toFixed(2)],
    ['Ending', indicators.ending],
  ];
  const list = document.createElement('dl');
  for (const [term, value] of stats) {
    const dt = document.createElement('dt');
    dt.textContent = term;
    const dd = document.createElement('dd');
    dd.textContent = value;
    list.append(dt, dd);
  }
  for (const [pair, count] of Object.entries(indicators.valence_transitions)) {
    const dt = document.createElement('dt');
    dt.textContent = `Transition ${pair}`;
    const dd = document.createElement('dd');
    dd.textContent = String(count);
    list.append(dt, dd);
  }
  section.append(list);
  return section;
}

export async function mountResearcherView(
  api: SurveyApi,
  root: HTMLElement,
  sessionId: string,
): Promise<void> {
  root.innerHTML = '';
  try {
    const [transcript, indicators] = await Promise.all([
      api.transcript(sessionId),
      api.indicators(sessionId),
    ]);
    root.append(renderTranscript(transcript), renderIndicators(indicators));
  } catch (err) {
    const notFound = document.createElement('div');
    notFound.className = 'banner error';
    notFound.textContent =
      err instanceof ApiError && err.status === 404
        ? `No session ${sessionId}.`
        : `Could not load session (${String(err)}).`;
    root.append(notFound);
  }
}

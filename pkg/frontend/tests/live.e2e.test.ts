// End-to-end replay against the real Python service: spawns `trustconv
// serve`, drives the actual chat DOM through real fetch, and checks the
// rendered text against the transcript endpoint byte-for-byte. Skipped
// when the service cannot be started (e.g. no Python environment).

import { spawn, ChildProcess } from 'node:child_process';
import { mkdtempSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { SurveyApi } from '../src/api';
import { mountChat } from '../src/chat';
import { renderedTexts } from '../src/state';

const PORT = 8954;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess | null = null;
let available = false;

async function waitForHealth(timeoutMs: number): Promise<boolean> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/health`);
      if (response.ok) return true;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  return false;
}

beforeAll(async () => {
  const dataDir = mkdtempSync(join(tmpdir(), 'trustconv-e2e-'));
  server = spawn(
    'python3',
    ['-m', 'trustconv.cli', 'serve', '--port', String(PORT), '--data-dir', dataDir],
    { stdio: 'ignore' },
  );
  server.on('error', () => {
    available = false;
  });
  available = await waitForHealth(20000);
}, 30000);

afterAll(() => {
  server?.kill('SIGKILL');
});

describe('live service replay', () => {
  it('completes the scripted conversation in the DOM against the real service', async (ctx) => {
    if (!available) return ctx.skip();

    document.body.innerHTML = '<main id="app"></main>';
    const root = document.getElementById('app') as HTMLElement;
    const api = new SurveyApi(BASE);
    const controller = mountChat(api, root);

    await controller.start();
    expect(controller.state.sessionId).not.toBeNull();
    expect(renderedTexts(controller.state)).toEqual([
      'Can you describe your recent experience interacting with the system?',
    ]);

    await controller.send("I don't really like it");
    expect(renderedTexts(controller.state).at(-1)).toBe(
      'Can you explain what makes you dislike it?',
    );

    await controller.send('It kept ignoring my requests.');
    expect(renderedTexts(controller.state).at(-1)).toBe(
      'Can you tell me your thoughts on system performance?',
    );

    // drive to completion
    let guard = 0;
    while (!controller.state.complete && guard < 20) {
      await controller.send('it is fine by me');
      guard += 1;
    }
    expect(controller.state.complete).toBe(true);

    // rendered text equals the transcript endpoint's text fields exactly
    const transcript = await api.transcript(controller.state.sessionId as string);
    expect(renderedTexts(controller.state)).toEqual(transcript.turns.map((t) => t.text));

    // input is disabled on completion
    expect(root.querySelector<HTMLInputElement>('#composer-input')?.disabled).toBe(true);

    const indicators = await api.indicators(controller.state.sessionId as string);
    expect(indicators.ending).toBe('completed');
    expect(indicators.valence_sequence[0]).toBe('negative');
  }, 60000);
});

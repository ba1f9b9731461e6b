// Entry point. Routes on the URL hash: the default view is the respondent
// chat; '#/researcher/<session-id>' opens the read-only researcher view.
// The service base URL comes from '?api=' and defaults to the page origin
// (the service can host the built client via its --static flag).

import { SurveyApi } from './api';
import { mountChat } from './chat';
import { mountResearcherView } from './researcher';

function baseUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get('api');
  return fromQuery ?? window.location.origin;
}

function route(): void {
  const root = document.getElementById('app');
  if (!root) throw new Error('missing #app container');
  const api = new SurveyApi(baseUrl());
  const sessionId = window.location.hash.match(/^#\/researcher\/([0-9a-f]+)$/)?.[1];
  if (sessionId) {
    void mountResearcherView(api, root, sessionId);
  } else {
    mountChat(api, root);
  }
}

window.addEventListener('hashchange', route);
window.addEventListener('DOMContentLoaded', route);

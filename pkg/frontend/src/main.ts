// Page bootstrap: grab the static elements, wire the controllers, and load
// the footer status line. No state survives a reload.

import { fetchHealth } from './api.js';
import { ChatController, PairFormController } from './chat.js';

function byId<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (!element) {
    throw new Error(`missing element #${id}`);
  }
  return element as T;
}

function init(): void {
  const chat = new ChatController({
    transcript: byId('transcript'),
    question: byId<HTMLInputElement>('question'),
    state: byId<HTMLInputElement>('state'),
    district: byId<HTMLInputElement>('district'),
    send: byId<HTMLButtonElement>('send'),
  });

  const pairs = new PairFormController({
    question: byId<HTMLInputElement>('pair-question'),
    answer: byId<HTMLInputElement>('pair-answer'),
    submit: byId<HTMLButtonElement>('pair-submit'),
    validation: byId('pair-validation'),
    toast: byId('toast'),
  });

  byId<HTMLFormElement>('ask-form').addEventListener('submit', (event) => {
    event.preventDefault();
    void chat.send();
  });

  byId<HTMLFormElement>('pair-form').addEventListener('submit', (event) => {
    event.preventDefault();
    void pairs.submit();
  });

  const status = byId('status');
  fetchHealth()
    .then((health) => {
      status.textContent = `${health.entries} questions indexed (dim ${health.dim}, ${health.pending} pending)`;
    })
    .catch(() => {
      status.textContent = 'service unreachable';
    });
}

init();

// Transcript state and DOM rendering for the chat page. Everything here is
// driven by the fields of an AskResponse; nothing is kept beyond the visible
// transcript, so a reload starts a fresh conversation.

import { ApiError, askQuestion, submitPair } from './api.js';
import type { AskResponse } from './api.js';

export interface MessageMeta {
  source: 'kb' | 'weather' | 'escalate' | 'error';
  matched_question?: string | null;
  similarity?: number | null;
  retryable?: boolean;
}

export interface ChatMessage {
  role: 'user' | 'bot';
  text: string;
  meta?: MessageMeta;
}

export const ESCALATION_NOTICE = 'This question has been forwarded to an expert. You will be contacted with an answer.';

/** Map a service response onto the message shape the transcript renders. */
export function messageFromResponse(response: AskResponse): ChatMessage {
  if (response.source === 'escalate') {
    return { role: 'bot', text: ESCALATION_NOTICE, meta: { source: 'escalate' } };
  }
  if (response.source === 'weather') {
    return { role: 'bot', text: response.answer, meta: { source: 'weather' } };
  }
  return {
    role: 'bot',
    text: response.answer,
    meta: {
      source: 'kb',
      matched_question: response.matched_question,
      similarity: response.similarity,
    },
  };
}

/** Render one transcript bubble. Pure DOM construction, no listeners. */
export function renderMessage(message: ChatMessage): HTMLElement {
  const bubble = document.createElement('div');
  bubble.className = `bubble ${message.role}`;
  if (message.meta) {
    bubble.dataset.source = message.meta.source;
  }

  const text = document.createElement('p');
  text.className = 'bubble-text';
  text.textContent = message.text;
  bubble.appendChild(text);

  if (message.meta?.source === 'kb') {
    const provenance = document.createElement('p');
    provenance.className = 'provenance';
    const question = message.meta.matched_question ?? '';
    const similarity = message.meta.similarity ?? 0;
    provenance.textContent = `matched: ${question} (sim ${similarity.toFixed(2)})`;
    bubble.appendChild(provenance);
  }

  if (message.meta?.source === 'escalate') {
    bubble.classList.add('escalation');
  }

  if (message.meta?.source === 'error') {
    bubble.classList.add('error');
    if (message.meta.retryable) {
      const hint = document.createElement('p');
      hint.className = 'retry-hint';
      hint.textContent = 'Your question is still in the box below; press send to retry.';
      bubble.appendChild(hint);
    }
  }

  return bubble;
}

export interface ChatElements {
  transcript: HTMLElement;
  question: HTMLInputElement;
  state: HTMLInputElement;
  district: HTMLInputElement;
  send: HTMLButtonElement;
}

export interface PairElements {
  question: HTMLInputElement;
  answer: HTMLInputElement;
  submit: HTMLButtonElement;
  validation: HTMLElement;
  toast: HTMLElement;
}

/**
 * Wires the transcript, the question form, and the operator pair form.
 *
 * Only one ask request may be in flight at a time: the input and the send
 * button are disabled until the service responds or the request times out.
 * On failure the typed question is left in the input so the user can retry.
 */
export class ChatController {
  private readonly elements: ChatElements;
  private busy = false;

  constructor(elements: ChatElements) {
    this.elements = elements;
  }

  get pending(): boolean {
    return this.busy;
  }

  append(message: ChatMessage): void {
    const bubble = renderMessage(message);
    this.elements.transcript.appendChild(bubble);
    this.elements.transcript.scrollTop = this.elements.transcript.scrollHeight;
  }

  async send(): Promise<void> {
    if (this.busy) {
      return;
    }
    const question = this.elements.question.value.trim();
    if (!question) {
      return;
    }

    this.busy = true;
    this.elements.question.disabled = true;
    this.elements.send.disabled = true;
    this.append({ role: 'user', text: question });

    try {
      const response = await askQuestion({
        question,
        state: this.elements.state.value.trim(),
        district: this.elements.district.value.trim(),
      });
      this.append(messageFromResponse(response));
      this.elements.question.value = '';
    } catch (error) {
      this.append(errorMessage(error));
    } finally {
      this.busy = false;
      this.elements.question.disabled = false;
      this.elements.send.disabled = false;
      this.elements.question.focus();
    }
  }
}

function errorMessage(error: unknown): ChatMessage {
  if (error instanceof ApiError) {
    return {
      role: 'bot',
      text: `The service reported an error (status ${error.status}). Please try again.`,
      meta: { source: 'error', retryable: true },
    };
  }
  return {
    role: 'bot',
    text: 'Could not reach the service. Check your connection and try again.',
    meta: { source: 'error', retryable: true },
  };
}

/** Handles the operator form that queues corrected question/answer pairs. */
export class PairFormController {
  private readonly elements: PairElements;
  private toastTimer: ReturnType<typeof setTimeout> | undefined;

  constructor(elements: PairElements) {
    this.elements = elements;
  }

  async submit(): Promise<void> {
    const question = this.elements.question.value.trim();
    const answer = this.elements.answer.value.trim();
    this.elements.validation.textContent = '';

    if (!question) {
      this.elements.validation.textContent = 'Question must not be empty.';
      return;
    }
    if (!answer) {
      this.elements.validation.textContent = 'Answer must not be empty.';
      return;
    }

    this.elements.submit.disabled = true;
    try {
      const result = await submitPair({ question, answer });
      this.showToast(`Pair saved; ${result.pending} pending for the next rebuild.`, 'success');
      this.elements.question.value = '';
      this.elements.answer.value = '';
    } catch {
      this.showToast('Could not save the pair. Please try again.', 'failure');
    } finally {
      this.elements.submit.disabled = false;
    }
  }

  private showToast(text: string, kind: 'success' | 'failure'): void {
    const toast = this.elements.toast;
    toast.textContent = text;
    toast.className = `toast ${kind}`;
    if (this.toastTimer !== undefined) {
      clearTimeout(this.toastTimer);
    }
    this.toastTimer = setTimeout(() => {
      toast.className = 'toast';
      toast.textContent = '';
    }, 4000);
  }
}

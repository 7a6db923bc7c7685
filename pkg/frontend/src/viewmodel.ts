// Pure view-model transitions. The chat transcript is append-only and the
// screen pane always mirrors the most recent reply.

import type {
  CreateSessionResponse,
  Metrics,
  Reply,
  ViewModel,
} from "./types.js";

export function initialViewModel(): ViewModel {
  return {
    session_id: null,
    chat: [],
    screen: null,
    metrics: null,
    pending: false,
    error: null,
  };
}

export function onSessionStarted(
  vm: ViewModel,
  response: CreateSessionResponse,
): ViewModel {
  return {
    ...vm,
    session_id: response.session_id,
    chat: [...vm.chat, { who: "assistant", text: response.reply.speech }],
    screen: response.reply.screen,
    error: null,
  };
}

export function onUtteranceSent(vm: ViewModel, text: string): ViewModel {
  return {
    ...vm,
    chat: [...vm.chat, { who: "user", text }],
    pending: true,
  };
}

export function onReply(vm: ViewModel, reply: Reply, metrics: Metrics): ViewModel {
  return {
    ...vm,
    chat: [
      ...vm.chat,
      { who: "assistant", text: reply.speech, failed: reply.turn_outcome === "failed" },
    ],
    screen: reply.screen,
    metrics,
    pending: false,
    error: null,
  };
}

export function onTurnError(vm: ViewModel, message: string): ViewModel {
  return {
    ...vm,
    chat: [...vm.chat, { who: "assistant", text: message, failed: true }],
    pending: false,
  };
}

export function onStartupError(vm: ViewModel, message: string): ViewModel {
  return { ...vm, pending: false, error: message };
}

/** The only place click targets turn into utterances: buttons carry the
 * exact string to send in data-utterance, nothing is composed. */
export function utteranceForClick(target: {
  dataset?: { utterance?: string };
}): string | null {
  return target.dataset?.utterance ?? null;
}

// DOM wiring: one ApiClient, one ViewModel, re-render on every change.
// Input is disabled while a turn is in flight (single in-flight request).

import { ApiClient, ServiceError } from "./api.js";
import { renderChat, renderMetrics, renderScreen } from "./render.js";
import type { ViewModel } from "./types.js";
import {
  initialViewModel,
  onReply,
  onSessionStarted,
  onStartupError,
  onTurnError,
  onUtteranceSent,
  utteranceForClick,
} from "./viewmodel.js";

const SERVICE_URL =
  new URLSearchParams(window.location.search).get("service") ??
  "http://127.0.0.1:8765";

const api = new ApiClient(SERVICE_URL);
let vm: ViewModel = initialViewModel();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function render(): void {
  el("chat").innerHTML = renderChat(vm.chat);
  el("screen").innerHTML = renderScreen(vm.screen);
  el("metrics").innerHTML = renderMetrics(vm.metrics);
  const banner = el("banner");
  const bannerText = banner.querySelector("span");
  if (bannerText) {
    bannerText.textContent = vm.error ?? "";
  }
  banner.style.display = vm.error ? "block" : "none";
  const input = el<HTMLInputElement>("utterance");
  const sendButton = el<HTMLButtonElement>("send");
  input.disabled = vm.pending || vm.session_id === null;
  sendButton.disabled = vm.pending || vm.session_id === null;
  el("chat").scrollTop = el("chat").scrollHeight;
}

function update(next: ViewModel): void {
  vm = next;
  render();
}

async function startSession(): Promise<void> {
  update({ ...vm, error: null, pending: true });
  try {
    const response = await api.createSession();
    update(onSessionStarted({ ...vm, pending: false }, response));
  } catch (err) {
    update(
      onStartupError(
        { ...vm, pending: false },
        `Cannot reach the service at ${SERVICE_URL}. Is "explora serve" running?`,
      ),
    );
  }
}

async function send(text: string): Promise<void> {
  const trimmed = text.trim();
  if (!trimmed || vm.pending || vm.session_id === null) {
    return;
  }
  update(onUtteranceSent(vm, trimmed));
  try {
    const response = await api.sendUtterance(vm.session_id, trimmed);
    update(onReply(vm, response.reply, response.metrics));
  } catch (err) {
    const message =
      err instanceof ServiceError
        ? `The service rejected that turn (${err.status}: ${err.message}).`
        : "Network problem while sending that turn.";
    update(onTurnError(vm, message));
  }
}

function wire(): void {
  const input = el<HTMLInputElement>("utterance");
  el("send").addEventListener("click", () => {
    void send(input.value);
    input.value = "";
  });
  input.addEventListener("keydown", (event) => {
    if (event.key === "Enter") {
      void send(input.value);
      input.value = "";
    }
  });
  // Every button in the screen pane carries its exact utterance.
  el("screen").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const utterance = utteranceForClick(target);
    if (utterance !== null) {
      void send(utterance);
    }
  });
  el("retry").addEventListener("click", () => void startSession());
}

wire();
render();
void startSession();

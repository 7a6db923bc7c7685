// Pure HTML renderers: each function maps service JSON to a markup string.
// Buttons never invent text; the utterance they will send is stored verbatim
// in data-utterance.

import type { ChatEntry, HeadingNode, Metrics, Screen } from "./types.js";

export const MORE_RESULTS_UTTERANCE = "No, show me more results";
export const START_OVER_UTTERANCE = "start search";
export const BACK_UTTERANCE = "go back";
export const YES_UTTERANCE = "yes";
export const NO_UTTERANCE = "no";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function button(utterance: string, label: string, extra = ""): string {
  return (
    `<button class="say${extra}" data-utterance="${escapeHtml(utterance)}">` +
    `${escapeHtml(label)}</button>`
  );
}

export function renderScreen(screen: Screen | null): string {
  if (screen === null) {
    return `<div class="screen empty">No screen yet.</div>`;
  }
  switch (screen.kind) {
    case "welcome":
      return (
        `<div class="screen welcome"><p>${escapeHtml(screen.text)}</p>` +
        renderConfirmButtons(screen.text) +
        `</div>`
      );
    case "results":
      return renderResults(screen.titles);
    case "sections":
      return renderSections(screen.title, screen.headings);
    case "section_summary":
      return renderSectionSummary(screen);
  }
}

function renderConfirmButtons(text: string): string {
  if (!text.startsWith("Did you mean:")) {
    return "";
  }
  return (
    `<div class="confirm">` +
    button(YES_UTTERANCE, "Yes") +
    button(NO_UTTERANCE, "No") +
    `</div>`
  );
}

function renderResults(titles: string[]): string {
  const items = titles
    .map((title, i) => `<li>${button(`Open ${i + 1}`, title)}</li>`)
    .join("");
  return (
    `<div class="screen results"><h2>Results</h2><ol>${items}</ol>` +
    `<div class="actions">` +
    button(MORE_RESULTS_UTTERANCE, "More results") +
    button(START_OVER_UTTERANCE, "Start over") +
    `</div></div>`
  );
}

function renderSections(title: string, headings: HeadingNode[]): string {
  // Buttons are numbered in pre-order, matching the service's Open grammar.
  let counter = 0;
  const renderNodes = (nodes: HeadingNode[]): string => {
    if (nodes.length === 0) {
      return "";
    }
    const items = nodes
      .map((node) => {
        counter += 1;
        return (
          `<li>${button(`Open ${counter}`, node.heading)}` +
          renderNodes(node.children) +
          `</li>`
        );
      })
      .join("");
    return `<ul>${items}</ul>`;
  };
  return (
    `<div class="screen sections"><h2>${escapeHtml(title)}</h2>` +
    renderNodes(headings) +
    `<div class="actions">${button(START_OVER_UTTERANCE, "Start over")}</div></div>`
  );
}

function renderSectionSummary(screen: {
  heading: string;
  summary_sentences: string[];
  image: { label: string; url: string } | null;
  child_headings: string[];
}): string {
  const sentences = screen.summary_sentences
    .map((s) => `<p>${escapeHtml(s)}</p>`)
    .join("");
  const image = screen.image
    ? `<figure><img src="${escapeHtml(screen.image.url)}" ` +
      `alt="${escapeHtml(screen.image.label)}" ` +
      `onerror="this.style.display='none'">` +
      `<figcaption>${escapeHtml(screen.image.label)}</figcaption></figure>`
    : "";
  const children = screen.child_headings.length
    ? `<div class="children"><h3>Subsections</h3><ol>` +
      screen.child_headings
        .map((h, i) => `<li>${button(`Open ${i + 1}`, h)}</li>`)
        .join("") +
      `</ol></div>`
    : "";
  return (
    `<div class="screen section-summary"><h2>${escapeHtml(screen.heading)}</h2>` +
    image +
    `<div class="summary">${sentences}</div>` +
    children +
    `<div class="actions">` +
    button(BACK_UTTERANCE, "Back") +
    button(START_OVER_UTTERANCE, "Start over") +
    `</div></div>`
  );
}

export function renderChat(chat: ChatEntry[]): string {
  return chat
    .map((entry) => {
      const cls = entry.who + (entry.failed ? " failed" : "");
      return `<div class="msg ${cls}"><span>${escapeHtml(entry.text)}</span></div>`;
    })
    .join("");
}

export function renderMetrics(metrics: Metrics | null): string {
  if (metrics === null) {
    return `<span class="metrics">turns: 0 | failures: 0 | elapsed: 0s</span>`;
  }
  const seconds = Math.round(metrics.total_time);
  return (
    `<span class="metrics">turns: ${metrics.total_interactions} | ` +
    `failures: ${metrics.unsuccessful} | elapsed: ${seconds}s</span>`
  );
}

/** DOM builders for the console. Pure functions from data to elements;
 * user-supplied strings only ever flow through textContent. */

import type { PatchSummary, Run, RunEvent } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export function stageBadge(stage: string): HTMLSpanElement {
  return el("span", `badge stage-${stage.toLowerCase()}`, stage);
}

export function renderRunTable(
  runs: Run[],
  onSelect: (id: string) => void,
): HTMLElement {
  if (runs.length === 0) {
    return el("p", "empty", "No runs yet.");
  }
  const table = el("table", "run-table");
  const head = table.createTHead().insertRow();
  for (const column of ["Run", "Stage", "Codegen", "Gateway", "Updated"]) {
    head.appendChild(el("th", undefined, column));
  }
  const body = table.createTBody();
  for (const run of runs) {
    const row = body.insertRow();
    row.dataset.runId = run.id;
    row.insertCell().appendChild(el("code", undefined, run.id));
    row.insertCell().appendChild(stageBadge(run.stage));
    row.insertCell().textContent = run.codegenMode;
    row.insertCell().textContent = run.gatewayMode;
    row.insertCell().textContent = run.updatedAt;
    row.addEventListener("click", () => onSelect(run.id));
  }
  return table;
}

export function formatEvent(event: RunEvent): string {
  const p = event.payload;
  switch (event.kind) {
    case "stageStarted":
      return `stage ${p.stage} started`;
    case "stageCompleted":
      return `stage ${p.stage} completed`;
    case "failed":
      return `failed at ${p.stage}: ${p.message}`;
    case "debugMessage":
      return `debug: ${p.message}` + (p.hasLog ? " (log attached)" : "");
    case "diagnostic":
      return `${p.count} compiler diagnostic(s), first: ${p.first}`;
    case "patchApplied": {
      const paths = Array.isArray(p.changedPaths) ? p.changedPaths : [];
      return `patch ${p.patchId} applied: ${paths.join(", ")}`;
    }
    default:
      return event.kind;
  }
}

export function renderEventList(events: RunEvent[]): HTMLOListElement {
  const list = el("ol", "events");
  for (const event of events) {
    const item = el("li", `event event-${event.kind}`, formatEvent(event));
    item.dataset.seq = String(event.seq);
    list.appendChild(item);
  }
  return list;
}

export function appendEvents(
  list: HTMLOListElement,
  events: RunEvent[],
): void {
  for (const item of Array.from(renderEventList(events).children)) {
    list.appendChild(item);
  }
}

export function renderFileList(
  files: string[],
  onOpen: (path: string) => void,
): HTMLElement {
  if (files.length === 0) {
    return el("p", "empty", "No files yet.");
  }
  const list = el("ul", "files");
  for (const path of files) {
    const item = el("li");
    const link = el("button", "file-link", path);
    link.type = "button";
    link.addEventListener("click", () => onOpen(path));
    item.appendChild(link);
    list.appendChild(item);
  }
  return list;
}

export function renderFileView(path: string, content: string): HTMLElement {
  const section = el("section", "file-view");
  section.appendChild(el("h3", undefined, path));
  const pre = el("pre");
  pre.appendChild(el("code", undefined, content));
  section.appendChild(pre);
  return section;
}

export function renderPatchSummary(summary: PatchSummary): HTMLElement {
  const box = el("div", "patch-summary");
  box.appendChild(el("strong", undefined, `patch ${summary.patchId} applied`));
  const list = el("ul");
  for (const path of summary.changedPaths) {
    list.appendChild(el("li", undefined, path));
  }
  box.appendChild(list);
  return box;
}

export function renderDebugForm(
  onSubmit: (message: string, log: string | undefined) => void,
): HTMLFormElement {
  const form = el("form", "debug-form");
  const message = el("textarea");
  message.name = "message";
  message.placeholder = "What is wrong with the game?";
  message.rows = 3;
  const log = el("textarea");
  log.name = "log";
  log.placeholder = "Optional compiler log";
  log.rows = 3;
  const submit = el("button", undefined, "Send to debugger");
  submit.type = "submit";
  form.append(message, log, submit);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = message.value.trim();
    if (!text) {
      return;
    }
    onSubmit(text, log.value.trim() || undefined);
    message.value = "";
    log.value = "";
  });
  return form;
}

export function renderError(error: unknown): HTMLElement {
  const message = error instanceof Error ? error.message : String(error);
  return el("p", "error", message);
}

/** Console entry point: run list on the left, selected run on the right. */

import {
  advanceRun,
  createRun,
  getRun,
  listFiles,
  listRuns,
  postDebug,
  readFile,
} from "./api.js";
import { EventPoller } from "./poll.js";
import type { NewRunOptions, Run } from "./types.js";
import {
  appendEvents,
  renderDebugForm,
  renderError,
  renderEventList,
  renderFileList,
  renderFileView,
  renderPatchSummary,
  renderRunTable,
  stageBadge,
} from "./views.js";

const DEBUGGABLE = new Set(["Assembled", "Debugging"]);

let poller: EventPoller | null = null;
let selectedRunId: string | null = null;

function section(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing console section #${id}`);
  }
  return node;
}

function showError(error: unknown): void {
  const status = section("status");
  status.replaceChildren(renderError(error));
}

function clearError(): void {
  section("status").replaceChildren();
}

async function refreshRunList(): Promise<void> {
  const runs = await listRuns();
  section("runs").replaceChildren(
    renderRunTable(runs, (id) => void selectRun(id)),
  );
}

function renderRunHeader(run: Run): HTMLElement {
  const header = document.createElement("header");
  header.className = "run-header";
  const title = document.createElement("h2");
  title.append(`Run ${run.id} `);
  title.appendChild(stageBadge(run.stage));
  header.appendChild(title);

  const requirement = document.createElement("p");
  requirement.className = "requirement";
  requirement.textContent = run.requirement;
  header.appendChild(requirement);

  if (run.error) {
    header.appendChild(
      renderError(`failed at ${run.error.stage}: ${run.error.message}`),
    );
  }

  const actions = document.createElement("div");
  actions.className = "actions";
  for (const [label, auto] of [
    ["Advance", false],
    ["Run to Assembled", true],
  ] as const) {
    const button = document.createElement("button");
    button.type = "button";
    button.textContent = label;
    button.addEventListener("click", () => void doAdvance(run.id, auto));
    actions.appendChild(button);
  }
  header.appendChild(actions);
  return header;
}

async function doAdvance(id: string, auto: boolean): Promise<void> {
  clearError();
  try {
    await advanceRun(id, auto);
  } catch (error) {
    showError(error);
  }
  await selectRun(id);
  await refreshRunList();
}

async function refreshFiles(id: string): Promise<void> {
  const files = await listFiles(id);
  section("files").replaceChildren(
    renderFileList(files, (path) => void openFile(id, path)),
  );
}

async function openFile(id: string, path: string): Promise<void> {
  try {
    const file = await readFile(id, path);
    section("file-view").replaceChildren(
      renderFileView(file.path, file.content),
    );
  } catch (error) {
    showError(error);
  }
}

async function sendDebug(
  id: string,
  message: string,
  log: string | undefined,
): Promise<void> {
  clearError();
  try {
    const summary = await postDebug(id, message, log);
    section("patch").replaceChildren(renderPatchSummary(summary));
    await refreshFiles(id);
    await poller?.tick();
  } catch (error) {
    showError(error);
  }
}

async function selectRun(id: string): Promise<void> {
  clearError();
  poller?.stop();
  selectedRunId = id;
  let detail;
  try {
    detail = await getRun(id);
  } catch (error) {
    showError(error);
    return;
  }

  section("run-header").replaceChildren(renderRunHeader(detail.run));
  const events = renderEventList(detail.events);
  section("events").replaceChildren(events);
  section("patch").replaceChildren();
  section("file-view").replaceChildren();
  await refreshFiles(id).catch(showError);

  const debugBox = section("debug");
  if (DEBUGGABLE.has(detail.run.stage)) {
    debugBox.replaceChildren(
      renderDebugForm((message, log) => void sendDebug(id, message, log)),
    );
  } else {
    debugBox.replaceChildren();
  }

  const last = detail.events[detail.events.length - 1];
  poller = new EventPoller(
    id,
    {
      onEvents: (fresh) => {
        if (selectedRunId === id) {
          appendEvents(events, fresh);
        }
      },
      onError: showError,
    },
    last ? last.seq : 0,
  );
  poller.start();
}

function newRunForm(): HTMLFormElement {
  const form = document.createElement("form");
  form.className = "new-run";

  const requirement = document.createElement("textarea");
  requirement.name = "requirement";
  requirement.placeholder = "Describe the game to build";
  requirement.rows = 2;

  const codegen = document.createElement("select");
  codegen.name = "codegen";
  for (const mode of ["llm", "template"]) {
    codegen.appendChild(new Option(`codegen: ${mode}`, mode));
  }

  const gateway = document.createElement("select");
  gateway.name = "gateway";
  for (const mode of ["live", "record", "replay"]) {
    gateway.appendChild(new Option(`gateway: ${mode}`, mode));
  }

  const transcript = document.createElement("input");
  transcript.name = "transcript";
  transcript.placeholder = "Transcript path (record/replay)";

  const submit = document.createElement("button");
  submit.type = "submit";
  submit.textContent = "Create run";

  form.append(requirement, codegen, gateway, transcript, submit);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = requirement.value.trim();
    if (!text) {
      return;
    }
    const options: NewRunOptions = {
      codegenMode: codegen.value as NewRunOptions["codegenMode"],
      gatewayMode: gateway.value as NewRunOptions["gatewayMode"],
    };
    if (transcript.value.trim()) {
      options.transcript = transcript.value.trim();
    }
    void (async () => {
      clearError();
      try {
        const id = await createRun(text, options);
        requirement.value = "";
        await refreshRunList();
        await selectRun(id);
      } catch (error) {
        showError(error);
      }
    })();
  });
  return form;
}

function boot(): void {
  const app = document.getElementById("app");
  if (!app) {
    return;
  }
  app.replaceChildren();

  const header = document.createElement("header");
  header.className = "console-header";
  const title = document.createElement("h1");
  title.textContent = "unigen console";
  header.append(title, newRunForm());

  const status = document.createElement("div");
  status.id = "status";

  const columns = document.createElement("main");
  columns.className = "columns";

  const left = document.createElement("section");
  left.id = "runs";
  left.appendChild(document.createElement("p")).textContent = "Loading runs…";

  const right = document.createElement("section");
  right.className = "detail";
  for (const id of ["run-header", "events", "debug", "patch", "files", "file-view"]) {
    const box = document.createElement("div");
    box.id = id;
    right.appendChild(box);
  }

  columns.append(left, right);
  app.append(header, status, columns);

  refreshRunList().catch(showError);
}

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", boot);
} else {
  boot();
}

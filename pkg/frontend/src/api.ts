/** Typed fetch wrappers over the run server.
 *
 * Every request goes through {@link request}, which confines the console to
 * same-origin /api paths and turns error bodies into {@link ApiError}s.
 */

import type {
  FileContent,
  NewRunOptions,
  PatchSummary,
  Run,
  RunDetail,
  RunEvent,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  if (!path.startsWith("/api/")) {
    throw new Error(`console requests must stay under /api: ${path}`);
  }
  const response = await fetch(path, init);
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    const code =
      body && typeof body.code === "string" ? body.code : "HttpError";
    const message =
      body && typeof body.message === "string"
        ? body.message
        : `${response.status} ${response.statusText}`;
    throw new ApiError(response.status, code, message);
  }
  return body as T;
}

function post<T>(path: string, payload: unknown): Promise<T> {
  return request<T>(path, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
  });
}

/** Encode a run-relative file path, keeping its slashes as separators. */
export function encodeFilePath(path: string): string {
  return path.split("/").map(encodeURIComponent).join("/");
}

export async function createRun(
  requirement: string,
  options?: NewRunOptions,
): Promise<string> {
  const body = await post<{ id: string }>("/api/runs", {
    requirement,
    ...(options ? { options } : {}),
  });
  return body.id;
}

export async function listRuns(): Promise<Run[]> {
  const body = await request<{ runs: Run[] }>("/api/runs");
  return body.runs;
}

export function getRun(id: string): Promise<RunDetail> {
  return request<RunDetail>(`/api/runs/${encodeURIComponent(id)}`);
}

export async function advanceRun(id: string, auto = false): Promise<Run> {
  const body = await post<{ run: Run }>(
    `/api/runs/${encodeURIComponent(id)}/advance`,
    { auto },
  );
  return body.run;
}

export async function fetchEvents(
  id: string,
  since = 0,
): Promise<RunEvent[]> {
  const body = await request<{ events: RunEvent[] }>(
    `/api/runs/${encodeURIComponent(id)}/events?since=${since}`,
  );
  return body.events;
}

export async function listFiles(id: string): Promise<string[]> {
  const body = await request<{ files: string[] }>(
    `/api/runs/${encodeURIComponent(id)}/files`,
  );
  return body.files;
}

export function readFile(id: string, path: string): Promise<FileContent> {
  return request<FileContent>(
    `/api/runs/${encodeURIComponent(id)}/files/${encodeFilePath(path)}`,
  );
}

export function postDebug(
  id: string,
  message: string,
  log?: string,
): Promise<PatchSummary> {
  return post<PatchSummary>(`/api/runs/${encodeURIComponent(id)}/debug`, {
    message,
    ...(log ? { log } : {}),
  });
}

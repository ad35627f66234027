/** Wire shapes of the run server's /api endpoints. */

export type Stage =
  | "Created"
  | "Planned"
  | "Described"
  | "Generated"
  | "Assembled"
  | "Debugging"
  | "Done"
  | "Failed";

export interface RunError {
  stage: Stage;
  message: string;
}

export interface Run {
  id: string;
  requirement: string;
  stage: Stage;
  createdAt: string;
  updatedAt: string;
  codegenMode: "llm" | "template";
  gatewayMode: "live" | "record" | "replay";
  model: string;
  error: RunError | null;
}

export type EventKind =
  | "stageStarted"
  | "stageCompleted"
  | "failed"
  | "debugMessage"
  | "diagnostic"
  | "patchApplied";

export interface RunEvent {
  seq: number;
  timestamp: string;
  kind: EventKind;
  payload: Record<string, unknown>;
}

export interface RunDetail {
  run: Run;
  events: RunEvent[];
}

export interface FileContent {
  path: string;
  content: string;
}

export interface PatchSummary {
  patchId: number;
  changedPaths: string[];
}

/** Options accepted by POST /api/runs; all fields optional. */
export interface NewRunOptions {
  codegenMode?: "llm" | "template";
  gatewayMode?: "live" | "record" | "replay";
  transcript?: string;
  model?: string;
}

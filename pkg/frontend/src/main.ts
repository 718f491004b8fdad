/**
 * DOM wiring. All markup comes from the pure render functions; this file
 * only injects it and attaches event listeners.
 */

import { ApiError, SessionClient, type CreateSessionRequest } from "./api.js";
import { errorBanner, runsList, sessionScreen } from "./render.js";
import { runChart } from "./runs.js";
import { SessionModel } from "./state.js";

const client = new SessionClient();

let model: SessionModel | null = null;

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

function showError(target: HTMLElement, err: unknown, retry?: () => void): void {
  const message =
    err instanceof ApiError ? err.detail : err instanceof Error ? err.message : String(err);
  target.innerHTML = errorBanner(message, retry !== undefined);
  if (retry) {
    document.getElementById("retry-button")?.addEventListener("click", retry);
  }
}

// -- live session ---------------------------------------------------------

function renderSession(): void {
  if (!model) return;
  const root = el("session-root");
  root.innerHTML = sessionScreen(model);
  for (const select of root.querySelectorAll<HTMLSelectElement>(".action-select")) {
    select.addEventListener("change", () => {
      const slot = Number(select.dataset.slot);
      model!.select(slot, Number(select.value));
    });
  }
  const button = document.getElementById("step-button");
  button?.addEventListener("click", () => void submitStep());
}

async function submitStep(): Promise<void> {
  if (!model || model.finished) return;
  const problem = model.submissionError();
  if (problem !== null) {
    // the select widgets only offer in-range values, so this is belt and braces
    showError(el("session-root"), `cannot step: ${problem}`);
    return;
  }
  try {
    const response = await client.step(model.descriptor.session_id, model.selections);
    model.applyStep(response);
    renderSession();
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      // session finished elsewhere; pull the descriptor to pick up the reveal
      const descriptor = await client.getSession(model.descriptor.session_id);
      model = new SessionModel(descriptor);
      renderSession();
      return;
    }
    showError(el("session-root"), err, () => void submitStep());
  }
}

function readSetupForm(): CreateSessionRequest {
  const seed = Number((el("seed-input") as HTMLInputElement).value) || 0;
  const overrides: Record<string, unknown> = {};
  const maxSteps = (el("max-steps-input") as HTMLInputElement).value.trim();
  if (maxSteps !== "") overrides["environment.max_time_steps"] = Number(maxSteps);
  const patients = (el("patients-input") as HTMLInputElement).value.trim();
  if (patients !== "") {
    overrides["environment.num_patients_per_time_step"] = Number(patients);
  }
  const lambda = (el("lambda-input") as HTMLInputElement).value.trim();
  if (lambda !== "") overrides["reward_calculator.lambda_weight"] = Number(lambda);
  const extra = (el("extra-overrides") as HTMLTextAreaElement).value.trim();
  for (const line of extra.split("\n")) {
    const trimmed = line.trim();
    if (trimmed === "") continue;
    const eq = trimmed.indexOf("=");
    if (eq < 0) throw new Error(`override ${JSON.stringify(trimmed)} is not path=value`);
    const raw = trimmed.slice(eq + 1).trim();
    const num = Number(raw);
    overrides[trimmed.slice(0, eq).trim()] = Number.isFinite(num) && raw !== "" ? num : raw;
  }
  return { seed, overrides };
}

async function startSession(): Promise<void> {
  const formError = el("setup-error");
  formError.textContent = "";
  let request: CreateSessionRequest;
  try {
    request = readSetupForm();
  } catch (err) {
    formError.textContent = err instanceof Error ? err.message : String(err);
    return;
  }
  try {
    const descriptor = await client.createSession(request);
    model = new SessionModel(descriptor);
    renderSession();
  } catch (err) {
    if (err instanceof ApiError && err.status === 422) {
      // validation message names the offending parameter path; keep it inline
      formError.textContent = err.detail;
      return;
    }
    showError(el("session-root"), err, () => void startSession());
  }
}

// -- run viewer -----------------------------------------------------------

async function loadRuns(): Promise<void> {
  const root = el("runs-root");
  try {
    const response = await client.listRuns();
    root.innerHTML = runsList(response.runs);
    for (const link of root.querySelectorAll<HTMLAnchorElement>(".run-link")) {
      link.addEventListener("click", (event) => {
        event.preventDefault();
        void loadRunChart(link.dataset.run ?? "");
      });
    }
  } catch (err) {
    showError(root, err, () => void loadRuns());
  }
}

async function loadRunChart(runId: string): Promise<void> {
  const target = el("run-chart");
  try {
    const metrics = await client.runMetrics(runId);
    target.innerHTML = runChart(metrics);
  } catch (err) {
    showError(target, err, () => void loadRunChart(runId));
  }
}

// -- boot -----------------------------------------------------------------

export function boot(): void {
  el("start-button").addEventListener("click", () => void startSession());
  el("refresh-runs-button").addEventListener("click", () => void loadRuns());
  void loadRuns();
}

if (typeof document !== "undefined" && document.getElementById("start-button")) {
  boot();
}

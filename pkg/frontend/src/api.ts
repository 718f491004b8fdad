/**
 * Typed client for the session service JSON API.
 *
 * The fetch implementation is injectable so tests can drive a full episode
 * against canned responses without a running server.
 */

export interface ActionSpace {
  num_slots: number;
  choices_per_slot: number;
}

/** One patient card: slot index, infection-risk estimate, plus any
 * observable attributes the scenario exposes (numeric, name varies). */
export interface ObservedPatient {
  slot: number;
  pi_hat: number;
  [attribute: string]: number;
}

export interface RewardParts {
  overall: number;
  individual: number;
  community: number;
}

export interface Reveal {
  true_sigma_trajectory: number[][];
  true_infected_counts: number[];
  cumulative_reward: RewardParts;
  outcome_counts: Record<string, number>;
}

export interface SessionDescriptor {
  api_version: number;
  session_id: string;
  status: "active" | "finished";
  step_index: number;
  max_time_steps: number;
  antibiotics: string[];
  action_space: ActionSpace;
  observed_antibiogram: number[];
  patients: ObservedPatient[];
  reveal?: Reveal;
}

export interface StepResponse {
  api_version: number;
  session_id: string;
  step_index: number;
  finished: boolean;
  actions: number[];
  reward: RewardParts;
  observed_antibiogram: number[];
  patients: ObservedPatient[];
  reveal?: Reveal;
}

export interface HistoryStep {
  step_index: number;
  actions: number[];
  reward: RewardParts;
  observed_antibiogram: number[];
}

export interface HistoryResponse {
  api_version: number;
  session_id: string;
  status: string;
  steps: HistoryStep[];
  reveal?: Reveal;
}

export interface RunEntry {
  run_id: string;
  summary?: Record<string, unknown>;
  resolved_config?: string;
  error?: string;
}

export interface RunsResponse {
  api_version: number;
  runs: RunEntry[];
}

export interface MetricsResponse {
  api_version: number;
  run_id: string;
  rows: Record<string, string>[];
}

export interface CreateSessionRequest {
  seed: number;
  config_path?: string;
  overrides?: Record<string, unknown>;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
  }
}

async function errorDetail(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (body && typeof body.detail === "string") return body.detail;
    return JSON.stringify(body);
  } catch {
    return response.statusText || "request failed";
  }
}

export class SessionClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init)
  ) {}

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { "Content-Type": "application/json" } };
    if (body !== undefined) init.body = JSON.stringify(body);
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) {
      throw new ApiError(response.status, await errorDetail(response));
    }
    if (response.status === 204) return undefined as T;
    return (await response.json()) as T;
  }

  createSession(req: CreateSessionRequest): Promise<SessionDescriptor> {
    return this.call("POST", "/api/sessions", req);
  }

  getSession(sessionId: string): Promise<SessionDescriptor> {
    return this.call("GET", `/api/sessions/${sessionId}`);
  }

  step(sessionId: string, actions: number[]): Promise<StepResponse> {
    return this.call("POST", `/api/sessions/${sessionId}/step`, { actions });
  }

  history(sessionId: string): Promise<HistoryResponse> {
    return this.call("GET", `/api/sessions/${sessionId}/history`);
  }

  deleteSession(sessionId: string): Promise<void> {
    return this.call("DELETE", `/api/sessions/${sessionId}`);
  }

  listRuns(): Promise<RunsResponse> {
    return this.call("GET", "/api/runs");
  }

  runMetrics(runId: string): Promise<MetricsResponse> {
    return this.call("GET", `/api/runs/${runId}/metrics`);
  }
}

import type {
  FetchLike,
  Reveal,
  SessionDescriptor,
  StepResponse,
} from "../src/api.js";

export function descriptor(over: Partial<SessionDescriptor> = {}): SessionDescriptor {
  return {
    api_version: 1,
    session_id: "abc123",
    status: "active",
    step_index: 0,
    max_time_steps: 3,
    antibiotics: ["abx_a"],
    action_space: { num_slots: 2, choices_per_slot: 2 },
    observed_antibiogram: [0.1],
    patients: [
      { slot: 0, pi_hat: 0.6 },
      { slot: 1, pi_hat: 0.4 },
    ],
    ...over,
  };
}

export function stepResponse(
  stepIndex: number,
  finished: boolean,
  over: Partial<StepResponse> = {}
): StepResponse {
  return {
    api_version: 1,
    session_id: "abc123",
    step_index: stepIndex,
    finished,
    actions: [1, 0],
    reward: { overall: -0.1 * stepIndex, individual: 0.2, community: -0.3 },
    observed_antibiogram: [0.1 + 0.05 * stepIndex],
    patients: [
      { slot: 0, pi_hat: 0.5 },
      { slot: 1, pi_hat: 0.7 },
    ],
    ...over,
  };
}

export function reveal(): Reveal {
  return {
    true_sigma_trajectory: [[0.1], [0.15], [0.2], [0.25]],
    true_infected_counts: [1, 2, 0],
    cumulative_reward: { overall: -0.6, individual: 0.6, community: -0.9 },
    outcome_counts: { success: 3, not_infected: 2, failure_harm: 1 },
  };
}

function json(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

/**
 * Fake fetch playing a fixed-length episode: every step advances the
 * counter, the last one attaches the reveal, further steps 409.
 */
export function fakeService(maxSteps = 3): { fetch: FetchLike; calls: string[] } {
  let step = 0;
  const calls: string[] = [];
  const fetchImpl: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    calls.push(`${method} ${url}`);
    if (method === "POST" && url === "/api/sessions") {
      return json(201, descriptor({ max_time_steps: maxSteps }));
    }
    if (method === "POST" && url === "/api/sessions/abc123/step") {
      const body = JSON.parse(String(init?.body));
      if (!Array.isArray(body.actions) || body.actions.length !== 2) {
        return json(422, { detail: "action vector has wrong length" });
      }
      if (step >= maxSteps) {
        return json(409, { detail: "session already finished; no further steps" });
      }
      step += 1;
      const finished = step === maxSteps;
      const payload = stepResponse(step, finished);
      if (finished) payload.reveal = reveal();
      return json(200, payload);
    }
    if (method === "DELETE" && url === "/api/sessions/abc123") {
      return new Response(null, { status: 204 });
    }
    return json(404, { detail: `unknown ${method} ${url}` });
  };
  return { fetch: fetchImpl, calls };
}

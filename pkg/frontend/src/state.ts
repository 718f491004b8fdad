/**
 * Client-side session state: pending action selections, the reward and
 * observed-resistance timeline, and the post-episode reveal.
 *
 * Everything here is pure bookkeeping over service payloads. No number is
 * computed client-side; the simulation lives entirely behind the API.
 */

import type {
  Reveal,
  RewardParts,
  SessionDescriptor,
  StepResponse,
} from "./api.js";

export const NO_TREATMENT = 0;

export interface TimelinePoint {
  step: number;
  reward: RewardParts;
  observed_antibiogram: number[];
}

/**
 * Check an action vector against the session's action space. Returns null
 * when valid, otherwise a message naming the first offending slot. The UI
 * refuses to submit until this passes, so the service never sees a
 * malformed vector from us.
 */
export function validateActions(
  actions: number[],
  numSlots: number,
  choicesPerSlot: number
): string | null {
  if (actions.length !== numSlots) {
    return `need ${numSlots} selections, have ${actions.length}`;
  }
  for (let slot = 0; slot < actions.length; slot++) {
    const a = actions[slot];
    if (!Number.isInteger(a)) {
      return `slot ${slot}: selection ${a} is not an integer`;
    }
    if (a < 0 || a >= choicesPerSlot) {
      return `slot ${slot}: selection ${a} outside [0, ${choicesPerSlot - 1}]`;
    }
  }
  return null;
}

/** Keys that must never appear outside the reveal block of an active
 * session. "sigma" and "pressure" are the hidden community state;
 * anything prefixed true_ or infected is per-patient ground truth. */
const TRUTH_KEY = /^(true_|infected|infection)/;
const TRUTH_EXACT = new Set(["sigma", "pressure", "pressures"]);

/**
 * Recursively collect truth-field paths in a payload, skipping the reveal
 * subtree (where truth is allowed once the episode has finished).
 */
export function findTruthFields(payload: unknown, prefix = ""): string[] {
  if (payload === null || typeof payload !== "object") return [];
  if (Array.isArray(payload)) {
    return payload.flatMap((item, i) => findTruthFields(item, `${prefix}[${i}]`));
  }
  const found: string[] = [];
  for (const [key, value] of Object.entries(payload)) {
    const path = prefix ? `${prefix}.${key}` : key;
    if (key === "reveal") continue;
    if (TRUTH_KEY.test(key) || TRUTH_EXACT.has(key)) {
      found.push(path);
      continue;
    }
    found.push(...findTruthFields(value, path));
  }
  return found;
}

export class SessionModel {
  descriptor: SessionDescriptor;
  /** Pending selection per patient slot; defaults to no treatment. */
  selections: number[];
  timeline: TimelinePoint[] = [];
  reveal: Reveal | null = null;

  constructor(descriptor: SessionDescriptor) {
    const leaks = findTruthFields(descriptor);
    if (leaks.length > 0) {
      throw new Error(`truth fields outside reveal: ${leaks.join(", ")}`);
    }
    this.descriptor = descriptor;
    this.selections = new Array(descriptor.action_space.num_slots).fill(NO_TREATMENT);
    if (descriptor.reveal) this.reveal = descriptor.reveal;
  }

  get finished(): boolean {
    return this.reveal !== null || this.descriptor.status === "finished";
  }

  select(slot: number, action: number): void {
    const { num_slots, choices_per_slot } = this.descriptor.action_space;
    if (slot < 0 || slot >= num_slots) {
      throw new RangeError(`slot ${slot} outside [0, ${num_slots - 1}]`);
    }
    if (!Number.isInteger(action) || action < 0 || action >= choices_per_slot) {
      throw new RangeError(`action ${action} outside [0, ${choices_per_slot - 1}]`);
    }
    this.selections[slot] = action;
  }

  /** Validation message blocking submission, or null when ready. */
  submissionError(): string | null {
    if (this.finished) return "episode finished";
    const { num_slots, choices_per_slot } = this.descriptor.action_space;
    return validateActions(this.selections, num_slots, choices_per_slot);
  }

  /** Fold a step response into the timeline and swap in the new cohort. */
  applyStep(response: StepResponse): void {
    const leaks = findTruthFields(response);
    if (leaks.length > 0) {
      throw new Error(`truth fields outside reveal: ${leaks.join(", ")}`);
    }
    this.timeline.push({
      step: response.step_index,
      reward: response.reward,
      observed_antibiogram: response.observed_antibiogram,
    });
    this.descriptor = {
      ...this.descriptor,
      step_index: response.step_index,
      observed_antibiogram: response.observed_antibiogram,
      patients: response.patients,
      status: response.finished ? "finished" : "active",
    };
    this.selections = new Array(this.descriptor.action_space.num_slots).fill(NO_TREATMENT);
    if (response.finished) {
      this.reveal = response.reveal ?? null;
    }
  }

  /** Observed resistance for one antibiotic across the played steps. */
  observedSeries(antibioticIndex: number): number[] {
    return this.timeline.map((p) => p.observed_antibiogram[antibioticIndex]);
  }

  /** Step at which the antibiogram snapshot last changed (0 before any
   * step, or if it never moved). Lets the UI label snapshot staleness. */
  lastAntibiogramChangeStep(): number {
    let last = 0;
    for (let i = 1; i < this.timeline.length; i++) {
      const prev = this.timeline[i - 1].observed_antibiogram;
      const cur = this.timeline[i].observed_antibiogram;
      if (cur.some((v, j) => v !== prev[j])) last = this.timeline[i].step;
    }
    return last;
  }

  rewardSeries(part: keyof RewardParts): number[] {
    return this.timeline.map((p) => p.reward[part]);
  }

  cumulativeReward(): number {
    return this.timeline.reduce((acc, p) => acc + p.reward.overall, 0);
  }
}

/**
 * Pure render-to-string views. main.ts injects these with innerHTML and
 * attaches listeners afterwards, so every view is testable as a plain
 * string function.
 */

import type { ObservedPatient, Reveal, RunEntry } from "./api.js";
import { escapeXml, lineChart, type Series } from "./charts.js";
import { NO_TREATMENT, type SessionModel } from "./state.js";

const esc = escapeXml;

function fmt(v: number, digits = 3): string {
  return v.toFixed(digits);
}

export function antibioticCards(
  names: string[],
  antibiogram: number[],
  lastRefreshStep: number
): string {
  const cards = names
    .map(
      (name, i) =>
        `<div class="card abx-card">` +
        `<div class="card-title">${esc(name)}</div>` +
        `<div class="big-number">${fmt(antibiogram[i])}</div>` +
        `<div class="card-sub">observed resistance</div>` +
        `</div>`
    )
    .join("");
  // the snapshot goes stale between refresh ticks; say when it last moved
  return (
    `<div class="card-row">${cards}</div>` +
    `<div class="hint">antibiogram snapshot last changed at step ${lastRefreshStep}</div>`
  );
}

export function patientCards(
  patients: ObservedPatient[],
  selections: number[],
  antibiotics: string[]
): string {
  return patients
    .map((p) => {
      const extras = Object.entries(p)
        .filter(([k]) => k !== "slot" && k !== "pi_hat")
        .map(([k, v]) => `<div class="attr">${esc(k)}: ${fmt(v as number, 2)}</div>`)
        .join("");
      const options = [
        `<option value="${NO_TREATMENT}"${selections[p.slot] === NO_TREATMENT ? " selected" : ""}>no treatment</option>`,
        ...antibiotics.map((name, i) => {
          const a = i + 1;
          const sel = selections[p.slot] === a ? " selected" : "";
          return `<option value="${a}"${sel}>${esc(name)}</option>`;
        }),
      ].join("");
      return (
        `<div class="card patient-card">` +
        `<div class="card-title">patient ${p.slot}</div>` +
        `<div class="attr">infection risk estimate: ${fmt(p.pi_hat, 2)}</div>` +
        extras +
        `<select class="action-select" data-slot="${p.slot}">${options}</select>` +
        `</div>`
      );
    })
    .join("");
}

export function rewardChart(model: SessionModel): string {
  const series: Series[] = [
    { label: "overall", values: model.rewardSeries("overall"), color: "#1f77b4" },
    { label: "individual", values: model.rewardSeries("individual"), color: "#2ca02c" },
    { label: "community", values: model.rewardSeries("community"), color: "#d62728" },
  ];
  return lineChart(series, { title: "reward per step" });
}

const PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

export function resistanceChart(model: SessionModel): string {
  const names = model.descriptor.antibiotics;
  const series: Series[] = names.map((name, i) => ({
    label: `${name} observed`,
    values: model.observedSeries(i),
    color: PALETTE[i % PALETTE.length],
  }));
  if (model.reveal) {
    // overlay the revealed trajectory so the noise/bias/staleness gap is visible
    names.forEach((name, i) => {
      series.push({
        label: `${name} true`,
        values: model.reveal!.true_sigma_trajectory.map((row) => row[i]),
        color: PALETTE[i % PALETTE.length],
        dashed: true,
      });
    });
  }
  return lineChart(series, { title: "resistance level", yRange: [0, 1] });
}

export function revealPanel(reveal: Reveal): string {
  const outcomes = Object.entries(reveal.outcome_counts)
    .sort(([a], [b]) => a.localeCompare(b))
    .map(([k, v]) => `<tr><td>${esc(k)}</td><td>${v}</td></tr>`)
    .join("");
  const infected = reveal.true_infected_counts.reduce((a, b) => a + b, 0);
  return (
    `<div class="reveal" id="reveal-panel">` +
    `<h3>episode reveal</h3>` +
    `<div>cumulative reward: overall ${fmt(reveal.cumulative_reward.overall)}, ` +
    `individual ${fmt(reveal.cumulative_reward.individual)}, ` +
    `community ${fmt(reveal.cumulative_reward.community)}</div>` +
    `<div>truly infected patients: ${infected}</div>` +
    `<table class="outcome-table"><thead><tr><th>outcome</th><th>count</th></tr></thead>` +
    `<tbody>${outcomes}</tbody></table>` +
    `</div>`
  );
}

export function sessionScreen(model: SessionModel): string {
  const d = model.descriptor;
  const stepDisabled = model.finished ? " disabled" : "";
  const err = model.finished ? null : model.submissionError();
  return (
    `<div class="session">` +
    `<div class="status-line">step ${d.step_index} / ${d.max_time_steps}` +
    ` &middot; session <code>${esc(d.session_id)}</code></div>` +
    `<div id="abx-block">${antibioticCards(d.antibiotics, d.observed_antibiogram, model.lastAntibiogramChangeStep())}</div>` +
    `<div class="card-row" id="patient-block">${patientCards(d.patients, model.selections, d.antibiotics)}</div>` +
    `<button id="step-button"${stepDisabled}>prescribe and step</button>` +
    (err ? `<div class="error" id="step-error">${esc(err)}</div>` : "") +
    `<div id="reward-chart">${rewardChart(model)}</div>` +
    `<div id="resistance-chart">${resistanceChart(model)}</div>` +
    (model.reveal ? revealPanel(model.reveal) : "") +
    `</div>`
  );
}

export function errorBanner(message: string, retryable = true): string {
  return (
    `<div class="banner error-banner">${esc(message)}` +
    (retryable ? ` <button id="retry-button">retry</button>` : "") +
    `</div>`
  );
}

export function runsList(runs: RunEntry[]): string {
  if (runs.length === 0) return `<div class="hint">no completed runs found</div>`;
  const items = runs
    .map((r) => {
      const summary = r.summary
        ? ` <span class="hint">${esc(JSON.stringify(r.summary))}</span>`
        : "";
      const error = r.error ? ` <span class="error">${esc(r.error)}</span>` : "";
      return `<li><a href="#" class="run-link" data-run="${esc(r.run_id)}">${esc(r.run_id)}</a>${summary}${error}</li>`;
    })
    .join("");
  return `<ul class="run-list">${items}</ul>`;
}

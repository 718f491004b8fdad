/**
 * Run viewer helpers: turn metrics rows (CSV parsed server-side into
 * string maps) into chart series.
 */

import type { MetricsResponse } from "./api.js";
import { lineChart, type Series } from "./charts.js";

export interface RunSeries {
  trainEpisodes: number[];
  trainReturns: number[];
  evalEpisodes: number[];
  evalReturns: number[];
}

export function extractReturns(rows: Record<string, string>[]): RunSeries {
  const out: RunSeries = {
    trainEpisodes: [],
    trainReturns: [],
    evalEpisodes: [],
    evalReturns: [],
  };
  for (const row of rows) {
    const episode = Number(row.episode);
    const value = Number(row.episode_return);
    if (!Number.isFinite(episode) || !Number.isFinite(value)) continue;
    if (row.phase === "train") {
      out.trainEpisodes.push(episode);
      out.trainReturns.push(value);
    } else if (row.phase === "eval") {
      out.evalEpisodes.push(episode);
      out.evalReturns.push(value);
    }
  }
  return out;
}

export function runChart(metrics: MetricsResponse): string {
  const series = extractReturns(metrics.rows);
  const plotted: Series[] = [
    { label: "train return", values: series.trainReturns, color: "#1f77b4" },
  ];
  if (series.evalReturns.length > 0) {
    plotted.push({ label: "eval return", values: series.evalReturns, color: "#d62728" });
  }
  return lineChart(plotted, { title: `episode return: ${metrics.run_id}` });
}

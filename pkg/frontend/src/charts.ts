/**
 * Dependency-free SVG line charts, built as strings so they can be unit
 * tested without a DOM and injected via innerHTML.
 */

export interface Series {
  label: string;
  values: number[];
  color: string;
  /** Dashed lines mark true (revealed) values, solid lines observed. */
  dashed?: boolean;
}

export interface ChartOptions {
  width?: number;
  height?: number;
  padding?: number;
  /** Fix the y range, e.g. [0, 1] for resistance levels. */
  yRange?: [number, number];
  title?: string;
}

export function yExtent(seriesList: Series[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of seriesList) {
    for (const v of s.values) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  if (!Number.isFinite(lo)) return [0, 1];
  if (lo === hi) return [lo - 0.5, hi + 0.5];
  return [lo, hi];
}

/**
 * Map a value series onto chart coordinates (y axis flipped). Returns the
 * points attribute for an SVG polyline: "x1,y1 x2,y2 ...".
 */
export function polylinePoints(
  values: number[],
  width: number,
  height: number,
  padding: number,
  yMin: number,
  yMax: number,
  xMax: number
): string {
  const innerW = width - 2 * padding;
  const innerH = height - 2 * padding;
  const xStep = xMax > 0 ? innerW / xMax : 0;
  return values
    .map((v, i) => {
      const x = padding + i * xStep;
      const frac = (v - yMin) / (yMax - yMin);
      const y = padding + (1 - frac) * innerH;
      return `${round2(x)},${round2(y)}`;
    })
    .join(" ");
}

function round2(v: number): number {
  return Math.round(v * 100) / 100;
}

function fmtTick(v: number): string {
  return Math.abs(v) >= 100 ? v.toFixed(0) : v.toFixed(2);
}

export function lineChart(seriesList: Series[], options: ChartOptions = {}): string {
  const width = options.width ?? 560;
  const height = options.height ?? 180;
  const padding = options.padding ?? 28;
  const nonEmpty = seriesList.filter((s) => s.values.length > 0);
  const [yMin, yMax] = options.yRange ?? yExtent(nonEmpty);
  const xMax = Math.max(1, ...nonEmpty.map((s) => s.values.length - 1));

  const lines = nonEmpty.map((s) => {
    const points = polylinePoints(s.values, width, height, padding, yMin, yMax, xMax);
    const dash = s.dashed ? ' stroke-dasharray="5 3"' : "";
    return `<polyline fill="none" stroke="${s.color}" stroke-width="1.5"${dash} points="${points}"><title>${escapeXml(s.label)}</title></polyline>`;
  });

  const legend = nonEmpty
    .map((s, i) => {
      const x = padding + i * 130;
      const dash = s.dashed ? ' stroke-dasharray="5 3"' : "";
      return (
        `<line x1="${x}" y1="12" x2="${x + 18}" y2="12" stroke="${s.color}" stroke-width="2"${dash}/>` +
        `<text x="${x + 22}" y="15" class="legend">${escapeXml(s.label)}</text>`
      );
    })
    .join("");

  const axes =
    `<line x1="${padding}" y1="${padding}" x2="${padding}" y2="${height - padding}" stroke="#888"/>` +
    `<line x1="${padding}" y1="${height - padding}" x2="${width - padding}" y2="${height - padding}" stroke="#888"/>` +
    `<text x="4" y="${padding + 4}" class="tick">${fmtTick(yMax)}</text>` +
    `<text x="4" y="${height - padding + 4}" class="tick">${fmtTick(yMin)}</text>` +
    `<text x="${width - padding}" y="${height - padding + 14}" class="tick">${xMax}</text>`;

  const title = options.title
    ? `<text x="${width / 2}" y="14" text-anchor="middle" class="chart-title">${escapeXml(options.title)}</text>`
    : "";

  return (
    `<svg viewBox="0 0 ${width} ${height}" class="chart" role="img">` +
    title +
    axes +
    lines.join("") +
    legend +
    `</svg>`
  );
}

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

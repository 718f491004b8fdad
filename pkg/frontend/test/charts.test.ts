import { describe, expect, it } from "vitest";

import { escapeXml, lineChart, polylinePoints, yExtent } from "../src/charts.js";

describe("polylinePoints", () => {
  it("maps min to the bottom edge and max to the top edge", () => {
    // width 100, height 100, padding 10: inner box is 80x80
    const pts = polylinePoints([0, 1], 100, 100, 10, 0, 1, 1);
    expect(pts).toBe("10,90 90,10");
  });

  it("spaces points evenly along x", () => {
    const pts = polylinePoints([0, 0.5, 1], 100, 100, 10, 0, 1, 2);
    expect(pts.split(" ").map((p) => p.split(",")[0])).toEqual(["10", "50", "90"]);
  });

  it("keeps a single-point series at the left edge", () => {
    expect(polylinePoints([0.5], 100, 100, 10, 0, 1, 0)).toBe("10,50");
  });
});

describe("yExtent", () => {
  it("spans all series", () => {
    const ext = yExtent([
      { label: "a", values: [1, 3], color: "#000" },
      { label: "b", values: [-2, 0], color: "#000" },
    ]);
    expect(ext).toEqual([-2, 3]);
  });

  it("widens a flat series so the line is visible", () => {
    expect(yExtent([{ label: "a", values: [2, 2], color: "#000" }])).toEqual([1.5, 2.5]);
  });

  it("falls back to [0, 1] with no data", () => {
    expect(yExtent([])).toEqual([0, 1]);
  });
});

describe("lineChart", () => {
  it("draws one polyline per series plus a legend", () => {
    const svg = lineChart([
      { label: "observed", values: [0.1, 0.2], color: "#123456" },
      { label: "true", values: [0.15, 0.25], color: "#123456", dashed: true },
    ]);
    expect(svg.match(/<polyline/g)).toHaveLength(2);
    expect(svg).toContain('stroke-dasharray="5 3"');
    expect(svg).toContain(">observed</text>");
    expect(svg).toContain(">true</text>");
  });

  it("respects a fixed y range", () => {
    const svg = lineChart([{ label: "s", values: [0.5], color: "#000" }], {
      yRange: [0, 1],
    });
    expect(svg).toContain(">1.00</text>");
    expect(svg).toContain(">0.00</text>");
  });

  it("escapes markup in labels", () => {
    const svg = lineChart([{ label: "<abx> & co", values: [1, 2], color: "#000" }]);
    expect(svg).toContain("&lt;abx&gt; &amp; co");
    expect(svg).not.toContain("<abx>");
  });
});

describe("escapeXml", () => {
  it("escapes the four reserved characters", () => {
    expect(escapeXml('<a href="x">&</a>')).toBe(
      "&lt;a href=&quot;x&quot;&gt;&amp;&lt;/a&gt;"
    );
  });
});

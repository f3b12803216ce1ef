/** SVG rendering of the three-region stability map.
 *
 * Everything drawn comes verbatim from one service result document: green
 * below the band's lower edge, orange inside the band, red above, lobe
 * curves on top, zone labels A-D along the speed axis, and one pin per
 * probed point colored by its service-returned class. Rendering is
 * deterministic: the same document yields the same DOM, node for node.
 */

import type { ProbedPoint, ResultDocument } from "./types";

export const REGION_COLORS = {
  stable: "#2e7d32",
  conditional: "#ef6c00",
  unstable: "#c62828",
} as const;

export const CLASS_COLORS: Record<string, string> = {
  unconditionally_stable: REGION_COLORS.stable,
  conditional: REGION_COLORS.conditional,
  unconditionally_unstable: REGION_COLORS.unstable,
};

export const WIDTH = 900;
export const HEIGHT = 560;
const MARGIN = { left: 70, right: 24, top: 42, bottom: 56 };

const SVG_NS = "http://www.w3.org/2000/svg";

export class MalformedResultError extends Error {}

/** Structural check before any DOM is touched: bad documents render nothing. */
export function assertRenderable(doc: ResultDocument): void {
  const band = doc?.band;
  if (!band || !Array.isArray(band.n_rpm) || band.n_rpm.length < 2) {
    throw new MalformedResultError("result document lacks a band speed grid");
  }
  const n = band.n_rpm.length;
  if (band.a_low_mm?.length !== n || band.a_high_mm?.length !== n) {
    throw new MalformedResultError("band arrays have mismatched lengths");
  }
  if (!Array.isArray(doc.lobes) || !Array.isArray(doc.zones) || !Array.isArray(doc.verdicts)) {
    throw new MalformedResultError("result document is missing lobes, zones or verdicts");
  }
  for (const value of [...band.a_low_mm, ...band.a_high_mm]) {
    if (typeof value !== "number" || !Number.isFinite(value)) {
      throw new MalformedResultError("band depths must be finite numbers");
    }
  }
}

export interface ChartScales {
  speedToX(n: number): number;
  depthToY(a: number): number;
  xToSpeed(x: number): number;
  yToDepth(y: number): number;
  speedWindow: [number, number];
  depthMax: number;
}

export function makeScales(
  doc: ResultDocument,
  speedScale: "linear" | "log",
  probes: ProbedPoint[] = [],
): ChartScales {
  const speeds = doc.band.n_rpm;
  const nLo = speeds[0];
  const nHi = speeds[speeds.length - 1];
  let depthMax = 1.15 * Math.max(...doc.band.a_high_mm);
  for (const probe of probes) depthMax = Math.max(depthMax, 1.1 * probe.ap_mm);

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const tx = (n: number) =>
    speedScale === "log"
      ? (Math.log10(n) - Math.log10(nLo)) / (Math.log10(nHi) - Math.log10(nLo))
      : (n - nLo) / (nHi - nLo);
  const txInv = (f: number) =>
    speedScale === "log"
      ? Math.pow(10, Math.log10(nLo) + f * (Math.log10(nHi) - Math.log10(nLo)))
      : nLo + f * (nHi - nLo);

  return {
    speedToX: (n) => MARGIN.left + tx(n) * plotW,
    depthToY: (a) => HEIGHT - MARGIN.bottom - (Math.min(a, depthMax) / depthMax) * plotH,
    xToSpeed: (x) => txInv((x - MARGIN.left) / plotW),
    yToDepth: (y) => ((HEIGHT - MARGIN.bottom - y) / plotH) * depthMax,
    speedWindow: [nLo, nHi],
    depthMax,
  };
}

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) el.setAttribute(key, value);
  return el;
}

const fmt = (v: number) => v.toFixed(2);

function regionPath(
  scales: ChartScales,
  speeds: number[],
  upper: number[],
  lower: number[],
): string {
  const forward = speeds
    .map((n, i) => `${fmt(scales.speedToX(n))} ${fmt(scales.depthToY(upper[i]))}`)
    .join(" L ");
  const backward = speeds
    .slice()
    .reverse()
    .map((n, i) => {
      const j = speeds.length - 1 - i;
      return `${fmt(scales.speedToX(n))} ${fmt(scales.depthToY(lower[j]))}`;
    })
    .join(" L ");
  return `M ${forward} L ${backward} Z`;
}

export interface RenderOptions {
  speedScale?: "linear" | "log";
  onProbe?: (n_rpm: number, ap_mm: number) => void;
}

/** Render the diagram into `host`, replacing any previous chart. */
export function renderDiagram(
  host: HTMLElement,
  doc: ResultDocument,
  probes: ProbedPoint[] = [],
  options: RenderOptions = {},
): SVGSVGElement {
  assertRenderable(doc);
  const speedScale = options.speedScale ?? "linear";
  const scales = makeScales(doc, speedScale, probes);
  const { band, zones, lobes } = doc;
  const speeds = band.n_rpm;

  const svg = svgEl("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    width: String(WIDTH),
    height: String(HEIGHT),
    "data-chart": "sld",
    "font-family": "sans-serif",
    "font-size": "13",
  });

  const regions = svgEl("g", { id: "regions" });
  const floor = speeds.map(() => 0);
  const ceiling = speeds.map(() => scales.depthMax);

  const stable = svgEl("g", { id: "region-stable", fill: REGION_COLORS.stable, "fill-opacity": "0.45" });
  stable.appendChild(svgEl("path", { d: regionPath(scales, speeds, band.a_low_mm, floor) }));
  regions.appendChild(stable);

  const conditional = svgEl("g", {
    id: "region-conditional",
    fill: REGION_COLORS.conditional,
    "fill-opacity": "0.45",
  });
  const bandWidth = Math.max(
    ...band.a_high_mm.map((hi, i) => hi - band.a_low_mm[i]),
  );
  if (bandWidth > 0) {
    conditional.appendChild(
      svgEl("path", { d: regionPath(scales, speeds, band.a_high_mm, band.a_low_mm) }),
    );
  }
  regions.appendChild(conditional);

  const unstable = svgEl("g", { id: "region-unstable", fill: REGION_COLORS.unstable, "fill-opacity": "0.45" });
  unstable.appendChild(svgEl("path", { d: regionPath(scales, speeds, ceiling, band.a_high_mm) }));
  regions.appendChild(unstable);
  svg.appendChild(regions);

  const lobeGroup = svgEl("g", { id: "lobes", fill: "none", stroke: "#1a237e", "stroke-width": "1.2" });
  const [nLo, nHi] = scales.speedWindow;
  for (const lobe of lobes) {
    const pts = lobe.points.filter(
      (p) => p.n_rpm >= nLo && p.n_rpm <= nHi && p.a_lim_mm <= scales.depthMax,
    );
    const attr = pts
      .map((p) => `${fmt(scales.speedToX(p.n_rpm))},${fmt(scales.depthToY(p.a_lim_mm))}`)
      .join(" ");
    const polyline = svgEl("polyline", { points: attr, "data-lobe": String(lobe.k) });
    lobeGroup.appendChild(polyline);
  }
  svg.appendChild(lobeGroup);

  const zoneGroup = svgEl("g", { id: "zones", fill: "#333" });
  for (const zone of zones) {
    const lo = Math.max(zone.n_lo, nLo);
    const hi = Math.min(zone.n_hi, nHi);
    if (lo >= hi) continue;
    const mid = speedScale === "log" ? Math.sqrt(lo * hi) : 0.5 * (lo + hi);
    const label = svgEl("text", {
      x: fmt(scales.speedToX(mid)),
      y: String(MARGIN.top - 12),
      "text-anchor": "middle",
      "data-zone": zone.label,
    });
    label.textContent = zone.label;
    zoneGroup.appendChild(label);
    if (zone.n_lo > nLo && zone.n_lo < nHi) {
      zoneGroup.appendChild(
        svgEl("line", {
          x1: fmt(scales.speedToX(zone.n_lo)),
          y1: String(MARGIN.top - 8),
          x2: fmt(scales.speedToX(zone.n_lo)),
          y2: String(HEIGHT - MARGIN.bottom),
          stroke: "#999",
          "stroke-dasharray": "4 4",
        }),
      );
    }
  }
  svg.appendChild(zoneGroup);

  const probeGroup = svgEl("g", { id: "probes" });
  probes.forEach((probe, i) => {
    const color = probe.verdict ? CLASS_COLORS[probe.verdict.class] : "#9e9e9e";
    const pin = svgEl("circle", {
      cx: fmt(scales.speedToX(probe.n_rpm)),
      cy: fmt(scales.depthToY(probe.ap_mm)),
      r: "6",
      fill: color,
      stroke: "black",
      "data-probe": String(i),
    });
    const title = svgEl("title", {});
    title.textContent = probe.verdict
      ? `${probe.verdict.class}, p_stable=${probe.verdict.p_stable.toFixed(2)}, ` +
        `margin=${probe.verdict.margin_mm.toFixed(3)} mm`
      : "classifying…";
    pin.appendChild(title);
    probeGroup.appendChild(pin);
  });
  svg.appendChild(probeGroup);

  const axisY = HEIGHT - MARGIN.bottom;
  svg.appendChild(
    svgEl("line", { x1: String(MARGIN.left), y1: String(axisY), x2: String(WIDTH - MARGIN.right), y2: String(axisY), stroke: "black" }),
  );
  svg.appendChild(
    svgEl("line", { x1: String(MARGIN.left), y1: String(MARGIN.top), x2: String(MARGIN.left), y2: String(axisY), stroke: "black" }),
  );
  const xLabel = svgEl("text", {
    x: String((MARGIN.left + WIDTH - MARGIN.right) / 2),
    y: String(HEIGHT - 12),
    "text-anchor": "middle",
    "data-axis": "x",
  });
  xLabel.textContent = "Spindle speed [rpm]";
  svg.appendChild(xLabel);
  const yMid = (MARGIN.top + axisY) / 2;
  const yLabel = svgEl("text", {
    x: "18",
    y: String(yMid),
    "text-anchor": "middle",
    transform: `rotate(-90 18 ${yMid})`,
    "data-axis": "y",
  });
  yLabel.textContent = "Axial depth of cut [mm]";
  svg.appendChild(yLabel);

  const ticks = svgEl("g", { id: "ticks", fill: "#333" });
  for (const frac of [0, 0.25, 0.5, 0.75, 1]) {
    const n = scales.xToSpeed(MARGIN.left + frac * (WIDTH - MARGIN.left - MARGIN.right));
    const tick = svgEl("text", {
      x: fmt(MARGIN.left + frac * (WIDTH - MARGIN.left - MARGIN.right)),
      y: String(axisY + 18),
      "text-anchor": "middle",
    });
    tick.textContent = n.toFixed(0);
    ticks.appendChild(tick);
    const depth = frac * scales.depthMax;
    const dTick = svgEl("text", {
      x: String(MARGIN.left - 8),
      y: fmt(scales.depthToY(depth)),
      "text-anchor": "end",
    });
    dTick.textContent = depth.toFixed(2);
    ticks.appendChild(dTick);
  }
  svg.appendChild(ticks);

  if (options.onProbe) {
    const onProbe = options.onProbe;
    svg.addEventListener("click", (event: MouseEvent) => {
      const rect = svg.getBoundingClientRect();
      const sx = rect.width > 0 ? WIDTH / rect.width : 1;
      const sy = rect.height > 0 ? HEIGHT / rect.height : 1;
      const x = (event.clientX - rect.left) * sx;
      const y = (event.clientY - rect.top) * sy;
      if (x < MARGIN.left || x > WIDTH - MARGIN.right || y < MARGIN.top || y > axisY) return;
      onProbe(scales.xToSpeed(x), scales.yToDepth(y));
    });
  }

  host.replaceChildren(svg);
  return svg;
}

import { describe, expect, it } from "vitest";

import { MalformedResultError, makeScales, renderDiagram } from "../src/chart";
import type { ResultDocument } from "../src/types";
import { fixedResult, fixedVerdict } from "./fixtures";

function host(): HTMLElement {
  const el = document.createElement("div");
  document.body.appendChild(el);
  return el;
}

describe("renderDiagram", () => {
  it("renders deterministically: same document, same DOM", () => {
    const doc = fixedResult();
    const first = renderDiagram(host(), doc).outerHTML;
    const second = renderDiagram(host(), doc).outerHTML;
    expect(second).toBe(first);
  });

  it("matches the structural snapshot", () => {
    const svg = renderDiagram(host(), fixedResult());
    const shape = {
      regions: svg.querySelectorAll("#regions > g").length,
      regionIds: [...svg.querySelectorAll("#regions > g")].map((g) => g.id),
      lobes: svg.querySelectorAll("polyline").length,
      zoneLabels: [...svg.querySelectorAll("[data-zone]")].map((t) => t.textContent),
      probes: svg.querySelectorAll("#probes circle").length,
    };
    expect(shape).toMatchInlineSnapshot(`
      {
        "lobes": 3,
        "probes": 0,
        "regionIds": [
          "region-stable",
          "region-conditional",
          "region-unstable",
        ],
        "regions": 3,
        "zoneLabels": [
          "B",
          "C",
          "D",
        ],
      }
    `);
  });

  it("draws one polyline per lobe", () => {
    const svg = renderDiagram(host(), fixedResult());
    expect(svg.querySelectorAll("#lobes polyline").length).toBe(3);
  });

  it("labels the axes with the physical quantities", () => {
    const svg = renderDiagram(host(), fixedResult());
    expect(svg.querySelector('[data-axis="x"]')?.textContent).toBe("Spindle speed [rpm]");
    expect(svg.querySelector('[data-axis="y"]')?.textContent).toBe("Axial depth of cut [mm]");
  });

  it("collapses the conditional region for a zero-width band", () => {
    const doc = fixedResult();
    doc.band = {
      n_rpm: doc.band.n_rpm,
      a_low_mm: [...doc.band.a_high_mm],
      a_high_mm: [...doc.band.a_high_mm],
    };
    const svg = renderDiagram(host(), doc);
    expect(svg.querySelectorAll("#region-conditional path").length).toBe(0);
    expect(svg.querySelectorAll("#region-stable path").length).toBe(1);
    expect(svg.querySelectorAll("#region-unstable path").length).toBe(1);
  });

  it("colors probe pins by their service class and shows the verdict verbatim", () => {
    const probes = [
      { n_rpm: 15000, ap_mm: 1.0, verdict: fixedVerdict() },
      {
        n_rpm: 20000,
        ap_mm: 0.5,
        verdict: fixedVerdict({ class: "unconditionally_stable", p_stable: 1.0 }),
      },
    ];
    const svg = renderDiagram(host(), fixedResult(), probes);
    const pins = svg.querySelectorAll("#probes circle");
    expect(pins.length).toBe(2);
    expect(pins[0].getAttribute("fill")).toBe("#ef6c00");
    expect(pins[1].getAttribute("fill")).toBe("#2e7d32");
    expect(pins[0].querySelector("title")?.textContent).toContain("conditional");
    expect(pins[0].querySelector("title")?.textContent).toContain("p_stable=0.37");
  });

  it("rejects malformed documents without partial render", () => {
    const el = host();
    el.innerHTML = "<p>previous content</p>";
    const bad = { metadata: {} } as unknown as ResultDocument;
    expect(() => renderDiagram(el, bad)).toThrow(MalformedResultError);
    expect(el.innerHTML).toBe("<p>previous content</p>");
  });

  it("log scale maps the window ends to the same pixels as linear", () => {
    const doc = fixedResult();
    const linear = makeScales(doc, "linear");
    const log = makeScales(doc, "log");
    expect(log.speedToX(8000)).toBeCloseTo(linear.speedToX(8000), 8);
    expect(log.speedToX(30000)).toBeCloseTo(linear.speedToX(30000), 8);
    expect(log.speedToX(16000)).toBeGreaterThan(linear.speedToX(16000));
  });

  it("scale inverses round-trip", () => {
    const doc = fixedResult();
    for (const mode of ["linear", "log"] as const) {
      const scales = makeScales(doc, mode);
      for (const n of [8000, 12345, 29999]) {
        expect(scales.xToSpeed(scales.speedToX(n))).toBeCloseTo(n, 6);
      }
      for (const a of [0.1, 1.7, 3.4]) {
        expect(scales.yToDepth(scales.depthToY(a))).toBeCloseTo(a, 8);
      }
    }
  });
});

/** Fixed service documents used by the component tests (no live service). */

import type { JobDoc, ResultDocument, VerdictDoc } from "../src/types";

export function fixedResult(overrides: Partial<ResultDocument> = {}): ResultDocument {
  const base: ResultDocument = {
    metadata: {
      tool_name: "fixture-tool",
      material: "Al7075",
      dynamics_source: "ema",
      damping_source: "measured",
      coefficient_provenance: "catalog",
      seed: 1,
      n_samples: 8,
      quantiles: "minmax",
      version: "0.1.0",
      provenance_note: "fixture",
      request_hash: "fixture-hash-1",
    },
    lobes: [
      {
        k: 0,
        points: [
          { omega_c_rad_s: 5100, n_rpm: 24000, a_lim_mm: 6.0 },
          { omega_c_rad_s: 5200, n_rpm: 27000, a_lim_mm: 3.0 },
          { omega_c_rad_s: 5300, n_rpm: 30000, a_lim_mm: 5.5 },
        ],
      },
      {
        k: 1,
        points: [
          { omega_c_rad_s: 5100, n_rpm: 12000, a_lim_mm: 4.0 },
          { omega_c_rad_s: 5200, n_rpm: 14000, a_lim_mm: 2.2 },
          { omega_c_rad_s: 5300, n_rpm: 17000, a_lim_mm: 4.5 },
        ],
      },
      {
        k: 2,
        points: [
          { omega_c_rad_s: 5100, n_rpm: 8000, a_lim_mm: 4.8 },
          { omega_c_rad_s: 5200, n_rpm: 9500, a_lim_mm: 2.9 },
          { omega_c_rad_s: 5300, n_rpm: 11000, a_lim_mm: 5.0 },
        ],
      },
    ],
    envelope: {
      n_rpm: [8000, 12000, 16000, 22000, 30000],
      a_mm: [2.4, 1.9, 1.6, 1.9, 2.6],
    },
    band: {
      n_rpm: [8000, 12000, 16000, 22000, 30000],
      a_low_mm: [1.8, 1.4, 1.2, 1.5, 2.0],
      a_high_mm: [3.4, 2.8, 2.3, 2.9, 3.8],
    },
    zones: [
      { n_lo: 8000, n_hi: 12000, label: "B" },
      { n_lo: 12000, n_hi: 24000, label: "C" },
      { n_lo: 24000, n_hi: 30000, label: "D" },
    ],
    verdicts: [],
  };
  return { ...base, ...overrides };
}

export function fixedVerdict(overrides: Partial<VerdictDoc> = {}): VerdictDoc {
  return {
    n_rpm: 15000,
    ap_mm: 1.0,
    class: "conditional",
    p_stable: 0.37,
    margin_mm: -0.21,
    ...overrides,
  };
}

export function fixtureJob(): JobDoc {
  return {
    name: "fixture-job",
    tool: {
      name: "fixture-tool",
      n_flutes: 2,
      overhang_mm: 60,
      segments: [
        { length_mm: 30, diameter_mm: 12, kind: "shank" },
        { length_mm: 30, diameter_mm: 12, kind: "fluted" },
      ],
      material: { name: "carbide", youngs_modulus_gpa: 600, density_kg_m3: 14500 },
    },
    material: "Al7075",
    coefficient_source: "catalog",
    cut: { milling_mode: "slot", radial_immersion: 1.0 },
    sweep: { n_freq: 600, k_max: 4 },
    monte_carlo: { n_samples: 8, seed: 3, quantiles: "minmax" },
  };
}

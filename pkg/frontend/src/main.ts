/** Bootstrap: read the service base URL, seed a default job, mount the app. */

import { ApiClient } from "./api";
import { Explorer } from "./app";
import type { JobDoc } from "./types";

export const DEFAULT_JOB: JobDoc = {
  name: "explorer-session",
  tool: {
    name: "carbide-endmill-12",
    n_flutes: 2,
    helix_angle_deg: 30,
    overhang_mm: 60,
    segments: [
      { length_mm: 35, diameter_mm: 12, kind: "shank" },
      { length_mm: 30, diameter_mm: 12, kind: "fluted" },
    ],
    material: { name: "carbide", youngs_modulus_gpa: 600, density_kg_m3: 14500 },
  },
  material: "Al7075",
  coefficient_source: "catalog",
  cut: { milling_mode: "slot", radial_immersion: 1.0 },
  sweep: { n_freq: 1200, k_max: 5 },
  monte_carlo: { n_samples: 120, seed: 1, quantiles: "minmax" },
};

function serviceBaseUrl(): string {
  const meta = document.querySelector<HTMLMetaElement>('meta[name="sld-service-url"]');
  return meta?.content ?? "http://127.0.0.1:8765";
}

export function bootstrap(root: HTMLElement): Explorer {
  const api = new ApiClient(serviceBaseUrl());
  return new Explorer(root, api, structuredClone(DEFAULT_JOB));
}

const rootEl = document.getElementById("app");
if (rootEl) bootstrap(rootEl);

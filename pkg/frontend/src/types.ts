/** Wire formats of the stability service (mirrors the server JSON schemas). */

export type MillingMode = "up" | "down" | "slot";
export type QuantilePair = "minmax" | "q05q95";
export type StabilityClass =
  | "unconditionally_stable"
  | "conditional"
  | "unconditionally_unstable";

export interface ToolSegmentDoc {
  length_mm: number;
  diameter_mm: number;
  kind: "shank" | "fluted";
}

export interface ToolDoc {
  name: string;
  n_flutes: number;
  helix_angle_deg?: number;
  overhang_mm: number;
  d_eff_factor?: number;
  segments: ToolSegmentDoc[];
  material: { name: string; youngs_modulus_gpa: number; density_kg_m3: number };
}

export interface JobDoc {
  name?: string;
  tool: ToolDoc;
  material: string;
  coefficient_source: "catalog" | "test";
  cut: { milling_mode: MillingMode; radial_immersion: number };
  fem?: { elements_per_segment?: number; n_modes?: number; default_damping?: number };
  sweep?: {
    f_min_hz?: number;
    f_max_hz?: number;
    n_freq?: number;
    k_max?: number;
  };
  uncertainty?: Record<string, DistributionDoc>;
  monte_carlo?: {
    n_samples?: number;
    seed?: number;
    quantiles?: QuantilePair;
    workers?: number;
  };
}

export type DistributionDoc =
  | { dist: "fixed"; value: number }
  | { dist: "uniform"; lo: number; hi: number }
  | { dist: "normal"; mean: number; std: number }
  | { dist: "uniform_rel"; rel: number }
  | { dist: "normal_rel"; rel_std: number };

export interface LobePointDoc {
  omega_c_rad_s: number;
  n_rpm: number;
  a_lim_mm: number;
}

export interface ResultDocument {
  metadata: {
    tool_name: string;
    material: string;
    dynamics_source: string;
    damping_source: string;
    coefficient_provenance: string;
    seed: number;
    n_samples: number;
    quantiles: QuantilePair;
    version: string;
    provenance_note: string;
    request_hash?: string;
    [key: string]: unknown;
  };
  lobes: Array<{ k: number; points: LobePointDoc[] }>;
  envelope: { n_rpm: number[]; a_mm: number[] };
  band: { n_rpm: number[]; a_low_mm: number[]; a_high_mm: number[] };
  zones: Array<{ n_lo: number; n_hi: number; label: "A" | "B" | "C" | "D" }>;
  verdicts: VerdictDoc[];
}

export interface VerdictDoc {
  n_rpm: number;
  ap_mm: number;
  class: StabilityClass;
  p_stable: number;
  margin_mm: number;
}

export interface ServiceError {
  error: { code: string; message: string; path?: string };
}

export interface ProbedPoint {
  n_rpm: number;
  ap_mm: number;
  /** Verbatim service verdict; null while a classify call is in flight. */
  verdict: VerdictDoc | null;
}

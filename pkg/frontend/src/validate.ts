/** Client-side job validation mirroring the server job schema.
 *
 * Catches the mistakes a form can produce (signs, ranges, slot immersion)
 * before any network request; the server schema remains the authority.
 */

import type { JobDoc } from "./types";

export interface FieldError {
  field: string;
  message: string;
}

export function validateJob(job: JobDoc): FieldError[] {
  const errors: FieldError[] = [];
  const need = (ok: boolean, field: string, message: string) => {
    if (!ok) errors.push({ field, message });
  };

  const tool = job.tool;
  need(tool.n_flutes >= 1 && Number.isInteger(tool.n_flutes), "tool.n_flutes",
    "number of flutes must be a positive integer");
  need(tool.overhang_mm > 0, "tool.overhang_mm", "overhang must be positive");
  need(tool.segments.length >= 1, "tool.segments", "at least one segment");
  let total = 0;
  tool.segments.forEach((seg, i) => {
    need(seg.length_mm > 0, `tool.segments.${i}.length_mm`, "segment length must be positive");
    need(seg.diameter_mm > 0, `tool.segments.${i}.diameter_mm`,
      "segment diameter must be positive");
    total += seg.length_mm;
  });
  need(total >= tool.overhang_mm, "tool.overhang_mm",
    "overhang exceeds the summed segment length");
  need(tool.material.youngs_modulus_gpa > 0, "tool.material.youngs_modulus_gpa",
    "Young's modulus must be positive");
  need(tool.material.density_kg_m3 > 0, "tool.material.density_kg_m3",
    "density must be positive");

  need(job.material.trim().length > 0, "material", "workpiece material is required");

  const cut = job.cut;
  need(cut.radial_immersion > 0 && cut.radial_immersion <= 1, "cut.radial_immersion",
    "radial immersion must lie in (0, 1]");
  if (cut.milling_mode === "slot") {
    need(cut.radial_immersion === 1, "cut.radial_immersion",
      "slot milling implies radial immersion 1");
  }

  const sweep = job.sweep ?? {};
  if (sweep.f_min_hz !== undefined && sweep.f_max_hz !== undefined) {
    need(sweep.f_min_hz > 0 && sweep.f_min_hz < sweep.f_max_hz, "sweep.f_min_hz",
      "sweep needs 0 < f_min < f_max");
  }
  if (sweep.n_freq !== undefined) {
    need(sweep.n_freq >= 2 && Number.isInteger(sweep.n_freq), "sweep.n_freq",
      "frequency count must be an integer >= 2");
  }
  if (sweep.k_max !== undefined) {
    need(sweep.k_max >= 0 && Number.isInteger(sweep.k_max), "sweep.k_max",
      "lobe count must be a non-negative integer");
  }

  const mc = job.monte_carlo ?? {};
  if (mc.n_samples !== undefined) {
    need(mc.n_samples >= 1 && Number.isInteger(mc.n_samples), "monte_carlo.n_samples",
      "sample count must be a positive integer");
  }
  if (mc.seed !== undefined) {
    need(Number.isInteger(mc.seed) && mc.seed >= 0, "monte_carlo.seed",
      "seed must be a non-negative integer");
  }

  for (const [param, dist] of Object.entries(job.uncertainty ?? {})) {
    if (dist.dist === "uniform") {
      need(dist.lo < dist.hi, `uncertainty.${param}`, "uniform needs lo < hi");
    } else if (dist.dist === "normal") {
      need(dist.std >= 0, `uncertainty.${param}`, "normal needs std >= 0");
    } else if (dist.dist === "uniform_rel") {
      need(dist.rel > 0 && dist.rel < 1, `uncertainty.${param}`,
        "relative half-width must lie in (0, 1)");
    } else if (dist.dist === "normal_rel") {
      need(dist.rel_std > 0, `uncertainty.${param}`, "relative std must be positive");
    }
  }
  return errors;
}

/** Job form: field definitions, DOM construction, read-back and inline errors.
 *
 * Each field maps one input onto a path in the job document. Read-back
 * produces a fresh job object; validation messages land in a <span> next to
 * the offending input and block the request upstream.
 */

import type { JobDoc } from "./types";
import type { FieldError } from "./validate";

export interface FieldDef {
  /** Dot path into the job document, also the error-matching key. */
  path: string;
  label: string;
  kind: "number" | "integer" | "text" | "select";
  options?: string[];
  /** Apply the parsed value onto the job draft. */
  apply(job: JobDoc, value: number | string): void;
  /** Current value for the input. */
  read(job: JobDoc): number | string;
}

export const FIELDS: FieldDef[] = [
  {
    path: "tool.overhang_mm", label: "Overhang [mm]", kind: "number",
    apply: (job, v) => { job.tool.overhang_mm = v as number; },
    read: (job) => job.tool.overhang_mm,
  },
  {
    path: "tool.n_flutes", label: "Flutes", kind: "integer",
    apply: (job, v) => { job.tool.n_flutes = v as number; },
    read: (job) => job.tool.n_flutes,
  },
  {
    path: "material", label: "Workpiece material", kind: "text",
    apply: (job, v) => { job.material = v as string; },
    read: (job) => job.material,
  },
  {
    path: "coefficient_source", label: "Coefficient source", kind: "select",
    options: ["catalog", "test"],
    apply: (job, v) => { job.coefficient_source = v as "catalog" | "test"; },
    read: (job) => job.coefficient_source,
  },
  {
    path: "cut.milling_mode", label: "Milling mode", kind: "select",
    options: ["slot", "up", "down"],
    apply: (job, v) => { job.cut.milling_mode = v as "slot" | "up" | "down"; },
    read: (job) => job.cut.milling_mode,
  },
  {
    path: "cut.radial_immersion", label: "Radial immersion a_r/D", kind: "number",
    apply: (job, v) => { job.cut.radial_immersion = v as number; },
    read: (job) => job.cut.radial_immersion,
  },
  {
    path: "monte_carlo.n_samples", label: "MC samples", kind: "integer",
    apply: (job, v) => { (job.monte_carlo ??= {}).n_samples = v as number; },
    read: (job) => job.monte_carlo?.n_samples ?? 200,
  },
  {
    path: "monte_carlo.seed", label: "Seed", kind: "integer",
    apply: (job, v) => { (job.monte_carlo ??= {}).seed = v as number; },
    read: (job) => job.monte_carlo?.seed ?? 1,
  },
  {
    path: "monte_carlo.quantiles", label: "Band quantiles", kind: "select",
    options: ["minmax", "q05q95"],
    apply: (job, v) => { (job.monte_carlo ??= {}).quantiles = v as "minmax" | "q05q95"; },
    read: (job) => job.monte_carlo?.quantiles ?? "minmax",
  },
  {
    path: "sweep.k_max", label: "Lobe count k_max", kind: "integer",
    apply: (job, v) => { (job.sweep ??= {}).k_max = v as number; },
    read: (job) => job.sweep?.k_max ?? 5,
  },
];

const inputId = (path: string) => `field-${path.replace(/\./g, "-")}`;

export function buildForm(host: HTMLElement, job: JobDoc): void {
  host.replaceChildren();
  for (const field of FIELDS) {
    const row = document.createElement("label");
    row.className = "form-row";
    row.setAttribute("data-field", field.path);

    const caption = document.createElement("span");
    caption.textContent = field.label;
    row.appendChild(caption);

    let input: HTMLInputElement | HTMLSelectElement;
    if (field.kind === "select") {
      input = document.createElement("select");
      for (const option of field.options ?? []) {
        const el = document.createElement("option");
        el.value = option;
        el.textContent = option;
        input.appendChild(el);
      }
    } else {
      input = document.createElement("input");
      input.type = field.kind === "text" ? "text" : "number";
      if (field.kind === "number") input.step = "any";
    }
    input.id = inputId(field.path);
    input.value = String(field.read(job));
    row.appendChild(input);

    const error = document.createElement("span");
    error.className = "field-error";
    error.setAttribute("data-error-for", field.path);
    row.appendChild(error);

    host.appendChild(row);
  }
}

export interface FormReadResult {
  job: JobDoc;
  errors: FieldError[];
}

/** Read the inputs back into a copy of the base job; parse errors per field. */
export function readForm(host: HTMLElement, base: JobDoc): FormReadResult {
  const job: JobDoc = structuredClone(base);
  const errors: FieldError[] = [];
  for (const field of FIELDS) {
    const input = host.querySelector<HTMLInputElement | HTMLSelectElement>(
      `#${inputId(field.path)}`,
    );
    if (!input) continue;
    const raw = input.value;
    if (field.kind === "text" || field.kind === "select") {
      field.apply(job, raw);
      continue;
    }
    const value = Number(raw);
    if (raw.trim() === "" || !Number.isFinite(value)) {
      errors.push({ field: field.path, message: "enter a number" });
      continue;
    }
    if (field.kind === "integer" && !Number.isInteger(value)) {
      errors.push({ field: field.path, message: "must be an integer" });
      continue;
    }
    field.apply(job, value);
  }
  return { job, errors };
}

export function showFieldErrors(host: HTMLElement, errors: FieldError[]): void {
  for (const span of host.querySelectorAll(".field-error")) span.textContent = "";
  for (const error of errors) {
    const span = host.querySelector(`[data-error-for="${error.field}"]`);
    if (span) span.textContent = error.message;
  }
}

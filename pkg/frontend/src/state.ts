/** Explorer view state.
 *
 * Invariant: everything rendered (regions, verdict pins) traces back to a
 * service response stored here; the UI never computes stability itself.
 * Probed points survive recomputes (the "what-if" memory) and are only
 * dropped on an explicit clear.
 */

import type { JobDoc, ProbedPoint, ResultDocument, VerdictDoc } from "./types";

export type SpeedAxisScale = "linear" | "log";

export class ViewState {
  job: JobDoc;
  result: ResultDocument | null = null;
  probes: ProbedPoint[] = [];
  speedScale: SpeedAxisScale = "linear";

  constructor(initialJob: JobDoc) {
    this.job = initialJob;
  }

  get requestHash(): string | null {
    return this.result?.metadata.request_hash ?? null;
  }

  setResult(result: ResultDocument): void {
    this.result = result;
  }

  addProbe(n_rpm: number, ap_mm: number, verdict: VerdictDoc): ProbedPoint {
    const probe: ProbedPoint = { n_rpm, ap_mm, verdict };
    this.probes.push(probe);
    return probe;
  }

  /** Replace every probe's verdict after a recompute (same points, new band). */
  updateProbeVerdicts(verdicts: VerdictDoc[]): void {
    if (verdicts.length !== this.probes.length) {
      throw new Error(
        `verdict count ${verdicts.length} does not match probe count ${this.probes.length}`,
      );
    }
    this.probes = this.probes.map((probe, i) => ({ ...probe, verdict: verdicts[i] }));
  }

  clearProbes(): void {
    this.probes = [];
  }
}

/** Explorer controller: wires the form, the chart and the probe list to the
 * service client.
 *
 * Decision loop: edit parameters -> recompute -> probe candidate points ->
 * read verdicts -> edit again. Probed points persist across recomputes and
 * are re-classified automatically against the new computation, so the user
 * sees how their candidates moved. The UI never computes stability: every
 * region and every verdict shown is a service response field.
 */

import { ApiClient, ApiError } from "./api";
import { MalformedResultError, renderDiagram } from "./chart";
import { buildForm, readForm, showFieldErrors } from "./form";
import { ViewState } from "./state";
import type { JobDoc } from "./types";
import { validateJob } from "./validate";

export class Explorer {
  readonly state: ViewState;
  private readonly els: {
    banner: HTMLElement;
    form: HTMLElement;
    chart: HTMLElement;
    probeList: HTMLElement;
    probeMessage: HTMLElement;
    probeN: HTMLInputElement;
    probeAp: HTMLInputElement;
  };

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    initialJob: JobDoc,
  ) {
    this.state = new ViewState(initialJob);
    this.els = buildLayout(root);
    buildForm(this.els.form, this.state.job);
    this.root.querySelector("#recompute")!.addEventListener("click", () => {
      void this.recompute();
    });
    this.root.querySelector("#probe-add")!.addEventListener("click", () => {
      void this.probeFromInputs();
    });
    this.root.querySelector("#probe-clear")!.addEventListener("click", () => {
      this.state.clearProbes();
      this.renderChart();
      this.renderProbeList();
    });
    this.root.querySelector("#axis-toggle")!.addEventListener("click", () => {
      this.state.speedScale = this.state.speedScale === "linear" ? "log" : "linear";
      this.renderChart();
    });
  }

  /** Validate the form, POST /compute, then re-classify every pinned probe. */
  async recompute(): Promise<void> {
    const { job, errors: parseErrors } = readForm(this.els.form, this.state.job);
    const errors = [...parseErrors, ...validateJob(job)];
    showFieldErrors(this.els.form, errors);
    if (errors.length > 0) return;

    this.state.job = job;
    this.setBanner(null);
    let result;
    try {
      result = await this.api.compute(job);
    } catch (error) {
      if ((error as Error).name === "AbortError") return; // superseded by a newer edit
      this.setBanner(describeError(error));
      return;
    }
    this.state.setResult(result);
    try {
      this.renderChart();
    } catch (error) {
      if (error instanceof MalformedResultError) {
        this.setBanner(`malformed result document: ${error.message}`);
        return;
      }
      throw error;
    }
    await this.reclassifyProbes();
    this.renderProbeList();
  }

  /** Classify one point and pin it; service rejections show inline, no pin. */
  async probe(n_rpm: number, ap_mm: number): Promise<void> {
    const hash = this.state.requestHash;
    if (!hash) {
      this.els.probeMessage.textContent = "compute a diagram first";
      return;
    }
    this.els.probeMessage.textContent = "";
    try {
      const verdict = await this.api.classify(hash, n_rpm, ap_mm);
      this.state.addProbe(n_rpm, ap_mm, verdict);
    } catch (error) {
      this.els.probeMessage.textContent = describeError(error);
      return;
    }
    this.renderChart();
    this.renderProbeList();
  }

  private async probeFromInputs(): Promise<void> {
    const n = Number(this.els.probeN.value);
    const ap = Number(this.els.probeAp.value);
    if (!Number.isFinite(n) || n <= 0 || !Number.isFinite(ap) || ap < 0) {
      this.els.probeMessage.textContent = "enter a positive speed and a non-negative depth";
      return;
    }
    await this.probe(n, ap);
  }

  /** Fresh verdicts for all pins against the current computation. */
  private async reclassifyProbes(): Promise<void> {
    const hash = this.state.requestHash;
    if (!hash || this.state.probes.length === 0) return;
    const verdicts = await Promise.all(
      this.state.probes.map((probe) => this.api.classify(hash, probe.n_rpm, probe.ap_mm)),
    );
    this.state.updateProbeVerdicts(verdicts);
  }

  renderChart(): void {
    if (!this.state.result) return;
    renderDiagram(this.els.chart, this.state.result, this.state.probes, {
      speedScale: this.state.speedScale,
      onProbe: (n, ap) => void this.probe(n, ap),
    });
  }

  renderProbeList(): void {
    const rows = this.state.probes.map((probe, i) => {
      const verdict = probe.verdict;
      const cells = [
        `#${i + 1}`,
        `${probe.n_rpm.toFixed(0)} rpm`,
        `${probe.ap_mm.toFixed(3)} mm`,
        verdict ? verdict.class : "…",
        verdict ? `p=${verdict.p_stable.toFixed(2)}` : "",
        verdict ? `margin ${verdict.margin_mm.toFixed(3)} mm` : "",
      ];
      return `<tr data-probe-row="${i}">${cells.map((c) => `<td>${c}</td>`).join("")}</tr>`;
    });
    this.els.probeList.innerHTML =
      rows.length > 0
        ? `<table><tbody>${rows.join("")}</tbody></table>`
        : "<p class=\"empty\">no probed points</p>";
  }

  setBanner(message: string | null): void {
    this.els.banner.textContent = message ?? "";
    this.els.banner.style.display = message ? "block" : "none";
  }
}

function describeError(error: unknown): string {
  if (error instanceof ApiError) {
    const where = error.path ? ` at ${error.path}` : "";
    return `${error.code}${where}: ${error.message}`;
  }
  return String(error);
}

function buildLayout(root: HTMLElement) {
  root.innerHTML = `
    <div id="banner" class="banner" style="display:none"></div>
    <div class="columns">
      <aside>
        <div id="job-form"></div>
        <button id="recompute" type="button">Compute</button>
        <div class="probe-entry">
          <input id="probe-n" type="number" step="any" placeholder="speed [rpm]">
          <input id="probe-ap" type="number" step="any" placeholder="depth [mm]">
          <button id="probe-add" type="button">Probe point</button>
          <button id="probe-clear" type="button">Clear probes</button>
          <button id="axis-toggle" type="button">Toggle log speed axis</button>
          <div id="probe-message" class="inline-message"></div>
        </div>
        <div id="probe-list"></div>
      </aside>
      <main id="chart"></main>
    </div>`;
  return {
    banner: root.querySelector<HTMLElement>("#banner")!,
    form: root.querySelector<HTMLElement>("#job-form")!,
    chart: root.querySelector<HTMLElement>("#chart")!,
    probeList: root.querySelector<HTMLElement>("#probe-list")!,
    probeMessage: root.querySelector<HTMLElement>("#probe-message")!,
    probeN: root.querySelector<HTMLInputElement>("#probe-n")!,
    probeAp: root.querySelector<HTMLInputElement>("#probe-ap")!,
  };
}

/** Typed client for the stability service.
 *
 * Compute requests are single-flight: starting a new one aborts the previous,
 * so a stale response can never overwrite a newer edit. Classify calls may run
 * concurrently.
 */

import type { JobDoc, ResultDocument, ServiceError, VerdictDoc } from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly path?: string,
  ) {
    super(message);
  }
}

async function throwServiceError(response: Response): Promise<never> {
  let body: ServiceError | null = null;
  try {
    body = (await response.json()) as ServiceError;
  } catch {
    // non-JSON error body; fall through to a generic error
  }
  if (body && body.error) {
    throw new ApiError(response.status, body.error.code, body.error.message, body.error.path);
  }
  throw new ApiError(response.status, "http_error", `service returned ${response.status}`);
}

export class ApiClient {
  private computeController: AbortController | null = null;

  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch.bind(globalThis),
  ) {}

  /** POST /compute; a newer call aborts any in-flight one. */
  async compute(job: JobDoc): Promise<ResultDocument> {
    this.computeController?.abort();
    const controller = new AbortController();
    this.computeController = controller;
    const response = await this.fetchFn(`${this.baseUrl}/api/v1/compute`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(job),
      signal: controller.signal,
    });
    if (!response.ok) await throwServiceError(response);
    return (await response.json()) as ResultDocument;
  }

  /** POST /classify against a cached computation hash. */
  async classify(hash: string, n_rpm: number, ap_mm: number): Promise<VerdictDoc> {
    const response = await this.fetchFn(`${this.baseUrl}/api/v1/classify`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ hash, point: { n_rpm, ap_mm } }),
    });
    if (!response.ok) await throwServiceError(response);
    return (await response.json()) as VerdictDoc;
  }

  async catalog(): Promise<{ materials: Array<{ name: string; sources: string[] }> }> {
    const response = await this.fetchFn(`${this.baseUrl}/api/v1/catalog`, { method: "GET" });
    if (!response.ok) await throwServiceError(response);
    return (await response.json()) as { materials: Array<{ name: string; sources: string[] }> };
  }
}

import type {
  BatchResponse,
  CampaignSummary,
  Experiment,
  GpSlice,
  MeasurementSubmission,
  ParetoReport,
  ValidationRow,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(res: Response): Promise<ApiError> {
  let detail = res.statusText;
  try {
    const body = (await res.json()) as { detail?: string };
    if (body.detail) detail = body.detail;
  } catch {
    /* non-JSON error body */
  }
  return new ApiError(res.status, detail);
}

/** Thin typed client over the campaign API; base URL is the one setting. */
export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  private async getJson<T>(path: string): Promise<T> {
    const res = await fetch(this.baseUrl + path);
    if (!res.ok) throw await parseError(res);
    return (await res.json()) as T;
  }

  async campaign(): Promise<CampaignSummary> {
    return this.getJson("/campaign");
  }

  async experiments(status?: "pending" | "measured"): Promise<Experiment[]> {
    const q = status ? `?status=${status}` : "";
    const doc = await this.getJson<{ experiments: Experiment[] }>(`/experiments${q}`);
    return doc.experiments;
  }

  async recordMeasurement(id: number, body: MeasurementSubmission): Promise<Experiment> {
    const res = await fetch(`${this.baseUrl}/experiments/${id}/measurement`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!res.ok) throw await parseError(res);
    return (await res.json()) as Experiment;
  }

  async requestIteration(): Promise<BatchResponse> {
    const res = await fetch(`${this.baseUrl}/iterations`, { method: "POST" });
    if (!res.ok) throw await parseError(res);
    return (await res.json()) as BatchResponse;
  }

  async pareto(pop: number, gens: number): Promise<ParetoReport> {
    return this.getJson(`/pareto?pop=${pop}&gens=${gens}`);
  }

  async gpSlice(objective: string, dim: string, fixed: string): Promise<GpSlice> {
    const fixedPart = fixed ? `&fixed=${encodeURIComponent(fixed)}` : "";
    return this.getJson(`/gp/slice?objective=${objective}&dim=${dim}${fixedPart}`);
  }

  async validation(eps: string, tub: number): Promise<ValidationRow[]> {
    const doc = await this.getJson<{ rows: ValidationRow[] }>(
      `/validation?eps=${encodeURIComponent(eps)}&tub=${tub}`,
    );
    return doc.rows;
  }
}

import { vi } from "vitest";

import type { Experiment } from "../src/types.js";

export function pendingExperiment(id: number, over: Partial<Experiment> = {}): Experiment {
  return {
    id,
    iteration: 1,
    source: "suggestion",
    status: "pending",
    x: { f_i: 0.5, f_m: 8.0, c_ctab: 0.3, temp: 68.0 },
    ...over,
  };
}

export interface StubCall {
  url: string;
  method: string;
  body?: unknown;
}

/** In-memory stand-in for the campaign API behind global fetch. */
export function stubApi(experiments: Experiment[]) {
  const calls: StubCall[] = [];
  const fetchMock = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    calls.push({ url, method, body });

    const measure = url.match(/\/experiments\/(\d+)\/measurement$/);
    if (measure && method === "POST") {
      const id = Number(measure[1]);
      const exp = experiments.find((e) => e.id === id);
      if (!exp) {
        return jsonResponse(404, { detail: `no experiment with id ${id}` });
      }
      if (exp.status === "measured") {
        return jsonResponse(409, { detail: `experiment ${id} already has a measurement` });
      }
      const submitted = body as { wf: number; rh: number; exclude?: string };
      exp.status = "measured";
      exp.measurement = {
        w_nipam_f: submitted.wf,
        r_h: submitted.rh,
        excluded: submitted.exclude ?? "none",
      };
      if (!submitted.exclude) {
        exp.objectives = {
          neg_product_flow: -4.2,
          sq_radius_dev: 12.25,
          temp_dev: exp.x.temp - 60,
        };
      }
      return jsonResponse(200, exp);
    }
    if (url.endsWith("/experiments") || url.includes("/experiments?")) {
      const status = url.includes("status=pending")
        ? "pending"
        : url.includes("status=measured")
          ? "measured"
          : null;
      const out = status ? experiments.filter((e) => e.status === status) : experiments;
      return jsonResponse(200, { experiments: out });
    }
    return jsonResponse(404, { detail: `unstubbed route ${method} ${url}` });
  });
  vi.stubGlobal("fetch", fetchMock);
  return { calls, fetchMock, experiments };
}

export function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export function flushAsync(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

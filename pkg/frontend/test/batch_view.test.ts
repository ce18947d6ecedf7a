import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { renderBatchPanel, renderBatchTable } from "../src/views/batch.js";
import type { BatchResponse, CampaignSummary } from "../src/types.js";
import { flushAsync, jsonResponse, pendingExperiment } from "./helpers.js";

function summary(over: Partial<CampaignSummary> = {}): CampaignSummary {
  return {
    iterations_run: 2,
    max_iterations: 11,
    complete: false,
    n_experiments: 25,
    n_pending: 0,
    bounds: { lower: [0.1, 2, 0.14, 60], upper: [0.9, 18, 0.41, 80] },
    constants: { r_h_target: 100, t_min: 60 },
    hv_trajectory: [],
    ...over,
  };
}

function groupedBatch(): BatchResponse {
  const shared = { c_ctab: 0.31, temp: 66.4 };
  return {
    iteration: 3,
    padded: false,
    batch: [1, 2, 3, 4, 5].map((i) =>
      pendingExperiment(20 + i, {
        x: { f_i: 0.1 * i, f_m: 3 + i, ...shared },
      }),
    ),
  };
}

describe("batch view", () => {
  let container: HTMLElement;

  beforeEach(() => {
    document.body.innerHTML = `<div id="batch"></div>`;
    container = document.getElementById("batch")!;
  });

  afterEach(() => {
    vi.unstubAllGlobals();
  });

  it("renders five rows sharing temperature and surfactant", () => {
    renderBatchTable(container, groupedBatch());
    const rows = [...container.querySelectorAll("tbody tr")];
    expect(rows).toHaveLength(5);
    const temps = new Set(rows.map((r) => r.children[4]!.textContent));
    const cs = new Set(rows.map((r) => r.children[3]!.textContent));
    expect(temps.size).toBe(1);
    expect(cs.size).toBe(1);
    expect(container.textContent).toContain("T = 66.40");
  });

  it("requests an iteration and renders the returned batch", async () => {
    const fetchMock = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
      expect(String(input)).toBe("/iterations");
      expect(init?.method).toBe("POST");
      return jsonResponse(200, groupedBatch());
    });
    vi.stubGlobal("fetch", fetchMock);
    renderBatchPanel(container, summary(), new ApiClient(""), () => undefined);
    container.querySelector<HTMLButtonElement>("#next-batch")!.click();
    await flushAsync();
    expect(fetchMock).toHaveBeenCalledTimes(1);
    expect(container.querySelectorAll("#batch-table tbody tr")).toHaveLength(5);
  });

  it("disables the control when the campaign is complete", () => {
    renderBatchPanel(
      container,
      summary({ complete: true, iterations_run: 11 }),
      new ApiClient(""),
      () => undefined,
    );
    const button = container.querySelector<HTMLButtonElement>("#next-batch")!;
    expect(button.disabled).toBe(true);
    expect(container.textContent).toContain("campaign complete");
  });

  it("shows guidance on insufficient data", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => jsonResponse(422, { detail: "need at least 2 non-excluded measurements" })),
    );
    renderBatchPanel(container, summary(), new ApiClient(""), () => undefined);
    container.querySelector<HTMLButtonElement>("#next-batch")!.click();
    await flushAsync();
    expect(container.querySelector("#batch-error")!.textContent).toContain("pending initial");
  });

  it("offers retry on network failure without duplicating the POST", async () => {
    let failures = 0;
    const fetchMock = vi.fn(async () => {
      failures += 1;
      if (failures === 1) throw new TypeError("network down");
      return jsonResponse(200, groupedBatch());
    });
    vi.stubGlobal("fetch", fetchMock);
    renderBatchPanel(container, summary(), new ApiClient(""), () => undefined);
    const button = container.querySelector<HTMLButtonElement>("#next-batch")!;
    button.click();
    await flushAsync();
    expect(container.querySelector("#batch-error")!.textContent).toContain("retry");
    button.click();
    await flushAsync();
    expect(fetchMock).toHaveBeenCalledTimes(2);
    expect(container.querySelectorAll("#batch-table tbody tr")).toHaveLength(5);
  });
});

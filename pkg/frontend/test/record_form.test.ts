import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { renderLog, renderRecordForm } from "../src/views/experiments.js";
import { flushAsync, pendingExperiment, stubApi } from "./helpers.js";

describe("record form", () => {
  let container: HTMLElement;
  let logBox: HTMLElement;

  beforeEach(() => {
    document.body.innerHTML = `<div id="record"></div><div id="log"></div>`;
    container = document.getElementById("record")!;
    logBox = document.getElementById("log")!;
  });

  afterEach(() => {
    vi.unstubAllGlobals();
  });

  function fillAndSubmit(wf: string, rh: string, exclude = "") {
    (container.querySelector('input[name="wf"]') as HTMLInputElement).value = wf;
    (container.querySelector('input[name="rh"]') as HTMLInputElement).value = rh;
    (container.querySelector('select[name="exclude"]') as HTMLSelectElement).value = exclude;
    container
      .querySelector("form")!
      .dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
  }

  it("moves an experiment from pending to recorded", async () => {
    const stub = stubApi([pendingExperiment(7), pendingExperiment(8)]);
    const api = new ApiClient("");
    let refreshed = 0;
    renderRecordForm(container, stub.experiments, api, {
      onRecorded: () => {
        refreshed += 1;
        renderLog(logBox, stub.experiments);
      },
    });
    expect(container.querySelectorAll('select[name="id"] option')).toHaveLength(2);

    fillAndSubmit("0.0041", "103.5");
    await flushAsync();

    expect(refreshed).toBe(1);
    const post = stub.calls.find((c) => c.method === "POST");
    expect(post?.url).toBe("/experiments/7/measurement");
    expect(post?.body).toMatchObject({ wf: 0.0041, rh: 103.5 });
    expect(stub.experiments[0]!.status).toBe("measured");
    // the log view shows the recorded objectives straight from the API
    const row = logBox.querySelector('tr[data-id="7"]')!;
    expect(row.className).toContain("measured");
    expect(row.textContent).toContain("12.25");
  });

  it("renders an exclusion badge and no objective values", async () => {
    const stub = stubApi([pendingExperiment(3)]);
    renderRecordForm(container, stub.experiments, new ApiClient(""), {
      onRecorded: () => renderLog(logBox, stub.experiments),
    });
    fillAndSubmit("", "", "high polydispersity");
    await flushAsync();

    const row = logBox.querySelector('tr[data-id="3"]')!;
    expect(row.querySelector(".badge.excluded")?.textContent).toContain("high polydispersity");
    expect(row.textContent).not.toContain("12.25");
  });

  it("surfaces a conflict inline and keeps the form input", async () => {
    const exp = pendingExperiment(5);
    const stub = stubApi([exp]);
    renderRecordForm(container, [exp], new ApiClient(""), { onRecorded: () => undefined });

    fillAndSubmit("0.004", "101");
    await flushAsync();
    // second submission against the now-measured experiment: 409 inline
    fillAndSubmit("0.005", "102");
    await flushAsync();

    const error = container.querySelector("#record-error")!;
    expect(error.textContent).toContain("409");
    expect((container.querySelector('input[name="wf"]') as HTMLInputElement).value).toBe("0.005");
    expect(stub.experiments[0]!.measurement?.w_nipam_f).toBe(0.004);
  });

  it("validates numeric input before posting", async () => {
    const stub = stubApi([pendingExperiment(1)]);
    renderRecordForm(container, stub.experiments, new ApiClient(""), {
      onRecorded: () => undefined,
    });
    fillAndSubmit("", "");
    await flushAsync();
    expect(stub.calls.filter((c) => c.method === "POST")).toHaveLength(0);
    expect(container.querySelector("#record-error")!.textContent).not.toBe("");
  });
});

import { ApiClient } from "./api.js";
import { renderBatchPanel, renderBatchTable } from "./views/batch.js";
import { renderLog, renderRecordForm } from "./views/experiments.js";
import { renderGpSlice } from "./views/gpslice.js";
import { renderPareto } from "./views/pareto.js";
import { renderValidation } from "./views/validation.js";

const POLL_MS = 15000;

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing container #${id}`);
  return node;
}

export async function refresh(api: ApiClient): Promise<void> {
  const campaign = await api.campaign();
  const experiments = await api.experiments();
  const pending = experiments.filter((e) => e.status === "pending");

  byId("summary").textContent =
    `${campaign.n_experiments} experiments, ${pending.length} pending, ` +
    `iteration ${campaign.iterations_run}/${campaign.max_iterations}`;
  renderLog(byId("log"), experiments);
  renderRecordForm(byId("record"), pending, api, {
    onRecorded: () => void refresh(api),
  });
  renderBatchPanel(byId("batch"), campaign, api, (batch) =>
    renderBatchTable(document.getElementById("batch-table"), batch),
  );
}

async function refreshPareto(api: ApiClient): Promise<void> {
  const popInput = document.getElementById("pareto-pop") as HTMLInputElement | null;
  const gensInput = document.getElementById("pareto-gens") as HTMLInputElement | null;
  const pop = popInput ? Number(popInput.value) || 500 : 500;
  const gens = gensInput ? Number(gensInput.value) || 200 : 200;
  const target = byId("pareto");
  target.innerHTML = `<p class="muted">sampling the front&hellip;</p>`;
  try {
    renderPareto(target, await api.pareto(pop, gens));
  } catch (err) {
    target.innerHTML = `<p class="error">${String(err)}</p>`;
  }
}

async function refreshSlice(api: ApiClient): Promise<void> {
  const objective =
    (document.getElementById("slice-objective") as HTMLSelectElement | null)?.value ?? "flow";
  const dim = (document.getElementById("slice-dim") as HTMLSelectElement | null)?.value ?? "temp";
  const fixed = (document.getElementById("slice-fixed") as HTMLInputElement | null)?.value ?? "";
  const target = byId("gp-slice");
  try {
    renderGpSlice(target, await api.gpSlice(objective, dim, fixed));
  } catch (err) {
    target.innerHTML = `<p class="error">${String(err)}</p>`;
  }
}

async function refreshValidation(api: ApiClient): Promise<void> {
  const eps = (document.getElementById("val-eps") as HTMLInputElement | null)?.value ?? "2,5,10,25";
  const tub = Number((document.getElementById("val-tub") as HTMLInputElement | null)?.value) || 80;
  const target = byId("validation");
  target.innerHTML = `<p class="muted">solving&hellip;</p>`;
  try {
    renderValidation(target, await api.validation(eps, tub));
  } catch (err) {
    target.innerHTML = `<p class="error">${String(err)}</p>`;
  }
}

export function start(): void {
  const base = new URLSearchParams(window.location.search).get("api") ?? "";
  const api = new ApiClient(base);
  void refresh(api);
  window.setInterval(() => void refresh(api), POLL_MS);
  document.getElementById("pareto-go")?.addEventListener("click", () => void refreshPareto(api));
  document.getElementById("slice-go")?.addEventListener("click", () => void refreshSlice(api));
  document.getElementById("val-go")?.addEventListener("click", () => void refreshValidation(api));
}

if (typeof document !== "undefined" && document.getElementById("summary")) {
  start();
}

import { ApiClient, ApiError } from "../api.js";
import type { BatchResponse, CampaignSummary } from "../types.js";

/** Suggested-batch panel: one button per iteration, rows visually grouped
 * by their shared (T, c_CTAB) setting. */
export function renderBatchPanel(
  container: HTMLElement,
  campaign: CampaignSummary,
  api: ApiClient,
  onBatch: (batch: BatchResponse) => void,
): void {
  const exhausted = campaign.complete;
  container.innerHTML = `
    <div>
      <button id="next-batch" ${exhausted ? "disabled" : ""}>Request next batch</button>
      <span class="muted">iteration ${campaign.iterations_run} of ${campaign.max_iterations}</span>
      ${exhausted ? `<span class="muted">&mdash; campaign complete, budget used</span>` : ""}
      <span id="batch-error" class="error" role="alert"></span>
    </div>
    <div id="batch-table"></div>`;

  const button = container.querySelector<HTMLButtonElement>("#next-batch");
  if (!button || exhausted) return;
  let inFlight = false; // one POST at a time; retry never duplicates
  button.addEventListener("click", () => {
    if (inFlight) return;
    inFlight = true;
    button.disabled = true;
    const errorBox = container.querySelector<HTMLElement>("#batch-error");
    api
      .requestIteration()
      .then((batch) => {
        if (errorBox) errorBox.textContent = "";
        renderBatchTable(container.querySelector<HTMLElement>("#batch-table"), batch);
        onBatch(batch);
      })
      .catch((err: unknown) => {
        if (errorBox) {
          if (err instanceof ApiError && err.status === 422) {
            errorBox.textContent = `${err.message} - record the pending initial experiments first`;
          } else if (err instanceof ApiError) {
            errorBox.textContent = `${err.status}: ${err.message}`;
          } else {
            errorBox.textContent = `network failure (${String(err)}); retry when ready`;
          }
        }
      })
      .finally(() => {
        inFlight = false;
        button.disabled = false;
      });
  });
}

export function renderBatchTable(container: HTMLElement | null, batch: BatchResponse): void {
  if (!container) return;
  const first = batch.batch[0];
  if (!first) {
    container.innerHTML = `<p class="muted">empty batch</p>`;
    return;
  }
  const rows = batch.batch
    .map(
      (e) =>
        `<tr class="group-row" data-id="${e.id}">` +
        `<td>${e.id}</td><td>${e.x.f_i.toFixed(2)}</td><td>${e.x.f_m.toFixed(2)}</td>` +
        `<td class="grouped">${e.x.c_ctab.toFixed(3)}</td>` +
        `<td class="grouped">${e.x.temp.toFixed(2)}</td></tr>`,
    )
    .join("");
  container.innerHTML = `
    <p>iteration ${batch.iteration}: five runs at one setting &mdash;
       <strong>T = ${first.x.temp.toFixed(2)} &deg;C</strong>,
       <strong>c_CTAB = ${first.x.c_ctab.toFixed(3)} mmol/L</strong>
       ${batch.padded ? `<span class="badge">padded</span>` : ""}</p>
    <table class="batch">
      <thead><tr><th>id</th><th>F_I mL/min</th><th>F_M mL/min</th>
        <th>c_CTAB mmol/L</th><th>T &deg;C</th></tr></thead>
      <tbody>${rows}</tbody>
    </table>`;
}

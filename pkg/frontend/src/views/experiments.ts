import { ApiClient, ApiError } from "../api.js";
import type { Experiment } from "../types.js";

function settingCells(e: Experiment): string {
  return (
    `<td>${e.x.f_i.toFixed(2)}</td><td>${e.x.f_m.toFixed(2)}</td>` +
    `<td>${e.x.c_ctab.toFixed(3)}</td><td>${e.x.temp.toFixed(2)}</td>`
  );
}

function outcomeCells(e: Experiment): string {
  if (e.status === "pending") return `<td colspan="3" class="muted">pending</td>`;
  const m = e.measurement;
  if (m && m.excluded !== "none") {
    // excluded rows carry a badge and no objective values
    return `<td colspan="3"><span class="badge excluded">excluded: ${m.excluded}</span></td>`;
  }
  const y = e.objectives;
  if (!y) return `<td colspan="3"></td>`;
  return (
    `<td>${(-y.neg_product_flow).toFixed(2)}</td>` +
    `<td>${y.sq_radius_dev.toFixed(2)}</td><td>${y.temp_dev.toFixed(1)}</td>`
  );
}

export function renderLog(container: HTMLElement, experiments: Experiment[]): void {
  const rows = experiments
    .map(
      (e) =>
        `<tr data-id="${e.id}" class="${e.status}">` +
        `<td>${e.id}</td><td>${e.iteration}</td>${settingCells(e)}${outcomeCells(e)}</tr>`,
    )
    .join("");
  container.innerHTML = `
    <table class="log">
      <thead><tr>
        <th>id</th><th>iter</th>
        <th>F_I<br>mL/min</th><th>F_M<br>mL/min</th><th>c_CTAB<br>mmol/L</th><th>T<br>&deg;C</th>
        <th>F_product<br>mL/min</th><th>&Delta;r&sup2;<br>nm&sup2;</th><th>&Delta;T<br>K</th>
      </tr></thead>
      <tbody>${rows}</tbody>
    </table>`;
}

export interface RecordFormHooks {
  onRecorded: () => void;
}

/** Measurement entry form. Keeps user input on API errors, guards against
 * double submission while a POST is in flight. */
export function renderRecordForm(
  container: HTMLElement,
  pending: Experiment[],
  api: ApiClient,
  hooks: RecordFormHooks,
): void {
  if (pending.length === 0) {
    container.innerHTML = `<p class="muted">No pending experiments. Request the next batch below.</p>`;
    return;
  }
  const options = pending
    .map(
      (e) =>
        `<option value="${e.id}">#${e.id} &mdash; F_I ${e.x.f_i.toFixed(2)}, ` +
        `F_M ${e.x.f_m.toFixed(2)}, c ${e.x.c_ctab.toFixed(3)}, T ${e.x.temp.toFixed(1)}</option>`,
    )
    .join("");
  container.innerHTML = `
    <form id="record-form">
      <label>Experiment
        <select name="id">${options}</select>
      </label>
      <label>w_NIPAM,f (wt fraction)
        <input name="wf" type="number" step="any" placeholder="0.0041">
      </label>
      <label>r_H (nm)
        <input name="rh" type="number" step="any" placeholder="103.5">
      </label>
      <label>&sigma;(w) <input name="sigma_w" type="number" step="any"></label>
      <label>&sigma;(r) nm <input name="sigma_r" type="number" step="any"></label>
      <label>Exclude
        <select name="exclude">
          <option value="">no</option>
          <option value="high polydispersity">high polydispersity</option>
          <option value="high relative error">high relative error</option>
        </select>
      </label>
      <button type="submit">Record</button>
      <span id="record-error" class="error" role="alert"></span>
    </form>`;

  const form = container.querySelector<HTMLFormElement>("#record-form");
  if (!form) return;
  let inFlight = false;
  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    if (inFlight) return;
    const data = new FormData(form);
    const errorBox = container.querySelector<HTMLElement>("#record-error");
    const exclude = String(data.get("exclude") ?? "");
    const wfRaw = String(data.get("wf") ?? "");
    const rhRaw = String(data.get("rh") ?? "");
    if (!exclude && (wfRaw === "" || rhRaw === "")) {
      if (errorBox) errorBox.textContent = "enter both measured values or mark excluded";
      return;
    }
    const body = {
      wf: wfRaw === "" ? 0 : Number(wfRaw),
      rh: rhRaw === "" ? 1 : Number(rhRaw),
      ...(exclude ? { exclude } : {}),
      ...(data.get("sigma_w") ? { sigma_w: Number(data.get("sigma_w")) } : {}),
      ...(data.get("sigma_r") ? { sigma_r: Number(data.get("sigma_r")) } : {}),
    };
    if (!exclude && (Number.isNaN(body.wf) || Number.isNaN(body.rh))) {
      if (errorBox) errorBox.textContent = "measured values must be numeric";
      return;
    }
    inFlight = true;
    api
      .recordMeasurement(Number(data.get("id")), body)
      .then(() => {
        if (errorBox) errorBox.textContent = "";
        form.reset();
        hooks.onRecorded();
      })
      .catch((err: unknown) => {
        // surface 409/422 inline without losing the form input
        if (errorBox)
          errorBox.textContent =
            err instanceof ApiError ? `${err.status}: ${err.message}` : String(err);
      })
      .finally(() => {
        inFlight = false;
      });
  });
}

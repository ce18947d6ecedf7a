import type { ValidationRow } from "../types.js";

/** Epsilon-constraint sweep table; infeasible rows keep their tag. */
export function renderValidation(container: HTMLElement, rows: ValidationRow[]): void {
  if (rows.length === 0) {
    container.innerHTML = `<p class="muted">no sweep rows</p>`;
    return;
  }
  const body = rows
    .map((r) => {
      if (!r.feasible || !r.x || r.objective === null) {
        return `<tr class="infeasible"><td>${r.eps}</td><td>${r.temp_upper}</td>
          <td colspan="5">infeasible</td></tr>`;
      }
      return (
        `<tr><td>${r.eps}</td><td>${r.temp_upper}</td>` +
        `<td>${(-r.objective).toFixed(2)}</td><td>${r.x.f_i.toFixed(2)}</td>` +
        `<td>${r.x.f_m.toFixed(2)}</td><td>${r.x.c_ctab.toFixed(3)}</td>` +
        `<td>${r.x.temp.toFixed(2)}</td></tr>`
      );
    })
    .join("");
  container.innerHTML = `
    <table class="validation">
      <thead><tr>
        <th>&epsilon; nm&sup2;</th><th>T max &deg;C</th><th>F_product mL/min</th>
        <th>F_I</th><th>F_M</th><th>c_CTAB</th><th>T &deg;C</th>
      </tr></thead>
      <tbody>${body}</tbody>
    </table>`;
}

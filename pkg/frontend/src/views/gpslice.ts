import type { GpSlice } from "../types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 560;
const HEIGHT = 300;
const M = { left: 56, right: 14, top: 12, bottom: 40 };

/** Mean line with a +/-2 sd variance band along one input dimension. */
export function renderGpSlice(container: HTMLElement, slice: GpSlice): void {
  container.innerHTML = "";
  const n = slice.x.length;
  if (n === 0) {
    container.innerHTML = `<p class="muted">empty slice</p>`;
    return;
  }
  const sds = slice.variance.map((v) => Math.sqrt(Math.max(v, 0)));
  const lows = slice.mean.map((m, i) => m - 2 * (sds[i] ?? 0));
  const highs = slice.mean.map((m, i) => m + 2 * (sds[i] ?? 0));
  const x0 = slice.x[0] ?? 0;
  const x1 = slice.x[n - 1] ?? 1;
  const yMin = Math.min(...lows);
  const yMax = Math.max(...highs);
  const sx = (v: number) => M.left + ((v - x0) / (x1 - x0 || 1)) * (WIDTH - M.left - M.right);
  const sy = (v: number) =>
    HEIGHT - M.bottom - ((v - yMin) / (yMax - yMin || 1)) * (HEIGHT - M.top - M.bottom);

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("width", String(WIDTH));
  svg.setAttribute("height", String(HEIGHT));
  svg.setAttribute("data-testid", "gp-slice");

  const bandPoints = slice.x
    .map((v, i) => `${sx(v)},${sy(highs[i] ?? 0)}`)
    .concat(
      slice.x
        .slice()
        .reverse()
        .map((v, i) => `${sx(v)},${sy(lows[n - 1 - i] ?? 0)}`),
    )
    .join(" ");
  const band = document.createElementNS(SVG_NS, "polygon");
  band.setAttribute("points", bandPoints);
  band.setAttribute("fill", "#cfe0f0");
  band.setAttribute("class", "variance-band");
  svg.appendChild(band);

  const line = document.createElementNS(SVG_NS, "polyline");
  line.setAttribute(
    "points",
    slice.x.map((v, i) => `${sx(v)},${sy(slice.mean[i] ?? 0)}`).join(" "),
  );
  line.setAttribute("fill", "none");
  line.setAttribute("stroke", "#1a4d8f");
  line.setAttribute("stroke-width", "2");
  line.setAttribute("class", "mean-line");
  svg.appendChild(line);

  const label = document.createElementNS(SVG_NS, "text");
  label.setAttribute("x", String(WIDTH / 2));
  label.setAttribute("y", String(HEIGHT - 8));
  label.setAttribute("text-anchor", "middle");
  label.textContent = slice.dim;
  svg.appendChild(label);

  container.appendChild(svg);
  const fixed = Object.entries(slice.fixed)
    .map(([k, v]) => `${k} = ${v}`)
    .join(", ");
  const caption = document.createElement("p");
  caption.className = "muted";
  caption.textContent = `${slice.objective} surrogate along ${slice.dim} (others fixed: ${fixed})`;
  container.appendChild(caption);
}

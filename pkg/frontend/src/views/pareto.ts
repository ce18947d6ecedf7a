import type { ParetoReport } from "../types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 640;
const HEIGHT = 420;
const MARGIN = { left: 60, right: 20, top: 16, bottom: 44 };

/** nm^2 ceiling of the shaded target band (+/-5 nm around the target). */
export const BAND_EDGE = 25;

interface Scale {
  (v: number): number;
}

function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (v: number) => r0 + ((v - d0) / span) * (r1 - r0);
}

function el(name: string, attrs: Record<string, string | number>): SVGElement {
  const node = document.createElementNS(SVG_NS, name);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, String(v));
  return node;
}

function tempColor(dT: number, maxDT: number): string {
  // dark blue (cold) to yellow (hot); display only
  const t = maxDT > 0 ? Math.max(0, Math.min(1, dT / maxDT)) : 0;
  const hue = 240 - 180 * t;
  return `hsl(${hue.toFixed(0)}, 70%, ${Math.round(35 + 25 * t)}%)`;
}

/** Scatter of the sampled front plus experimental points: squared radius
 * deviation over product flow, colored by temperature excess, with the
 * target band shaded up to BAND_EDGE nm^2 and 1-sigma error bars. All
 * numbers come straight from the report; only axis scaling happens here. */
export function renderPareto(container: HTMLElement, report: ParetoReport): void {
  container.innerHTML = "";
  const front = report.front.objectives;
  const expts = report.experiments;
  if (front.length === 0 && expts.length === 0) {
    container.innerHTML = `<p class="muted">nothing to plot yet</p>`;
    return;
  }

  const flows: number[] = [];
  const devs: number[] = [];
  const temps: number[] = [];
  for (const y of front) {
    flows.push(-(y[0] ?? 0));
    devs.push(y[1] ?? 0);
    temps.push(y[2] ?? 0);
  }
  for (const e of expts) {
    flows.push(-e.objectives.neg_product_flow);
    devs.push(e.objectives.sq_radius_dev);
    temps.push(e.objectives.temp_dev);
  }

  const xMax = Math.max(...flows) * 1.05 + 1e-9;
  const xMin = Math.min(0, Math.min(...flows));
  const yMax = Math.max(BAND_EDGE, Math.max(...devs)) * 1.05;
  const x = linearScale(xMin, xMax, MARGIN.left, WIDTH - MARGIN.right);
  const y = linearScale(0, yMax, HEIGHT - MARGIN.bottom, MARGIN.top);
  const maxDT = Math.max(...temps, 1e-9);

  const svg = el("svg", { width: WIDTH, height: HEIGHT, viewBox: `0 0 ${WIDTH} ${HEIGHT}` });
  svg.setAttribute("data-testid", "pareto-plot");

  // target band: dr2 from 0 up to BAND_EDGE
  const band = el("rect", {
    "data-testid": "target-band",
    x: x(xMin),
    y: y(BAND_EDGE),
    width: x(xMax) - x(xMin),
    height: y(0) - y(BAND_EDGE),
    fill: "#dcdcdc",
  });
  band.setAttribute("data-edge-nm2", String(BAND_EDGE));
  svg.appendChild(band);

  // axes
  svg.appendChild(
    el("line", { x1: x(xMin), y1: y(0), x2: x(xMax), y2: y(0), stroke: "#333" }),
  );
  svg.appendChild(
    el("line", { x1: x(xMin), y1: y(0), x2: x(xMin), y2: y(yMax), stroke: "#333" }),
  );
  const xLabel = el("text", { x: (x(xMin) + x(xMax)) / 2, y: HEIGHT - 8, "text-anchor": "middle" });
  xLabel.textContent = "product flow (mL/min)";
  svg.appendChild(xLabel);
  const yLabel = el("text", {
    x: 14,
    y: (y(0) + y(yMax)) / 2,
    "text-anchor": "middle",
    transform: `rotate(-90 14 ${(y(0) + y(yMax)) / 2})`,
  });
  yLabel.textContent = "squared radius deviation (nm²)";
  svg.appendChild(yLabel);

  // sampled front
  report.front.objectives.forEach((obj, i) => {
    const sig = report.front.sigma[i] ?? [0, 0, 0];
    const fx = x(-(obj[0] ?? 0));
    const fy = y(Math.max(obj[1] ?? 0, 0));
    const sigY = sig[1] ?? 0;
    if (sigY > 0) {
      svg.appendChild(
        el("line", {
          x1: fx,
          y1: y(Math.max((obj[1] ?? 0) - sigY, 0)),
          x2: fx,
          y2: y(Math.max(obj[1] ?? 0, 0) + sigY > yMax ? yMax : (obj[1] ?? 0) + sigY),
          stroke: "#bbb",
          class: "front-sigma",
        }),
      );
    }
    const dot = el("circle", {
      cx: fx,
      cy: fy,
      r: 2.5,
      fill: tempColor(obj[2] ?? 0, maxDT),
      class: "front-point",
    });
    svg.appendChild(dot);
  });

  // experimental points with error bars
  for (const e of expts) {
    const ex = x(-e.objectives.neg_product_flow);
    const ey = y(e.objectives.sq_radius_dev);
    const sigFlow = e.sigma[0] ?? 0;
    const sigDev = e.sigma[1] ?? 0;
    if (sigFlow > 0) {
      svg.appendChild(
        el("line", {
          x1: x(-e.objectives.neg_product_flow - sigFlow),
          y1: ey,
          x2: x(-e.objectives.neg_product_flow + sigFlow),
          y2: ey,
          stroke: "#444",
          class: "expt-sigma",
        }),
      );
    }
    if (sigDev > 0) {
      svg.appendChild(
        el("line", {
          x1: ex,
          y1: y(Math.max(e.objectives.sq_radius_dev - sigDev, 0)),
          x2: ex,
          y2: y(e.objectives.sq_radius_dev + sigDev),
          stroke: "#444",
          class: "expt-sigma",
        }),
      );
    }
    const cross = el("path", {
      d: `M ${ex - 4} ${ey - 4} L ${ex + 4} ${ey + 4} M ${ex - 4} ${ey + 4} L ${ex + 4} ${ey - 4}`,
      stroke: "#111",
      "stroke-width": 1.5,
      fill: "none",
      class: "expt-point",
    });
    cross.setAttribute("data-id", String(e.id));
    svg.appendChild(cross);
  }

  container.appendChild(svg);
  const caption = document.createElement("p");
  caption.className = "muted";
  caption.textContent =
    `front of ${front.length} points (population ${report.population}, ` +
    `${report.generations} generations, seed ${report.seed}); shaded band: ±5 nm`;
  container.appendChild(caption);
}

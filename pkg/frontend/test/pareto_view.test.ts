import { beforeEach, describe, expect, it } from "vitest";

import { BAND_EDGE, renderPareto } from "../src/views/pareto.js";
import type { ParetoReport } from "../src/types.js";

function report(front: number[][], sigma?: number[][]): ParetoReport {
  return {
    seed: 1,
    population: 100,
    generations: 50,
    front: {
      decisions: front.map(() => [0.5, 8, 0.3, 65]),
      objectives: front,
      sigma: sigma ?? front.map(() => [0, 0, 0]),
      reference: [0, 1000, 25],
    },
    experiments: [
      {
        id: 1,
        iteration: 0,
        x: { f_i: 0.5, f_m: 8, c_ctab: 0.3, temp: 65 },
        objectives: { neg_product_flow: -4.0, sq_radius_dev: 50, temp_dev: 5 },
        sigma: [0.2, 10, 0],
      },
    ],
  };
}

describe("pareto view", () => {
  let container: HTMLElement;

  beforeEach(() => {
    document.body.innerHTML = `<div id="pareto"></div>`;
    container = document.getElementById("pareto")!;
  });

  it("draws the target band with its upper edge at 25 nm^2", () => {
    renderPareto(container, report([[-6.0, 25.0, 8.0], [-3.0, 400.0, 1.0]]));
    const band = container.querySelector('[data-testid="target-band"]')!;
    expect(band.getAttribute("data-edge-nm2")).toBe(String(BAND_EDGE));
    // geometric check: a front point at exactly 25 nm^2 sits on the band edge
    const points = [...container.querySelectorAll("circle.front-point")];
    const atEdge = points[0]!;
    expect(Number(atEdge.getAttribute("cy"))).toBeCloseTo(Number(band.getAttribute("y")), 6);
    // and the band reaches down to the zero line
    const y0 = Number(band.getAttribute("y")) + Number(band.getAttribute("height"));
    const svgHeight = 420 - 44; // bottom margin
    expect(y0).toBeCloseTo(svgHeight, 6);
  });

  it("renders a single-point front with auto-scaled axes", () => {
    renderPareto(container, report([[-5.0, 9.0, 2.0]]));
    expect(container.querySelectorAll("circle.front-point")).toHaveLength(1);
    expect(container.querySelector('[data-testid="pareto-plot"]')).not.toBeNull();
  });

  it("draws error bars from the sigma columns", () => {
    renderPareto(container, report([[-6.0, 30.0, 8.0]], [[0.5, 12.0, 0]]));
    expect(container.querySelectorAll("line.front-sigma").length).toBe(1);
    expect(container.querySelectorAll("line.expt-sigma").length).toBe(2);
  });

  it("shows an empty state for an empty payload", () => {
    renderPareto(container, {
      seed: 0,
      population: 0,
      generations: 0,
      front: { decisions: [], objectives: [], sigma: [], reference: [0, 0, 0] },
      experiments: [],
    });
    expect(container.textContent).toContain("nothing to plot");
  });
});

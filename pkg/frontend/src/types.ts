/** Payload shapes of the campaign HTTP API. The dashboard renders these
 * verbatim; the only client-side arithmetic is axis scaling. */

export interface DesignValues {
  f_i: number;
  f_m: number;
  c_ctab: number;
  temp: number;
}

export interface ObjectiveValues {
  neg_product_flow: number;
  sq_radius_dev: number;
  temp_dev: number;
}

export interface MeasurementValues {
  w_nipam_f: number;
  r_h: number;
  excluded: string;
}

export interface Experiment {
  id: number;
  iteration: number;
  source: string;
  status: "pending" | "measured";
  x: DesignValues;
  measurement?: MeasurementValues;
  objectives?: ObjectiveValues;
}

export interface CampaignSummary {
  iterations_run: number;
  max_iterations: number;
  complete: boolean;
  n_experiments: number;
  n_pending: number;
  bounds: { lower: number[]; upper: number[] };
  constants: { r_h_target: number; t_min: number };
  hv_trajectory: number[];
}

export interface ParetoReport {
  seed: number;
  population: number;
  generations: number;
  front: {
    decisions: number[][];
    objectives: number[][];
    sigma: number[][];
    reference: number[];
  };
  experiments: {
    id: number;
    iteration: number;
    x: DesignValues;
    objectives: ObjectiveValues;
    sigma: number[];
  }[];
}

export interface BatchResponse {
  iteration: number;
  padded: boolean;
  batch: Experiment[];
}

export interface GpSlice {
  objective: string;
  dim: string;
  x: number[];
  mean: number[];
  variance: number[];
  fixed: Record<string, number>;
}

export interface ValidationRow {
  eps: number;
  temp_upper: number;
  feasible: boolean;
  objective: number | null;
  x: DesignValues | null;
}

export interface MeasurementSubmission {
  wf: number;
  rh: number;
  exclude?: string;
  sigma_w?: number;
  sigma_r?: number;
}

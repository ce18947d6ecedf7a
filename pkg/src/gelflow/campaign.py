"""Campaign state, persistence and orchestration.

The campaign file is an append-only JSON-lines event log behind a
versioned header: recording a measurement or a new suggestion appends
events, never rewrites history, so an earlier file is always a byte
prefix of a later one. State is the fold of the events.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .doe import grouped_initial_design
from .errors import (
    CampaignCompleteError,
    ConflictError,
    InsufficientDataError,
    InvalidInputError,
)
from .gp import predict_batch
from .moo import hypervolume
from .process import (
    Bounds,
    Dataset,
    DatasetRow,
    DEFAULT_BOUNDS,
    DesignPoint,
    DIMENSION_NAMES,
    Measurement,
    ObjectiveVector,
    ProcessConstants,
    load_dataset,
    objectives_from_measurement,
    measurement_from_objectives,
    propagate_uncertainty,
    si_fixture_path,
)
from .tsemo import SuggestionRecord, TsemoConfig, sampled_pareto, suggest_batch, train_models
from .virtlab import VirtualLabConfig, simulate

_HEADER = {"format": "gelflow-campaign", "version": 1}


@dataclass(frozen=True)
class CampaignConfig:
    bounds: Bounds = DEFAULT_BOUNDS
    constants: ProcessConstants = field(default_factory=ProcessConstants)
    tsemo: TsemoConfig = field(default_factory=TsemoConfig)
    n_groups: int = 3
    per_group: int = 5
    max_iterations: int = 11
    design_seed: int = 0
    # trajectory reference: volume only counts within 25 nm of the target
    # radius, the region the campaign is trying to fill
    hv_reference: tuple[float, float, float] = (0.0, 625.0, 25.0)


@dataclass(frozen=True)
class Experiment:
    id: int
    iteration: int
    x: DesignPoint
    source: str  # "lhs" or "suggestion"
    measurement: Measurement | None = None
    objectives: ObjectiveVector | None = None

    @property
    def status(self) -> str:
        return "pending" if self.measurement is None else "measured"


@dataclass(frozen=True)
class CampaignState:
    config: CampaignConfig
    events: tuple[dict, ...]
    experiments: tuple[Experiment, ...]
    suggestions: tuple[SuggestionRecord, ...]
    hv_trajectory: tuple[float, ...] = ()

    @property
    def iterations_run(self) -> int:
        return len(self.suggestions)

    def experiment(self, experiment_id: int) -> Experiment:
        for e in self.experiments:
            if e.id == experiment_id:
                return e
        raise ConflictError(f"no experiment with id {experiment_id}")

    def pending(self) -> list[Experiment]:
        return [e for e in self.experiments if e.status == "pending"]

    def dataset(self) -> Dataset:
        rows = []
        for e in self.experiments:
            if e.measurement is None:
                continue
            if e.objectives is not None:
                y = e.objectives
            else:  # excluded rows stay in the log with placeholder objectives
                y = ObjectiveVector(0.0, 0.0, e.x.temp - self.config.constants.t_min)
            rows.append(DatasetRow(e.iteration, e.x, y, excluded=e.measurement.is_excluded))
        return Dataset(tuple(rows))


# --- event (de)serialization -------------------------------------------------

def _x_to_dict(x: DesignPoint) -> dict:
    return {k: getattr(x, k) for k in DIMENSION_NAMES}


def _x_from_dict(d: dict) -> DesignPoint:
    return DesignPoint(**{k: float(d[k]) for k in DIMENSION_NAMES})


def _config_to_dict(c: CampaignConfig) -> dict:
    return {
        "bounds": {"lower": list(c.bounds.lower), "upper": list(c.bounds.upper)},
        "constants": asdict(c.constants),
        "tsemo": {
            "spectral_points": c.tsemo.spectral_points,
            "ga_generations": c.tsemo.ga_generations,
            "ga_population": c.tsemo.ga_population,
            "batch_size": c.tsemo.batch_size,
            "group_dims": list(c.tsemo.group_dims),
            "hv_margin": c.tsemo.hv_margin,
            "seed": c.tsemo.seed,
            "redraw_per_point": c.tsemo.redraw_per_point,
            "fit": asdict(c.tsemo.fit),
        },
        "n_groups": c.n_groups,
        "per_group": c.per_group,
        "max_iterations": c.max_iterations,
        "design_seed": c.design_seed,
        "hv_reference": list(c.hv_reference),
    }


def _config_from_dict(d: dict) -> CampaignConfig:
    from .gp import FitConfig

    fit_d = dict(d["tsemo"]["fit"])
    for key in ("lengthscale_bounds", "signal_var_bounds", "noise_var_bounds"):
        fit_d[key] = tuple(fit_d[key])
    return CampaignConfig(
        bounds=Bounds(tuple(d["bounds"]["lower"]), tuple(d["bounds"]["upper"])),
        constants=ProcessConstants(**d["constants"]),
        tsemo=TsemoConfig(
            spectral_points=d["tsemo"]["spectral_points"],
            ga_generations=d["tsemo"]["ga_generations"],
            ga_population=d["tsemo"]["ga_population"],
            batch_size=d["tsemo"]["batch_size"],
            group_dims=tuple(d["tsemo"]["group_dims"]),
            hv_margin=d["tsemo"]["hv_margin"],
            seed=d["tsemo"]["seed"],
            redraw_per_point=d["tsemo"]["redraw_per_point"],
            fit=FitConfig(**fit_d),
        ),
        n_groups=d["n_groups"],
        per_group=d["per_group"],
        max_iterations=d["max_iterations"],
        design_seed=d["design_seed"],
        hv_reference=tuple(d["hv_reference"]),
    )


def _objectives_to_dict(y: ObjectiveVector) -> dict:
    return {
        "neg_product_flow": y.neg_product_flow,
        "sq_radius_dev": y.sq_radius_dev,
        "temp_dev": y.temp_dev,
        "sigma": list(y.sigma) if y.sigma is not None else None,
    }


def _objectives_from_dict(d: dict) -> ObjectiveVector:
    return ObjectiveVector(
        neg_product_flow=d["neg_product_flow"],
        sq_radius_dev=d["sq_radius_dev"],
        temp_dev=d["temp_dev"],
        sigma=tuple(d["sigma"]) if d.get("sigma") is not None else None,
    )


def _fold(events: list[dict]) -> CampaignState:
    # canonicalize through the JSON codec so in-memory events are always
    # byte-identical to their persisted form (tuples become lists, etc.)
    events = [json.loads(_dump_line(ev)) for ev in events]
    config: CampaignConfig | None = None
    experiments: dict[int, Experiment] = {}
    suggestions: list[SuggestionRecord] = []
    trajectory: list[float] = []
    for ev in events:
        kind = ev["type"]
        if kind == "init":
            config = _config_from_dict(ev["config"])
        elif kind == "experiment":
            experiments[ev["id"]] = Experiment(
                id=ev["id"],
                iteration=ev["iteration"],
                x=_x_from_dict(ev["x"]),
                source=ev["source"],
            )
        elif kind == "measurement":
            exp = experiments[ev["id"]]
            m = Measurement(
                w_nipam_f=ev["w_nipam_f"],
                r_h=ev["r_h"],
                excluded=ev["excluded"],
                sigma_w=ev.get("sigma_w"),
                sigma_r=ev.get("sigma_r"),
            )
            y = _objectives_from_dict(ev["objectives"]) if ev["objectives"] else None
            experiments[ev["id"]] = replace(exp, measurement=m, objectives=y)
        elif kind == "suggestion":
            suggestions.append(
                SuggestionRecord(
                    iteration=ev["iteration"],
                    batch=tuple(_x_from_dict(d) for d in ev["batch"]),
                    sample_seeds=tuple(ev["sample_seeds"]),
                    ga_seed=ev["ga_seed"],
                    predicted=tuple(_objectives_from_dict(d) for d in ev["predicted"]),
                    padded=ev["padded"],
                )
            )
        elif kind == "hypervolume":
            trajectory.append(ev["value"])
        else:
            raise InvalidInputError(f"unknown campaign event type {kind!r}")
    if config is None:
        raise InvalidInputError("campaign log has no init event")
    return CampaignState(
        config=config,
        events=tuple(events),
        experiments=tuple(sorted(experiments.values(), key=lambda e: e.id)),
        suggestions=tuple(suggestions),
        hv_trajectory=tuple(trajectory),
    )


def _append(state: CampaignState, new_events: list[dict]) -> CampaignState:
    return _fold(list(state.events) + new_events)


# --- operations ---------------------------------------------------------------

def init_campaign(config: CampaignConfig) -> CampaignState:
    """Fresh campaign with the grouped LHS experiments pending."""
    groups = grouped_initial_design(
        config.n_groups, config.per_group, config.bounds, config.design_seed
    )
    events: list[dict] = [{"type": "init", "config": _config_to_dict(config)}]
    next_id = 1
    for group in groups:
        for x in group.design_points():
            events.append(
                {
                    "type": "experiment",
                    "id": next_id,
                    "iteration": 0,
                    "source": "lhs",
                    "x": _x_to_dict(x),
                }
            )
            next_id += 1
    return _fold(events)


def record_measurement(
    state: CampaignState, experiment_id: int, m: Measurement
) -> CampaignState:
    """Attach a measurement to a pending experiment; computes objectives."""
    exp = state.experiment(experiment_id)
    if exp.status == "measured":
        raise ConflictError(f"experiment {experiment_id} already has a measurement")
    y = None
    if not m.is_excluded:
        y = objectives_from_measurement(exp.x, m, state.config.constants)
    event = {
        "type": "measurement",
        "id": experiment_id,
        "w_nipam_f": m.w_nipam_f,
        "r_h": m.r_h,
        "excluded": m.excluded,
        "sigma_w": m.sigma_w,
        "sigma_r": m.sigma_r,
        "objectives": _objectives_to_dict(y) if y is not None else None,
    }
    return _append(state, [event])


def iteration_seed(base_seed: int, iteration: int) -> int:
    return int(np.random.SeedSequence([base_seed, iteration]).generate_state(1)[0])


def next_iteration(state: CampaignState) -> CampaignState:
    """Run one TS-EMO suggestion step and append its batch as pending."""
    config = state.config
    if state.iterations_run >= config.max_iterations:
        raise CampaignCompleteError(
            f"campaign complete: {state.iterations_run} of "
            f"{config.max_iterations} iterations used"
        )
    ds = state.dataset()
    if len(ds.trainable()) < 2:
        raise InsufficientDataError("need at least 2 non-excluded measurements")
    iteration = state.iterations_run + 1
    tsemo_cfg = replace(config.tsemo, seed=iteration_seed(config.tsemo.seed, iteration))
    record = suggest_batch(
        ds, config.bounds, tsemo_cfg, config.constants, iteration=iteration
    )
    next_id = max((e.id for e in state.experiments), default=0) + 1
    events: list[dict] = [
        {
            "type": "suggestion",
            "iteration": iteration,
            "batch": [_x_to_dict(x) for x in record.batch],
            "sample_seeds": list(record.sample_seeds),
            "ga_seed": record.ga_seed,
            "predicted": [_objectives_to_dict(y) for y in record.predicted],
            "padded": record.padded,
        }
    ]
    for x in record.batch:
        events.append(
            {
                "type": "experiment",
                "id": next_id,
                "iteration": iteration,
                "source": "suggestion",
                "x": _x_to_dict(x),
            }
        )
        next_id += 1
    return _append(state, events)


def pareto_report(
    state: CampaignState,
    population: int = 5000,
    generations: int = 1000,
    seed: int | None = None,
) -> dict:
    """Sampled Pareto front with predictive and experimental uncertainties.

    Returns a JSON-ready document; regenerate with the recorded seed for
    an identical report.
    """
    config = state.config
    ds = state.dataset()
    if len(ds.trainable()) < 2:
        raise InsufficientDataError("need at least 2 non-excluded measurements")
    if seed is None:
        seed = iteration_seed(config.tsemo.seed, 990_000 + state.iterations_run)
    cfg = replace(config.tsemo, ga_population=population, ga_generations=generations)
    models = train_models(ds, config.bounds, cfg)
    front = sampled_pareto(models, config.bounds, cfg, seed, config.constants)
    _, var_flow = predict_batch(models[0], front.decisions, check_bounds=False)
    _, var_rad = predict_batch(models[1], front.decisions, check_bounds=False)
    sigma = np.column_stack([np.sqrt(var_flow), np.sqrt(var_rad), np.zeros(len(front))])

    experiments = []
    for e in state.experiments:
        if e.objectives is None or e.measurement is None:
            continue
        sig = propagate_uncertainty(e.x, e.measurement, config.constants) if (
            e.measurement.sigma_w is not None and e.measurement.sigma_r is not None
        ) else (0.0, 0.0, 0.0)
        experiments.append(
            {
                "id": e.id,
                "iteration": e.iteration,
                "x": _x_to_dict(e.x),
                "objectives": _objectives_to_dict(e.objectives),
                "sigma": list(sig),
            }
        )
    return {
        "seed": seed,
        "population": population,
        "generations": generations,
        "front": {
            "decisions": front.decisions.tolist(),
            "objectives": front.objectives.tolist(),
            "sigma": sigma.tolist(),
            "reference": front.reference.tolist(),
        },
        "experiments": experiments,
    }


def measured_hypervolume(state: CampaignState) -> float:
    """Hypervolume of the measured, non-excluded objectives w.r.t. the config reference."""
    ds = state.dataset().trainable()
    if len(ds) == 0:
        return 0.0
    return hypervolume(ds.objective_matrix(), np.array(state.config.hv_reference))


def _simulate_pending(state: CampaignState, vcfg: VirtualLabConfig) -> CampaignState:
    for exp in state.pending():
        m = simulate(exp.x, vcfg, state.config.constants, state.config.bounds)
        state = record_measurement(state, exp.id, m)
    return state


def run_closed_loop(
    config: CampaignConfig, vcfg: VirtualLabConfig, iterations: int
) -> CampaignState:
    """Init, simulate, then (suggest, simulate) loops; records HV per iteration."""
    if iterations < 0:
        raise InvalidInputError("iterations must be >= 0")
    state = init_campaign(config)
    state = _simulate_pending(state, vcfg)
    state = _append(
        state, [{"type": "hypervolume", "iteration": 0, "value": measured_hypervolume(state)}]
    )
    for _ in range(iterations):
        state = next_iteration(state)
        state = _simulate_pending(state, vcfg)
        state = _append(
            state,
            [
                {
                    "type": "hypervolume",
                    "iteration": state.iterations_run,
                    "value": measured_hypervolume(state),
                }
            ],
        )
    return state


def replay_fixture(
    config: CampaignConfig | None = None, fixture: str = "si_table_s1"
) -> CampaignState:
    """Campaign state reconstructed from a bundled experiment table.

    Measurements are back-solved from the stored objective columns; the
    Raman model error is attached as the weight-fraction uncertainty and
    the unavailable DLS standard deviation set to zero.
    """
    config = config or CampaignConfig()
    ds = load_dataset(si_fixture_path(fixture), config.bounds, config.constants)
    events: list[dict] = [{"type": "init", "config": _config_to_dict(config)}]
    state = _fold(events)
    for i, row in enumerate(ds.rows, start=1):
        state = _append(
            state,
            [
                {
                    "type": "experiment",
                    "id": i,
                    "iteration": row.iteration,
                    "source": "lhs" if row.iteration == 0 else "suggestion",
                    "x": _x_to_dict(row.x),
                }
            ],
        )
        m = measurement_from_objectives(row.x, row.y, config.constants)
        m = replace(m, sigma_w=config.constants.rmsecv, sigma_r=0.0)
        state = record_measurement(state, i, m)
    return state


# --- GP slices (SI-style views) ------------------------------------------------

def gp_slice(
    state: CampaignState,
    objective: str,
    dim: str,
    fixed: dict[str, float] | None = None,
    n: int = 101,
) -> dict:
    """Mean and variance of one surrogate along one input, others fixed.

    ``objective`` is "flow" or "radius"; unspecified fixed values default
    to the bound midpoints.
    """
    if objective not in ("flow", "radius"):
        raise InvalidInputError("objective must be 'flow' or 'radius'")
    if dim not in DIMENSION_NAMES:
        raise InvalidInputError(f"dim must be one of {DIMENSION_NAMES}")
    config = state.config
    ds = state.dataset()
    if len(ds.trainable()) < 2:
        raise InsufficientDataError("need at least 2 non-excluded measurements")
    models = train_models(ds, config.bounds, config.tsemo)
    model = models[0] if objective == "flow" else models[1]

    fixed = fixed or {}
    lo, hi = config.bounds.lower_array, config.bounds.upper_array
    base = (lo + hi) / 2.0
    for name, value in fixed.items():
        if name not in DIMENSION_NAMES:
            raise InvalidInputError(f"unknown dimension {name!r}")
        base[DIMENSION_NAMES.index(name)] = float(value)
    d = DIMENSION_NAMES.index(dim)
    xs = np.linspace(lo[d], hi[d], n)
    X = np.tile(base, (n, 1))
    X[:, d] = xs
    mean, var = predict_batch(model, X, check_bounds=False)
    return {
        "objective": objective,
        "dim": dim,
        "x": xs.tolist(),
        "mean": mean.tolist(),
        "variance": var.tolist(),
        "fixed": {name: float(base[k]) for k, name in enumerate(DIMENSION_NAMES) if k != d},
    }


# --- persistence ----------------------------------------------------------------

def _dump_line(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def save_campaign(state: CampaignState, path: str | Path, overwrite: bool = True) -> None:
    """Write the event log; earlier saves are byte prefixes of later ones."""
    path = Path(path)
    if path.exists() and not overwrite:
        raise ConflictError(f"campaign file {path} already exists (pass overwrite)")
    lines = [_dump_line(_HEADER)] + [_dump_line(ev) for ev in state.events]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_campaign(path: str | Path) -> CampaignState:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise InvalidInputError(f"campaign file {path} is empty")
    header = json.loads(lines[0])
    if header != _HEADER:
        raise InvalidInputError(f"unrecognized campaign header {header}")
    events = [json.loads(line) for line in lines[1:] if line.strip()]
    return _fold(events)

"""Multi-objective Bayesian optimization for continuous-flow microgel synthesis."""

from .process import (
    Bounds,
    Dataset,
    DatasetRow,
    DesignPoint,
    DEFAULT_BOUNDS,
    Measurement,
    ObjectiveVector,
    ProcessConstants,
    load_dataset,
    load_si_fixture,
    objectives_from_measurement,
)
from .doe import ExperimentGroup, grouped_initial_design, lhs
from .gp import FitConfig, GPModel, KernelParams, SampledFunction, fit, predict, spectral_sample
from .moo import (
    ParetoFront,
    crowding_distance,
    dominates,
    hypervolume,
    hypervolume_contributions,
    nondominated_sort,
    nsga2,
)
from .tsemo import SuggestionRecord, TsemoConfig, sampled_pareto, suggest_batch, train_models
from .epsopt import EpsConfig, EpsProblem, grid_oracle, solve_eps, sweep
from .virtlab import VirtualLabConfig, simulate
from .campaign import (
    CampaignConfig,
    CampaignState,
    init_campaign,
    load_campaign,
    next_iteration,
    pareto_report,
    record_measurement,
    replay_fixture,
    run_closed_loop,
    save_campaign,
)

__all__ = [
    "Bounds",
    "CampaignConfig",
    "CampaignState",
    "Dataset",
    "DatasetRow",
    "DesignPoint",
    "DEFAULT_BOUNDS",
    "EpsConfig",
    "EpsProblem",
    "ExperimentGroup",
    "FitConfig",
    "GPModel",
    "KernelParams",
    "Measurement",
    "ObjectiveVector",
    "ParetoFront",
    "ProcessConstants",
    "SampledFunction",
    "SuggestionRecord",
    "TsemoConfig",
    "VirtualLabConfig",
    "crowding_distance",
    "dominates",
    "fit",
    "grid_oracle",
    "grouped_initial_design",
    "hypervolume",
    "hypervolume_contributions",
    "init_campaign",
    "lhs",
    "load_campaign",
    "load_dataset",
    "load_si_fixture",
    "next_iteration",
    "nondominated_sort",
    "nsga2",
    "objectives_from_measurement",
    "pareto_report",
    "predict",
    "record_measurement",
    "replay_fixture",
    "run_closed_loop",
    "sampled_pareto",
    "save_campaign",
    "simulate",
    "solve_eps",
    "spectral_sample",
    "suggest_batch",
    "sweep",
    "train_models",
]

__version__ = "0.1.0"

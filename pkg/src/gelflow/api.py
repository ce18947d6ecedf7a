"""HTTP API serving the dashboard.

JSON request/response bodies throughout. Reads serve immutable snapshots;
the two POST endpoints mutate the campaign under a single writer lock and
persist before responding. POST /iterations returns 409 once the campaign
has used its iteration budget.
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from . import campaign as camp
from .epsopt import EpsConfig, sweep
from .errors import (
    CampaignCompleteError,
    ConflictError,
    ExcludedDataError,
    InsufficientDataError,
    InvalidInputError,
)
from .process import DIMENSION_NAMES, Measurement
from .tsemo import train_models


class MeasurementBody(BaseModel):
    wf: float = 0.0
    rh: float = 1.0
    exclude: str | None = None
    sigma_w: float | None = None
    sigma_r: float | None = None


def _experiment_doc(e: camp.Experiment) -> dict:
    doc = {
        "id": e.id,
        "iteration": e.iteration,
        "source": e.source,
        "status": e.status,
        "x": {name: getattr(e.x, name) for name in DIMENSION_NAMES},
    }
    if e.measurement is not None:
        doc["measurement"] = {
            "w_nipam_f": e.measurement.w_nipam_f,
            "r_h": e.measurement.r_h,
            "excluded": e.measurement.excluded,
        }
    if e.objectives is not None:
        doc["objectives"] = {
            "neg_product_flow": e.objectives.neg_product_flow,
            "sq_radius_dev": e.objectives.sq_radius_dev,
            "temp_dev": e.objectives.temp_dev,
        }
    return doc


def create_app(campaign_path: str | Path) -> FastAPI:
    path = Path(campaign_path)
    app = FastAPI(title="gelflow campaign API")
    state_lock = threading.Lock()
    app.state.campaign = camp.load_campaign(path)

    def snapshot() -> camp.CampaignState:
        return app.state.campaign

    @app.get("/campaign")
    def get_campaign():
        state = snapshot()
        return {
            "iterations_run": state.iterations_run,
            "max_iterations": state.config.max_iterations,
            "complete": state.iterations_run >= state.config.max_iterations,
            "n_experiments": len(state.experiments),
            "n_pending": len(state.pending()),
            "bounds": {
                "lower": list(state.config.bounds.lower),
                "upper": list(state.config.bounds.upper),
            },
            "constants": {
                "r_h_target": state.config.constants.r_h_target,
                "t_min": state.config.constants.t_min,
            },
            "hv_trajectory": list(state.hv_trajectory),
        }

    @app.get("/experiments")
    def get_experiments(status: str | None = None):
        state = snapshot()
        docs = [_experiment_doc(e) for e in state.experiments]
        if status is not None:
            if status not in ("pending", "measured"):
                raise HTTPException(422, f"unknown status filter {status!r}")
            docs = [d for d in docs if d["status"] == status]
        return {"experiments": docs}

    @app.post("/experiments/{experiment_id}/measurement")
    def post_measurement(experiment_id: int, body: MeasurementBody):
        with state_lock:
            state = snapshot()
            if not any(e.id == experiment_id for e in state.experiments):
                raise HTTPException(404, f"no experiment with id {experiment_id}")
            try:
                m = Measurement(
                    w_nipam_f=body.wf,
                    r_h=body.rh,
                    excluded=body.exclude or "none",
                    sigma_w=body.sigma_w,
                    sigma_r=body.sigma_r,
                )
                new_state = camp.record_measurement(state, experiment_id, m)
            except ConflictError as err:
                raise HTTPException(409, str(err)) from err
            except (InvalidInputError, ExcludedDataError) as err:
                raise HTTPException(422, str(err)) from err
            camp.save_campaign(new_state, path)
            app.state.campaign = new_state
            return _experiment_doc(new_state.experiment(experiment_id))

    @app.post("/iterations")
    def post_iteration():
        with state_lock:
            state = snapshot()
            try:
                new_state = camp.next_iteration(state)
            except CampaignCompleteError as err:
                raise HTTPException(409, str(err)) from err
            except InsufficientDataError as err:
                raise HTTPException(422, str(err)) from err
            camp.save_campaign(new_state, path)
            old_ids = {e.id for e in state.experiments}
            app.state.campaign = new_state
            suggestion = new_state.suggestions[-1]
            return {
                "iteration": suggestion.iteration,
                "padded": suggestion.padded,
                "batch": [
                    _experiment_doc(e) for e in new_state.experiments if e.id not in old_ids
                ],
            }

    @app.get("/pareto")
    def get_pareto(pop: int = 1000, gens: int = 200, seed: int | None = None):
        try:
            return camp.pareto_report(snapshot(), population=pop, generations=gens, seed=seed)
        except InsufficientDataError as err:
            raise HTTPException(422, str(err)) from err

    @app.get("/gp/slice")
    def get_gp_slice(objective: str, dim: str, fixed: str = ""):
        fixed_map = {}
        for token in fixed.split(","):
            if not token.strip():
                continue
            try:
                name, value = token.split("=")
                fixed_map[name.strip()] = float(value)
            except ValueError:
                raise HTTPException(422, f"bad fixed token {token!r}") from None
        try:
            return camp.gp_slice(snapshot(), objective, dim, fixed_map)
        except (InvalidInputError, InsufficientDataError) as err:
            raise HTTPException(422, str(err)) from err

    @app.get("/validation")
    def get_validation(eps: str, tub: float = 80.0, resolution: int = 17):
        try:
            epsilons = [float(tok) for tok in eps.split(",") if tok.strip()]
        except ValueError:
            raise HTTPException(422, f"bad eps list {eps!r}") from None
        state = snapshot()
        try:
            models = train_models(state.dataset(), state.config.bounds, state.config.tsemo)
        except InsufficientDataError as err:
            raise HTTPException(422, str(err)) from err
        results = sweep(
            models,
            epsilons=epsilons,
            temp_uppers=[tub],
            config=EpsConfig(grid_resolution=resolution),
            bounds=state.config.bounds,
        )
        return {
            "rows": [
                {
                    "eps": r.epsilon,
                    "temp_upper": r.temp_upper,
                    "feasible": r.feasible,
                    "objective": r.objective,
                    "x": None
                    if r.x is None
                    else {name: getattr(r.x, name) for name in DIMENSION_NAMES},
                }
                for r in results
            ]
        }

    return app

"""Command-line client for campaign operations.

Every subcommand is a thin wrapper over the functions in
:mod:`gelflow.campaign`; the HTTP API exposes the same operations.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import campaign as camp
from .epsopt import EpsConfig, export_sweep, sweep
from .errors import GelflowError
from .process import Measurement
from .tsemo import train_models
from .virtlab import VirtualLabConfig


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gelflow", description="Flow-synthesis campaign manager"
    )
    parser.add_argument("--campaign", default="campaign.jsonl", help="campaign file path")
    parser.add_argument("--seed", type=int, default=None, help="override the configured seed")
    sub = parser.add_subparsers(dest="command", required=True)

    p_init = sub.add_parser("init", help="start a campaign with a grouped LHS design")
    p_init.add_argument("--groups", type=int, default=3)
    p_init.add_argument("--per-group", type=int, default=5)
    p_init.add_argument("--max-iterations", type=int, default=11)
    p_init.add_argument("--force", action="store_true", help="overwrite an existing file")

    sub.add_parser("suggest", help="run one TS-EMO iteration")

    p_rec = sub.add_parser("record", help="record a measurement for a pending experiment")
    p_rec.add_argument("--id", type=int, required=True)
    p_rec.add_argument("--wf", type=float, help="final monomer weight fraction")
    p_rec.add_argument("--rh", type=float, help="hydrodynamic radius, nm")
    p_rec.add_argument(
        "--exclude",
        choices=["high polydispersity", "high relative error"],
        default=None,
        help="mark the measurement as unusable",
    )
    p_rec.add_argument("--sigma-w", type=float, default=None)
    p_rec.add_argument("--sigma-r", type=float, default=None)

    p_par = sub.add_parser("pareto", help="compute the sampled Pareto front report")
    p_par.add_argument("--pop", type=int, default=5000)
    p_par.add_argument("--gens", type=int, default=1000)
    p_par.add_argument("--out", default=None, help="write the JSON report here")

    p_val = sub.add_parser("validate", help="epsilon-constraint validation sweep")
    p_val.add_argument("--eps-list", default=",".join(str(int(e)) for e in range(2, 26)))
    p_val.add_argument("--temp-ub", type=float, default=80.0)
    p_val.add_argument("--resolution", type=int, default=33)
    p_val.add_argument("--out", default=None, help="write the sweep CSV here")

    p_rep = sub.add_parser("replay", help="build a campaign from a bundled data table")
    p_rep.add_argument("--fixture", default="si-table-s1")
    p_rep.add_argument("--force", action="store_true")

    p_sim = sub.add_parser("simulate", help="closed loop against the virtual lab")
    p_sim.add_argument("--iterations", type=int, required=True)
    p_sim.add_argument("--lab-seed", type=int, default=0)
    p_sim.add_argument("--exclusion-probability", type=float, default=0.0)

    p_srv = sub.add_parser("serve", help="serve the HTTP API for the dashboard")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=8000)

    return parser


def _apply_seed(config: camp.CampaignConfig, seed: int | None) -> camp.CampaignConfig:
    if seed is None:
        return config
    return replace(
        config, design_seed=seed, tsemo=replace(config.tsemo, seed=seed)
    )


def _print_batch(state: camp.CampaignState) -> None:
    pending = state.pending()
    print(f"{len(pending)} pending experiment(s):")
    print(f"{'id':>4} {'iter':>4} {'f_i':>6} {'f_m':>6} {'c_ctab':>7} {'temp':>6}")
    for e in pending:
        print(
            f"{e.id:>4} {e.iteration:>4} {e.x.f_i:>6.3f} {e.x.f_m:>6.2f} "
            f"{e.x.c_ctab:>7.3f} {e.x.temp:>6.2f}"
        )


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    path = Path(args.campaign)
    try:
        return _dispatch(args, path)
    except GelflowError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def _dispatch(args, path: Path) -> int:
    if args.command == "init":
        config = _apply_seed(
            camp.CampaignConfig(
                n_groups=args.groups,
                per_group=args.per_group,
                max_iterations=args.max_iterations,
            ),
            args.seed,
        )
        state = camp.init_campaign(config)
        camp.save_campaign(state, path, overwrite=args.force)
        print(f"campaign written to {path}")
        _print_batch(state)
        return 0

    if args.command == "replay":
        fixture = args.fixture.replace("-", "_")
        config = _apply_seed(camp.CampaignConfig(), args.seed)
        state = camp.replay_fixture(config, fixture)
        camp.save_campaign(state, path, overwrite=args.force)
        ds = state.dataset()
        print(f"replayed {len(ds)} measured experiments into {path}")
        return 0

    state = camp.load_campaign(path)
    if args.seed is not None:
        state = replace(state, config=_apply_seed(state.config, args.seed))

    if args.command == "suggest":
        state = camp.next_iteration(state)
        camp.save_campaign(state, path)
        print(f"iteration {state.iterations_run} suggested")
        _print_batch(state)
        return 0

    if args.command == "record":
        if args.exclude is None and (args.wf is None or args.rh is None):
            print("error: --wf and --rh are required unless --exclude is given", file=sys.stderr)
            return 2
        m = Measurement(
            w_nipam_f=args.wf if args.wf is not None else 0.0,
            r_h=args.rh if args.rh is not None else 1.0,
            excluded=args.exclude or "none",
            sigma_w=args.sigma_w,
            sigma_r=args.sigma_r,
        )
        state = camp.record_measurement(state, args.id, m)
        camp.save_campaign(state, path)
        exp = state.experiment(args.id)
        if exp.objectives is None:
            print(f"experiment {args.id} recorded as excluded ({m.excluded})")
        else:
            y = exp.objectives
            print(
                f"experiment {args.id} recorded: F_product = {-y.neg_product_flow:.3f} mL/min, "
                f"dr2 = {y.sq_radius_dev:.2f} nm2, dT = {y.temp_dev:.2f} K"
            )
        return 0

    if args.command == "pareto":
        report = camp.pareto_report(state, population=args.pop, generations=args.gens)
        n = len(report["front"]["objectives"])
        print(f"front of {n} points (seed {report['seed']})")
        if args.out:
            Path(args.out).write_text(json.dumps(report, indent=1), encoding="utf-8")
            print(f"report written to {args.out}")
        return 0

    if args.command == "validate":
        epsilons = [float(tok) for tok in args.eps_list.split(",") if tok.strip()]
        models = train_models(state.dataset(), state.config.bounds, state.config.tsemo)
        results = sweep(
            models,
            epsilons=epsilons,
            temp_uppers=[args.temp_ub],
            config=EpsConfig(grid_resolution=args.resolution),
            bounds=state.config.bounds,
        )
        print(f"{'eps':>6} {'T_ub':>6} {'objective':>10}  solution")
        for r in results:
            if r.feasible:
                print(
                    f"{r.epsilon:>6.1f} {r.temp_upper:>6.1f} {r.objective:>10.3f}  "
                    f"f_i={r.x.f_i:.3f} f_m={r.x.f_m:.2f} c_ctab={r.x.c_ctab:.3f} temp={r.x.temp:.2f}"
                )
            else:
                print(f"{r.epsilon:>6.1f} {r.temp_upper:>6.1f} {'infeasible':>10}")
        if args.out:
            export_sweep(results, args.out)
            print(f"sweep written to {args.out}")
        return 0

    if args.command == "simulate":
        vcfg = VirtualLabConfig(
            seed=args.lab_seed, exclusion_probability=args.exclusion_probability
        )
        final = camp.run_closed_loop(state.config, vcfg, args.iterations)
        camp.save_campaign(final, path)
        hv = ", ".join(f"{v:.4g}" for v in final.hv_trajectory)
        print(f"closed loop finished after {final.iterations_run} iterations")
        print(f"hypervolume trajectory: {hv}")
        return 0

    if args.command == "serve":
        import uvicorn

        from .api import create_app

        uvicorn.run(create_app(path), host=args.host, port=args.port)
        return 0

    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    raise SystemExit(main())

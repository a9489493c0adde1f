"""Command-line interface.

Data goes to stdout (or ``--output``), diagnostics to stderr. Exit codes:
0 success, 2 invalid input, 3 internal numerical failure. Every report embeds
the configuration (tolerances, seed, budget, package version) so results are
reproducible from the report alone.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import __version__
from .channels import channel_from_dict, flagged_depolarizing_channel, werner_holevo_channel
from .distill import (
    DEFAULT_WITNESS_BUDGET,
    classify,
    filtered_hashing_rate,
    local_filter,
    low_rank_rate_bound,
    separability_verdict,
)
from .errors import (
    BadParameterError,
    InputError,
    LrdistillError,
    RankNotLowError,
    StateFormatError,
)
from .kernels import DEFAULT_RANK_TOL
from .sampling import EnsembleSpec, run_experiment
from .states import (
    DEFAULT_PPT_TOL,
    DensityMatrix,
    TripartitePureState,
    bell_state,
    ghz_state,
    maximally_mixed,
    partial_trace,
    purify,
    state_from_dict,
)

EXAMPLE_NAMES = (
    "bell",
    "ghz",
    "maximally-mixed",
    "werner-holevo",
    "wh-choi",
    "flagged-depolarizing",
)


@dataclass(frozen=True)
class RunConfig:
    rank_tol: float = DEFAULT_RANK_TOL
    ppt_tol: float = DEFAULT_PPT_TOL
    seed: int = 0
    witness_budget: int = DEFAULT_WITNESS_BUDGET
    fmt: str = "json"
    output: str | None = None

    def __post_init__(self):
        if self.rank_tol <= 0 or self.ppt_tol <= 0:
            raise BadParameterError("tolerances must be > 0")
        if self.witness_budget < 0:
            raise BadParameterError("witness budget must be >= 0")
        if self.seed < 0:
            raise BadParameterError("seed must be >= 0")

    def to_json_dict(self) -> dict:
        return {
            "rank_tol": self.rank_tol,
            "ppt_tol": self.ppt_tol,
            "seed": self.seed,
            "witness_budget": self.witness_budget,
            "version": __version__,
        }


def _common_flags(sub: argparse.ArgumentParser):
    sub.add_argument("--rank-tol", type=float, default=DEFAULT_RANK_TOL,
                     help="relative eigenvalue cutoff for ranks (default 1e-10)")
    sub.add_argument("--ppt-tol", type=float, default=DEFAULT_PPT_TOL,
                     help="partial-transpose witness threshold (default 1e-9)")
    sub.add_argument("--seed", type=int, default=0, help="PRNG seed (default 0)")
    sub.add_argument("--budget", type=int, default=DEFAULT_WITNESS_BUDGET,
                     help="random trials for the witness search (default 50)")
    sub.add_argument("--format", dest="fmt", choices=("json", "csv", "pretty"),
                     default="json", help="output format (default json)")
    sub.add_argument("--output", default=None, help="write output to file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lrdistill",
        description="Distillability bounds, local filtering, and PPT classification "
        "for low-rank bipartite quantum states.",
    )
    parser.add_argument("--version", action="version", version=f"lrdistill {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("analyze", help="classify a state file (full undistillability report)")
    p.add_argument("state_file", help="JSON state or channel document")
    _common_flags(p)

    p = subs.add_parser("filter", help="apply the marginal-flattening local filter")
    p.add_argument("state_file", help="JSON state or channel document")
    p.add_argument("--side", choices=("A", "B"), required=True, help="filtering side")
    _common_flags(p)

    p = subs.add_parser("sample", help="run the random low-rank state experiment")
    p.add_argument("d_a", type=int, help="dimension of A")
    p.add_argument("d_b", type=int, help="dimension of B")
    p.add_argument("d_e", type=int, help="dimension of E (must be < d_B)")
    p.add_argument("n", type=int, help="number of samples")
    _common_flags(p)

    p = subs.add_parser("example", help="emit a named example state or channel")
    p.add_argument("name", choices=EXAMPLE_NAMES)
    p.add_argument("--d", type=int, default=2,
                   help="input dimension for flagged-depolarizing (default 2)")
    p.add_argument("--q", type=float, default=0.5,
                   help="depolarizing strength for flagged-depolarizing (default 0.5)")
    _common_flags(p)
    return parser


def _load_document(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise StateFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise StateFormatError(f"{path}: top-level JSON value must be an object")
    return doc


def _load_state(path: str) -> tuple[str, DensityMatrix | TripartitePureState]:
    """Load a state document; channel documents contribute their Choi state."""
    doc = _load_document(path)
    if "choi" in doc:
        return "channel", channel_from_dict(doc).choi
    state = state_from_dict(doc)
    kind = "tripartite" if isinstance(state, TripartitePureState) else "bipartite"
    if kind == "bipartite" and len(state.dims) != 2:
        raise StateFormatError(
            f"density-matrix inputs must be bipartite, got dims {state.dims}; "
            "multipartite inputs are only accepted as tripartite pure vectors"
        )
    return kind, state


def _dump_json(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _cmd_analyze(args, config: RunConfig) -> str:
    kind, state = _load_state(args.state_file)
    if isinstance(state, TripartitePureState):
        psi = state
    else:
        psi = purify(state, config.rank_tol)
    report = classify(
        psi,
        rank_tol=config.rank_tol,
        ppt_tol=config.ppt_tol,
        witness_budget=config.witness_budget,
        seed=config.seed,
    )
    rho_ab = partial_trace(psi.density_matrix(), (0, 1))
    separability = separability_verdict(rho_ab, config.rank_tol, config.ppt_tol)
    if config.fmt == "pretty":
        lines = [
            f"input: {kind} dims={list(state.dims)}",
            f"classification: {report.classification}",
            f"npt reductions: {', '.join(report.npt_reductions) or 'none'}",
            "ranks: "
            + " ".join(f"{k}={v}" for k, v in report.to_json_dict()["ranks"].items()),
            "rates: " + " ".join(f"{k}={v}" for k, v in report.rates.items()),
        ]
        for red in (report.reduction_ab, report.reduction_ae):
            ppt = "PPT" if red.ppt.is_ppt else "NPT"
            witness = (
                "not applicable"
                if not red.witness.performed
                else ("found" if red.witness.found else "not found")
            )
            lines.append(
                f"reduction {red.label}: {ppt} (witness={red.ppt.witness!r}) "
                f"rank={red.rank} hashing_rate={red.hashing_rate!r} "
                f"bounds=({red.low_rank_bound_first!r}, {red.low_rank_bound_second!r}) "
                f"one_way_witness={witness}"
            )
        lines.append(f"separability(AB): {separability.verdict}")
        return "\n".join(lines) + "\n"
    if config.fmt == "csv":
        raise BadParameterError("csv output is only available for the sample command")
    return _dump_json(
        {
            "schema": "analyze-report/1",
            "config": config.to_json_dict(),
            "input": {"kind": kind, "dims": list(state.dims)},
            "report": report.to_json_dict(),
            "separability_AB": separability.to_json_dict(),
        }
    )


def _cmd_filter(args, config: RunConfig) -> str:
    kind, state = _load_state(args.state_file)
    if isinstance(state, TripartitePureState):
        rho = partial_trace(state.density_matrix(), (0, 1))
    else:
        rho = state
    outcome = local_filter(rho, args.side, config.rank_tol)
    try:
        bound = low_rank_rate_bound(rho, args.side, config.rank_tol)
        bound_note = None
    except RankNotLowError as exc:
        bound = None
        bound_note = str(exc)
    rate = filtered_hashing_rate(rho, args.side, config.rank_tol)
    if config.fmt == "pretty":
        lines = [
            f"input: {kind} dims={list(rho.dims)}",
            f"side: {outcome.side}",
            f"p_succ: {outcome.p_succ!r}",
            f"lambda_min: {outcome.lambda_min!r}",
            f"rank: {outcome.rank}  rank_side: {outcome.rank_side}",
            f"low_rank_bound: {bound!r}" + (f"  ({bound_note})" if bound_note else ""),
            f"filtered_hashing_rate: {rate!r}",
        ]
        return "\n".join(lines) + "\n"
    if config.fmt == "csv":
        raise BadParameterError("csv output is only available for the sample command")
    return _dump_json(
        {
            "schema": "filter-report/1",
            "config": config.to_json_dict(),
            "input": {"kind": kind, "dims": list(rho.dims)},
            "filter": outcome.to_json_dict(),
            "low_rank_bound": bound,
            "low_rank_bound_note": bound_note,
            "filtered_hashing_rate": rate,
        }
    )


def _cmd_sample(args, config: RunConfig) -> str:
    spec = EnsembleSpec(
        d_a=args.d_a,
        d_b=args.d_b,
        d_e=args.d_e,
        n_samples=args.n,
        seed=config.seed,
        rank_tol=config.rank_tol,
    )
    report = run_experiment(spec, witness_budget=config.witness_budget)
    if config.fmt == "csv":
        return report.to_csv()
    if config.fmt == "pretty":
        lines = [
            f"spec: d_A={spec.d_a} d_B={spec.d_b} d_E={spec.d_e} "
            f"n={spec.n_samples} seed={spec.seed}",
            "frequencies: "
            + " ".join(f"{k}={v!r}" for k, v in report.frequencies.items()),
        ]
        return "\n".join(lines) + "\n"
    payload = report.to_json_dict()
    payload["config"] = config.to_json_dict()
    return _dump_json(payload)


def _cmd_example(args, config: RunConfig) -> str:
    name = args.name
    if name == "bell":
        doc = bell_state().to_json_dict()
    elif name == "ghz":
        doc = ghz_state().to_json_dict()
    elif name == "maximally-mixed":
        doc = maximally_mixed((2, 2)).to_json_dict()
    elif name == "werner-holevo":
        doc = werner_holevo_channel().to_json_dict()
    elif name == "wh-choi":
        doc = werner_holevo_channel().choi.to_json_dict()
    elif name == "flagged-depolarizing":
        doc = flagged_depolarizing_channel(args.d, args.q).to_json_dict()
    else:  # unreachable: argparse restricts choices
        raise BadParameterError(f"unknown example {name!r}")
    return _dump_json(doc)


_COMMANDS = {
    "analyze": _cmd_analyze,
    "filter": _cmd_filter,
    "sample": _cmd_sample,
    "example": _cmd_example,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(
            rank_tol=args.rank_tol,
            ppt_tol=args.ppt_tol,
            seed=args.seed,
            witness_budget=args.budget,
            fmt=args.fmt,
            output=args.output,
        )
        text = _COMMANDS[args.command](args, config)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LrdistillError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # malformed input must never crash the CLI
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    if config.output:
        try:
            with open(config.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {config.output}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command line interface.

Four subcommands share one result envelope:

* ``compare``  - exact pass probabilities plus a sampled discrimination run
* ``fidelity`` - analytic fidelity measures only
* ``claims``   - checked identities (operator-basis sum, AM-GM ordering,
  the magic-mixture statistic vs process fidelity)
* ``hom``      - two-photon coincidence statistics for one probe

Envelopes are JSON (or flattened CSV) and deterministic: the same
configuration and seed produce byte-identical output.  Files are
written atomically.  Exit codes: 0 success, 2 invalid configuration,
3 file I/O failure, 4 dimension mismatch between operators and probes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass

from . import __version__
from .analytic import (
    haar_average_fidelity,
    process_fidelity_closed,
    process_fidelity_sum,
    two_state_pass_prob,
)
from .circuits import hom_coincidence, magic_probe_test
from .errors import ConfigError, DimensionMismatch, SwitchTestError
from .gates import parse_operator
from .matfile import atomic_write_text
from .probes import ProbeSet, resolve_probe_token
from .protocol import (
    check_am_gm,
    check_magic_claim,
    discriminate,
    joint_probe,
    probe_pass_probabilities,
    run_shots,
)
from .qmath import QuantumState, UnitaryOp

ENV_SEED = "SWITCHTEST_SEED"


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated CLI configuration, echoed verbatim into the envelope."""

    command: str
    u1: str
    u2: str
    dim: int
    probes: str = "basis"
    shots: int = 1000
    seed: int = 0
    strategy: str = "fixed"
    epsilon: float = 0.05
    out: str = "-"
    format: str = "json"

    def __post_init__(self):
        if self.dim < 2:
            raise ConfigError(f"--dim must be >= 2, got {self.dim}")
        if self.shots < 1:
            raise ConfigError(f"--shots must be >= 1, got {self.shots}")
        if self.seed < 0:
            raise ConfigError(f"--seed must be nonnegative, got {self.seed}")
        if not 0.0 < self.epsilon < 0.5:
            raise ConfigError(f"--epsilon must lie in (0, 0.5), got {self.epsilon}")
        if self.strategy not in ("fixed", "sequential"):
            raise ConfigError(f"unknown strategy {self.strategy!r}")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"unknown format {self.format!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="switchtest",
        description="Simulate and analyze interferometric tests that compare two unitaries.",
    )
    parser.add_argument("--version", action="version", version=f"switchtest {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("compare", "exact probabilities plus a sampled discrimination verdict"),
        ("fidelity", "analytic fidelity measures only"),
        ("claims", "checked identities for the operator pair"),
        ("hom", "two-photon coincidence statistics"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("--u1", required=True, help="first operator token, e.g. I, RZ(0.7), CUSTOM(u.json)")
        p.add_argument("--u2", required=True, help="second operator token")
        p.add_argument("--dim", required=True, type=int, help="operator dimension")
        p.add_argument(
            "--probes",
            default="basis",
            help="probe family: basis | basis:K | mixed | haar:N | magic | entangled | operator_basis",
        )
        p.add_argument("--shots", default=1000, type=int, help="shots per probe (default 1000)")
        p.add_argument(
            "--seed",
            default=None,
            type=int,
            help=f"RNG seed (default: ${ENV_SEED} if set, else 0)",
        )
        p.add_argument(
            "--strategy",
            default="fixed",
            choices=("fixed", "sequential"),
            help="fixed: full budget per probe; sequential: stop at first failure",
        )
        p.add_argument("--epsilon", default=0.05, type=float, help="confidence level is 1 - epsilon")
        p.add_argument("--out", default="-", help="output path, or - for stdout")
        p.add_argument("--format", default="json", choices=("json", "csv"))
    return parser


def _seed_from(ns: argparse.Namespace) -> int:
    if ns.seed is not None:
        return ns.seed
    raw = os.environ.get(ENV_SEED)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{ENV_SEED}={raw!r} is not an integer") from exc


def config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    return ExperimentConfig(
        command=ns.command,
        u1=ns.u1,
        u2=ns.u2,
        dim=ns.dim,
        probes=ns.probes,
        shots=ns.shots,
        seed=_seed_from(ns),
        strategy=ns.strategy,
        epsilon=ns.epsilon,
        out=ns.out,
        format=ns.format,
    )


# -- envelope construction ----------------------------------------------


def run_experiment(cfg: ExperimentConfig) -> dict:
    """Execute one configured experiment and return the result envelope."""
    u1 = parse_operator(cfg.u1, cfg.dim)
    u2 = parse_operator(cfg.u2, cfg.dim)
    probes = resolve_probe_token(cfg.probes, cfg.dim, cfg.seed)
    handler = {
        "compare": _cmd_compare,
        "fidelity": _cmd_fidelity,
        "claims": _cmd_claims,
        "hom": _cmd_hom,
    }[cfg.command]
    analytic, empirical, claims = handler(cfg, u1, u2, probes)
    return {
        "tool": {"name": "switchtest", "version": __version__},
        "command": cfg.command,
        "seed": cfg.seed,
        "config": {
            "u1": cfg.u1,
            "u2": cfg.u2,
            "dim": cfg.dim,
            "probes": cfg.probes,
            "shots": cfg.shots,
            "seed": cfg.seed,
            "strategy": cfg.strategy,
            "epsilon": cfg.epsilon,
            "format": cfg.format,
        },
        "analytic": analytic,
        "empirical": empirical,
        "claims": claims,
    }


def _analytic_block(u1: UnitaryOp, u2: UnitaryOp, probes: ProbeSet) -> dict:
    block = {
        "f_pro_closed": process_fidelity_closed(u1, u2),
        "f_pro_sum": process_fidelity_sum(u1, u2),
        "haar_mean_fidelity": haar_average_fidelity(u1, u2),
    }
    if probes.mix is not None:
        block["magic_statistic"] = magic_probe_test(u1, u2, probes.mix)
        block["f_bar"] = None
        block["per_probe"] = []
        return block
    probs = probe_pass_probabilities(u1, u2, probes)
    fids = [min(max(2.0 * p - 1.0, 0.0), 1.0) for p in probs]
    block["f_bar"] = sum(fids) / len(fids)
    block["per_probe"] = [
        {"index": i, "p_pass": p, "fidelity": f} for i, (p, f) in enumerate(zip(probs, fids))
    ]
    return block


def _cmd_compare(cfg, u1, u2, probes):
    analytic = _analytic_block(u1, u2, probes)
    if probes.mix is not None:
        # The magic mixture has no sampling law; report analytics only.
        return analytic, None, []
    verdict = discriminate(
        u1,
        u2,
        probes,
        shots_per_probe=cfg.shots,
        seed=cfg.seed,
        sequential=cfg.strategy == "sequential",
        epsilon=cfg.epsilon,
    )
    empirical = {
        "strategy": cfg.strategy,
        "shots_per_probe": cfg.shots,
        "records": [
            {"probe_index": r.probe_index, "shots": r.shots, "passes": r.passes, "p_hat": r.p_hat}
            for r in verdict.records
        ],
        "verdict": {
            "decision": verdict.decision,
            "witness_probe": verdict.witness_probe,
            "f_bar_estimate": verdict.f_bar_estimate,
            "ci_low": verdict.ci_low,
            "ci_high": verdict.ci_high,
            "epsilon": verdict.epsilon,
            "total_shots": verdict.total_shots,
        },
    }
    return analytic, empirical, []


def _cmd_fidelity(cfg, u1, u2, probes):
    return _analytic_block(u1, u2, probes), None, []


def _cmd_claims(cfg, u1, u2, probes):
    analytic = _analytic_block(u1, u2, probes)
    claims = [asdict(check_magic_claim(u1, u2))]
    if analytic["per_probe"]:
        fids = [row["fidelity"] for row in analytic["per_probe"]]
        claims.append(asdict(check_am_gm(fids)))
    sum_gap = abs(analytic["f_pro_sum"] - analytic["f_pro_closed"])
    claims.append(
        {
            "claim_id": "basis_sum_equals_closed_form",
            "lhs": analytic["f_pro_sum"],
            "rhs": analytic["f_pro_closed"],
            "abs_diff": sum_gap,
            "holds": sum_gap <= 1e-10,
            "tolerance": 1e-10,
            "detail": {},
        }
    )
    return analytic, None, claims


def _cmd_hom(cfg, u1, u2, probes):
    if probes.mix is not None or len(probes.states) != 1:
        raise ConfigError(
            "hom needs exactly one probe state; use --probes basis:K, haar:1, or mixed"
        )
    probe = probes.states[0]
    rho = _evolve(u1, probe)
    sigma = _evolve(u2, probe)
    coincidence = hom_coincidence(rho, sigma)
    p_two_state = two_state_pass_prob(u1, u2, joint_probe(probe, u1.dim))
    analytic = {
        "coincidence": coincidence,
        "pass_complement": 1.0 - coincidence,
        "two_state_pass": p_two_state,
        "complement_gap": abs(1.0 - coincidence - p_two_state),
    }
    record = run_shots(coincidence, cfg.shots, cfg.seed)
    empirical = {
        "shots": record.shots,
        "coincidences": record.passes,
        "rate": record.p_hat,
    }
    return analytic, empirical, []


def _evolve(u: UnitaryOp, state: QuantumState) -> QuantumState:
    if state.total_dim != u.dim:
        raise DimensionMismatch(f"probe dim {state.total_dim} != operator dim {u.dim}")
    if state.is_pure:
        return QuantumState(dims=state.dims, vector=u.matrix @ state.vector)
    return QuantumState(dims=state.dims, rho=u.matrix @ state.rho @ u.matrix.conj().T)


# -- rendering and output -----------------------------------------------


def render_envelope(envelope: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_native(envelope), indent=2) + "\n"
    return _render_csv(envelope)


def _render_csv(envelope: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    command = envelope["command"]
    if command == "hom":
        writer.writerow(["shots", "coincidences", "rate", "coincidence_exact", "pass_complement"])
        emp = envelope["empirical"]
        ana = envelope["analytic"]
        writer.writerow(
            [emp["shots"], emp["coincidences"], emp["rate"], ana["coincidence"], ana["pass_complement"]]
        )
        return buf.getvalue()
    if command == "claims":
        writer.writerow(["claim_id", "lhs", "rhs", "abs_diff", "holds", "tolerance"])
        for claim in envelope["claims"]:
            writer.writerow(
                [claim["claim_id"], claim["lhs"], claim["rhs"], claim["abs_diff"],
                 claim["holds"], claim["tolerance"]]
            )
        return buf.getvalue()
    # compare / fidelity: one row per probe.
    writer.writerow(["probe_index", "fidelity", "p_pass", "shots", "passes", "p_hat"])
    counts = {}
    if envelope["empirical"] is not None:
        for rec in envelope["empirical"]["records"]:
            counts[rec["probe_index"]] = rec
    for row in envelope["analytic"]["per_probe"]:
        rec = counts.get(row["index"])
        writer.writerow(
            [
                row["index"],
                row["fidelity"],
                row["p_pass"],
                rec["shots"] if rec else "",
                rec["passes"] if rec else "",
                rec["p_hat"] if rec else "",
            ]
        )
    return buf.getvalue()


def _native(x):
    """Coerce numpy scalars and tuples so json output is reproducible."""
    if isinstance(x, dict):
        return {k: _native(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_native(v) for v in x]
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):
        return x.item()
    return x


def emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        atomic_write_text(out, text)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        envelope = run_experiment(cfg)
        emit(render_envelope(envelope, cfg.format), cfg.out)
    except DimensionMismatch as exc:
        print(f"switchtest: dimension mismatch: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"switchtest: file error: {exc}", file=sys.stderr)
        return 3
    except SwitchTestError as exc:
        print(f"switchtest: invalid configuration: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

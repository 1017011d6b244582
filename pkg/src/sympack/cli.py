"""``sympack`` command line.

Every command prints a JSON report {command, timestamp, inputs, results,
summary} unless a table format is requested.  Exit codes: 0 pass or
feasible, 1 verification failure or infeasible, 2 bad usage or input.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Optional

import numpy as np

from . import acceptance, io, lattice, localmodels, packer, projective, symplin

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SEED_ENV = "SYMPACK_SEED"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    seed: int = localmodels.DEFAULT_SEED
    tol: float = 1e-8
    samples: int = 100
    output_format: str = "json"
    output_path: Optional[str] = None

    def __post_init__(self):
        if self.samples < 1:
            raise UsageError("--samples must be >= 1")
        if not self.tol > 0:
            raise UsageError("--tol must be positive")


@dataclass
class Report:
    command: str
    inputs: dict
    results: Any
    summary: dict
    timestamp: Optional[str] = None

    def to_dict(self) -> dict:
        return {"command": self.command, "timestamp": self.timestamp, "inputs": self.inputs,
                "results": self.results, "summary": self.summary}

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        return cls(d["command"], d["inputs"], d["results"], d["summary"], d.get("timestamp"))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _rational(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}") from None


def default_seed() -> int:
    env = os.environ.get(SEED_ENV)
    if env is None:
        return localmodels.DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None


# ---------------------------------------------------------------------------
# commands; each returns (inputs, results, passed)


def cmd_acs(args, cfg: RunConfig):
    g = io.load_matrix(args.metric, "metric")
    n = g.dim // 2
    w = io.load_matrix(args.omega, "symplectic") if args.omega else symplin.BilinearForm(symplin.standard_omega(n), "symplectic")
    phi = io.load_matrix(args.phi, "involution") if args.phi else None
    try:
        J = symplin.equivariant_acs(g.matrix, w.matrix, phi.matrix) if phi is not None \
            else symplin.compatible_acs_from_metric(g, w)
    except symplin.InvariantError as e:
        raise io.SchemaError(str(e)) from None
    Jm = J.matrix
    Wm = w.matrix.astype(float)
    checks = {
        "square_residual": float(np.abs(Jm @ Jm + np.eye(len(Jm))).max()),
        "compatible_residual": float(np.abs(Jm.T @ Wm @ Jm - Wm).max()),
        "tame": bool(symplin.check_tame(Wm, Jm)),
    }
    if phi is not None:
        P = phi.matrix.astype(float)
        checks["equivariance_residual"] = float(np.abs(P @ Jm + Jm @ P).max())
    ok = checks["tame"] and all(v <= cfg.tol for k, v in checks.items() if k.endswith("residual"))
    inputs = {"metric": args.metric, "omega": args.omega, "phi": args.phi, "tol": cfg.tol}
    return inputs, {"J": io.matrix_to_json(J), "checks": checks}, ok


def cmd_involution(args, cfg: RunConfig):
    phi = io.load_matrix(args.file, "involution")
    try:
        psi = symplin.normalize_involution(phi.matrix)
    except symplin.InvariantError as e:
        raise io.SchemaError(f"{args.file}: {e}") from None
    P, S = phi.matrix, psi.matrix
    n = len(P) // 2
    if psi.exact:
        W0 = np.array(io.parse_matrix({"rows": symplin.standard_omega(n).astype(int).tolist()}), dtype=object)
        C = np.array(io.parse_matrix({"rows": symplin.conjugation(n).astype(int).tolist()}), dtype=object)
        checks = {"exact": True, "symplectic": bool((S.T @ W0 @ S == W0).all()),
                  "intertwines": bool((S @ P == C @ S).all())}
    else:
        W0, C = symplin.standard_omega(n), symplin.conjugation(n)
        checks = {"exact": False,
                  "symplectic": bool(np.abs(S.T @ W0 @ S - W0).max() <= 1e-12),
                  "intertwines": bool(np.abs(S @ P - C @ S).max() <= 1e-12)}
    ok = checks["symplectic"] and checks["intertwines"]
    return {"file": args.file}, {"psi": io.matrix_to_json(psi), "checks": checks}, ok


def cmd_verify_forms(args, cfg: RunConfig):
    try:
        reps = localmodels.local_model_suite(args.form, lam=args.lam, eps=args.epsilon, delta=args.delta,
                                             kappa=args.kappa, n=args.n, samples=cfg.samples, seed=cfg.seed,
                                             tol=cfg.tol, mode=args.mode)
    except ValueError as e:
        raise UsageError(str(e)) from None
    inputs = {"form": args.form, "lambda": args.lam, "epsilon": args.epsilon, "delta": args.delta,
              "kappa": args.kappa, "n": args.n, "samples": cfg.samples, "seed": cfg.seed, "tol": cfg.tol,
              "mode": args.mode}
    return inputs, [r.to_dict() for r in reps], all(reps)


def cmd_classes(args, cfg: RunConfig):
    try:
        classes = lattice.enumerate_exceptional_classes(args.k)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.sorted_only:
        listed = lattice.sorted_representatives(classes)
    else:
        listed = sorted(classes, key=lambda c: (c.b, tuple(-x for x in c.m)))
    results = {"count": len(classes),
               "classes": [dict(c.to_dict(), self_intersection=c.self_intersection(), chern=c.chern()) for c in listed]}
    return {"k": args.k, "sorted_only": args.sorted_only}, results, True


def cmd_genpos(args, cfg: RunConfig):
    conf = io.load_config(args.file)
    if args.action == "check":
        res = projective.general_position_test(conf, audit_depth=args.depth)
        return {"file": args.file, "depth": args.depth}, res.certificate(), res.ok
    try:
        out = projective.perturb_to_general_position(conf, args.radius, seed=cfg.seed, audit_depth=args.depth)
    except projective.PerturbationError as e:
        return ({"file": args.file, "radius": str(args.radius), "seed": cfg.seed},
                {"error": str(e)}, False)
    dist = [projective.projective_distance(p, q) for p, q in zip(conf.points, out.points)]
    results = {"configuration": io.config_to_json(out), "moves": dist, "max_move": max(dist),
               "certificate": projective.general_position_test(out, args.depth).certificate()}
    return {"file": args.file, "radius": str(args.radius), "seed": cfg.seed, "depth": args.depth}, results, True


def cmd_pack(args, cfg: RunConfig):
    if args.table:
        rows = packer.packing_table()
        return {"table": True}, [r.to_dict() for r in rows], True
    if (args.k is None) == (args.radii_sq is None):
        raise UsageError("give exactly one of --k or --radii-sq (or use 'pack table')")
    if args.k is not None:
        if not 1 <= args.k <= lattice.MAX_K:
            raise UsageError(f"--k must be in 1..{lattice.MAX_K}")
        row = packer.packing_row(args.k)
        return {"k": args.k}, row.to_dict(), True
    try:
        prob = packer.PackingProblem.parse(args.radii_sq)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"--radii-sq: {e}") from None
    res = packer.check_feasible(prob)
    return {"radii_sq": [str(x) for x in prob.lambda_sq]}, res.to_dict(), res.feasible


def cmd_paper_check(args, cfg: RunConfig):
    crit = acceptance.run_all()
    if not args.quiet:
        for c in crit:
            print(c.line(), file=sys.stderr)
    return {}, [c.to_dict() for c in crit], all(c.passed for c in crit)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help=f"random seed (default ${SEED_ENV} or 42)")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp for reproducible output")

    p = argparse.ArgumentParser(prog="sympack", description="Real blow-ups, exceptional classes and ball packings of (CP^2, RP^2).")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("acs", parents=[common], help="compatible almost complex structure from a metric")
    s.add_argument("--metric", required=True, help="JSON matrix file of the metric g")
    s.add_argument("--omega", help="JSON symplectic matrix (default: standard form)")
    s.add_argument("--phi", help="anti-symplectic involution; makes J anti-commute with it")
    s.add_argument("--tol", type=float, default=1e-9)
    s.set_defaults(func=cmd_acs)

    s = sub.add_parser("involution", parents=[common], help="normalize an anti-symplectic involution fixing R^n")
    s.add_argument("--file", required=True)
    s.set_defaults(func=cmd_involution)

    s = sub.add_parser("verify-forms", parents=[common], help="sampled checks of the local model forms")
    s.add_argument("--form", required=True, choices=localmodels.SUITE_FORMS)
    s.add_argument("--lambda", dest="lam", type=float, default=1.0)
    s.add_argument("--epsilon", type=float, default=0.25)
    s.add_argument("--delta", type=float, default=None)
    s.add_argument("--kappa", type=float, default=1.0)
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("--mode", choices=("exact", "fd"), default="exact", help="Jacobians in closed form or by finite differences")
    s.set_defaults(func=cmd_verify_forms)

    s = sub.add_parser("classes", parents=[common], help="list exceptional classes for k points")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--sorted-only", action="store_true", help="one representative per permutation orbit")
    s.set_defaults(func=cmd_classes)

    s = sub.add_parser("genpos", parents=[common], help="general position of rational point configurations")
    s.add_argument("action", choices=("check", "perturb"))
    s.add_argument("--file", required=True)
    s.add_argument("--radius", type=_rational, default=Fraction(1, 100))
    s.add_argument("--depth", type=int, default=projective.DEFAULT_AUDIT_DEPTH, help="Cremona audit depth")
    s.set_defaults(func=cmd_genpos)

    s = sub.add_parser("pack", parents=[common], help="packing numbers and feasibility")
    s.add_argument("table", nargs="?", choices=("table",), help="print p_k for k = 1..8")
    s.add_argument("--k", type=int)
    s.add_argument("--radii-sq", help="comma separated squared radii, e.g. 2/5,2/5,2/5")
    s.add_argument("--format", choices=("json", "csv", "md"), default="json")
    s.set_defaults(func=cmd_pack)

    s = sub.add_parser("paper-check", parents=[common], help="run the acceptance suite")
    s.add_argument("--quiet", action="store_true")
    s.set_defaults(func=cmd_paper_check)
    return p


def _emit(text: str, path: Optional[str]):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    try:
        seed = args.seed if args.seed is not None else default_seed()
        cfg = RunConfig(seed=seed, tol=getattr(args, "tol", 1e-8), samples=getattr(args, "samples", 100),
                        output_format=getattr(args, "format", "json"), output_path=args.output)
        inputs, results, ok = args.func(args, cfg)
    except (UsageError, io.SchemaError, projective.GeometryError, OSError) as e:
        print(f"sympack: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if args.command == "pack" and args.table and cfg.output_format in ("csv", "md"):
        _emit(packer.format_table(packer.packing_table(), cfg.output_format), cfg.output_path)
        return EXIT_OK
    stamp = None if args.no_timestamp else _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    rep = Report(" ".join(["sympack"] + list(argv if argv is not None else sys.argv[1:])),
                 _jsonable(inputs), _jsonable(results), {"pass": bool(ok)}, stamp)
    _emit(rep.to_json(), cfg.output_path)
    return EXIT_OK if ok else EXIT_FAIL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

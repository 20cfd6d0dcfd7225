"""``leolab`` command line.

Exit codes: 0 success, 1 verification failure, 2 usage, input or I/O error.
The default numerical tolerance is read from ``LEOLAB_TOL``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import dfs3, dfs4, schemas
from .basis import CPERP, ErrorClass
from .decoupling import BathModel, PulseSchedule, random_leakage_operator, simulate_open_system
from .error_decomp import (
    decompose_error,
    dm_error,
    paper_check,
    product_error,
    scalar_error,
    tensor_error,
)
from .operators import DEFAULT_TOL, collective
from .serialize import dumps, jsonable, operator_from_dict, operator_to_dict
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DROP_NAMES = {
    "leakage": {ErrorClass.LEAKAGE},
    "cperp": set(CPERP),
    "stabilizer": {ErrorClass.STABILIZER},
    "collective": {ErrorClass.COLLECTIVE},
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    """Validated ``simulate`` configuration."""

    dfs: int
    bath_dim: int
    seed: int
    coupling: str | dict
    t: float
    n_list: list[int]
    leo_method: str = "canonical"
    n_couplings: int = 2
    system_hamiltonian: str | dict = "zero"
    raw: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        schemas.validate(d, "simulate_config.schema.json")
        b, s = d["bath"], d["schedule"]
        cfg = cls(
            dfs=d["dfs"],
            bath_dim=b["dim"],
            seed=b["seed"],
            coupling=b["coupling"],
            t=float(s["t"]),
            n_list=list(s["n_list"]),
            leo_method=d.get("leo_method", "canonical"),
            n_couplings=b.get("n_couplings", 2),
            system_hamiltonian=d.get("system_hamiltonian", "zero"),
            raw=d,
        )
        if cfg.dfs == 3 and cfg.leo_method != "canonical":
            raise schemas.SchemaError([("/leo_method", "the three-qubit code only has the canonical LEO")])
        return cfg


def _leo(dfs: int, method: str):
    if dfs == 3:
        if method != "canonical":
            raise UsageError("the three-qubit code only supports --method canonical")
        return dfs3.canonical_leo3()
    return {"canonical": dfs4.canonical_leo4, "s2": dfs4.leo4,
            "modified-z": dfs4.leo4_from_modified_z}[method]()


def _partition(dfs: int):
    return dfs3.partition3() if dfs == 3 else dfs4.partition4()


def _write(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


# ---- commands ----------------------------------------------------------------


def cmd_basis(args) -> int:
    b = dfs3.build_basis64() if args.dfs == 3 else dfs4.build_basis256()
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "name", "class", "display", "display_scale", "hs_norm"])
        for k, e in enumerate(b):
            w.writerow([k, e.name, e.error_class.value, e.display, repr(e.display_scale),
                        repr(float(f"{e.norm:.15g}"))])
        _write(buf.getvalue(), args.output)
        return EXIT_OK
    doc = {
        "dfs": args.dfs,
        "count": len(b),
        "frame": "dfs",
        "elements": [
            {
                "index": k,
                "name": e.name,
                "class": e.error_class.value,
                "display": e.display,
                "display_scale": e.display_scale,
                "hs_norm": e.norm,
                "matrix": operator_to_dict(e.raw),
            }
            for k, e in enumerate(b)
        ],
    }
    _write(dumps(doc), args.output)
    return EXIT_OK


def cmd_states(args) -> int:
    if args.dfs == 3:
        labels, u = dfs3.STATE_LABELS, dfs3.udfs3()
    else:
        labels, u = dfs4.STATE_LABELS, dfs4.udfs4()
    doc = {
        "dfs": args.dfs,
        "basis": "computational, qubit 1 most significant, |0> = spin up",
        "code_dim": _partition(args.dfs).code_dim,
        "states": [{"label": l, "re": v.real, "im": v.imag} for l, v in zip(labels, u)],
    }
    _write(dumps(doc), args.output)
    return EXIT_OK


def cmd_leo(args) -> int:
    leo = _leo(args.dfs, args.method)
    doc = {
        "dfs": args.dfs,
        "method": args.method,
        "generator": leo.generator,
        "phase": leo.phase,
        "max_commutator_non_leakage": leo.max_commutator,
        "max_anticommutator_leakage": leo.max_anticommutator,
        "parity_residual": leo.parity_residual(),
        "unitary": operator_to_dict(leo.unitary),
        "frame_form": operator_to_dict(leo.frame_form()),
    }
    _write(dumps(doc), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_suite(args.suite)
    if args.json:
        _write(dumps([{"name": r.name, "passed": r.passed, "residual": r.residual,
                       "detail": r.detail} for r in results]), args.output)
    else:
        lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name}  residual={r.residual:.3e}"
                 for r in results]
        n_fail = sum(not r.passed for r in results)
        lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
        _write("\n".join(lines) + "\n", args.output)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def _system_hamiltonian(cfg: RunConfig, dim: int) -> np.ndarray:
    h = cfg.system_hamiltonian
    if isinstance(h, dict):
        m = operator_from_dict(h)
    elif h == "zero":
        m = np.zeros((dim, dim), dtype=complex)
    else:
        ops = dfs3.logical_ops3() if cfg.dfs == 3 else dfs4.logical_ops4()
        m = ops[2] if h == "logical_z" else ops[0]
    if m.shape[0] != dim:
        raise schemas.SchemaError([("/system_hamiltonian", f"expected dimension {dim}, got {m.shape[0]}")])
    return m


def _couplings(cfg: RunConfig, p) -> list[np.ndarray]:
    c = cfg.coupling
    n = p.total_dim
    if isinstance(c, dict):
        m = operator_from_dict(c)
        if m.shape[0] != n:
            raise schemas.SchemaError([("/bath/coupling", f"expected dimension {n}, got {m.shape[0]}")])
        return [m]
    if c == "none":
        return [np.zeros((n, n), dtype=complex)]
    if c == "collective":
        return [collective(cfg.dfs, a) for a in "xyz"]
    rng = np.random.default_rng(cfg.seed)
    return [random_leakage_operator(p, rng) for _ in range(cfg.n_couplings)]


def run_simulation(cfg: RunConfig):
    p = _partition(cfg.dfs)
    bath = BathModel.random(_couplings(cfg, p), dim=cfg.bath_dim, seed=cfg.seed)
    h_s = _system_hamiltonian(cfg, p.total_dim)
    leo = _leo(cfg.dfs, cfg.leo_method)
    return simulate_open_system(bath, h_s, PulseSchedule(leo, cfg.t, 1), p, cfg.n_list)


def cmd_simulate(args) -> int:
    try:
        with open(args.config) as fh:
            raw = json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read config: {e}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"config is not valid JSON: {e}") from None
    cfg = RunConfig.from_dict(raw)
    rep = run_simulation(cfg)
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "leakage", "fidelity"])
        for n, l, f in rep.rows():
            w.writerow([n, repr(float(f"{l:.15g}")), repr(float(f"{f:.15g}"))])
        _write(buf.getvalue(), args.output)
    else:
        doc = {"config": raw, "report": rep.to_dict(timing=args.timing)}
        schemas.validate(jsonable(doc), "simulation_report.schema.json")
        _write(dumps(doc), args.output)
    return EXIT_OK


def _vec(text: str | None, name: str, default=None) -> np.ndarray:
    if text is None:
        if default is None:
            raise UsageError(f"--{name} is required for this error form")
        return np.asarray(default, dtype=float)
    try:
        v = np.array([float(x) for x in text.split(",")])
    except ValueError:
        raise UsageError(f"--{name} must be three comma-separated numbers") from None
    if v.shape != (3,):
        raise UsageError(f"--{name} must have three components")
    return v


def _pair(text: str, n: int) -> tuple[int, int]:
    try:
        i, j = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError("--pair must look like 1,2") from None
    if not (1 <= i <= n and 1 <= j <= n and i != j):
        raise UsageError(f"--pair {text} is out of range for {n} qubits")
    return i, j


def _drop(text: str) -> set:
    out = set()
    for tok in filter(None, (t.strip() for t in text.split(","))):
        if tok not in DROP_NAMES:
            raise UsageError(f"unknown --drop entry {tok!r}; choose from {sorted(DROP_NAMES)}")
        out |= DROP_NAMES[tok]
    return out


def _paper_check_output(args) -> int:
    results = paper_check(tol=args.tol)
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name}  residual={r.residual:.3e}" for r in results]
    _write("\n".join(lines) + "\n", args.output)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_decompose(args) -> int:
    if args.paper_check:
        return _paper_check_output(args)
    if args.error is None:
        raise UsageError("--error is required unless --paper-check is given")
    n = args.dfs
    pair = _pair(args.pair, n)
    if args.error == "dm":
        op = dm_error(_vec(args.beta, "beta"), pair, n)
    elif args.error == "product":
        op = product_error(_vec(args.gamma1, "gamma1"), _vec(args.gamma2, "gamma2"), pair, n)
    elif args.error == "scalar":
        op = scalar_error(args.g0, pair, n)
    else:
        if not args.tensor_file:
            raise UsageError("--tensor-file is required for --error tensor-file")
        try:
            with open(args.tensor_file) as fh:
                g = np.array(json.load(fh), dtype=float)
        except (OSError, ValueError) as e:
            raise UsageError(f"cannot read tensor file: {e}") from None
        if g.shape != (3, 3):
            raise UsageError("tensor file must hold a 3x3 array")
        op = tensor_error(g, pair, n)
    basis = dfs3.build_basis64() if n == 3 else dfs4.build_basis256()
    rep = decompose_error(op, basis, _drop(args.drop), args.tol,
                          metadata={"error": args.error, "pair": list(pair)})
    doc = jsonable(rep.to_dict())
    schemas.validate(doc, "decomposition_report.schema.json")
    _write(json.dumps(doc, indent=2) + "\n", args.output)
    return EXIT_OK


# ---- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="leolab", description=__doc__.splitlines()[0])
    ap.add_argument("--tol", type=float, default=DEFAULT_TOL,
                    help="numerical tolerance (default from LEOLAB_TOL or 1e-10)")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        sp.add_argument("-o", "--output", help="write to this file instead of stdout")
        return sp

    sp = add("basis", cmd_basis, "dump the classified operator basis")
    sp.add_argument("--dfs", type=int, choices=(3, 4), required=True)
    sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = add("states", cmd_states, "dump the DFS-adapted basis states")
    sp.add_argument("--dfs", type=int, choices=(3, 4), required=True)

    sp = add("leo", cmd_leo, "construct an LEO and print its grading certificate")
    sp.add_argument("--dfs", type=int, choices=(3, 4), required=True)
    sp.add_argument("--method", choices=("canonical", "s2", "modified-z"), default="canonical")

    sp = add("verify", cmd_verify, "run a verification suite")
    sp.add_argument("--suite", choices=("all", *SUITES), default="all")
    sp.add_argument("--json", action="store_true")

    sp = add("simulate", cmd_simulate, "run a system-bath decoupling simulation")
    sp.add_argument("--config", required=True)
    sp.add_argument("--csv", action="store_true", help="emit n, leakage, fidelity rows")
    sp.add_argument("--timing", action="store_true", help="include wall-clock time (not reproducible)")

    sp = add("decompose", cmd_decompose, "decompose an exchange error over a DFS basis")
    sp.add_argument("--dfs", type=int, choices=(3, 4), default=3)
    sp.add_argument("--pair", default="1,2")
    sp.add_argument("--error", choices=("dm", "product", "scalar", "tensor-file"))
    sp.add_argument("--beta")
    sp.add_argument("--gamma1")
    sp.add_argument("--gamma2")
    sp.add_argument("--g0", type=float, default=1.0)
    sp.add_argument("--tensor-file")
    sp.add_argument("--drop", default="leakage,cperp",
                    help=f"comma list from {sorted(DROP_NAMES)}; empty keeps everything")
    sp.add_argument("--paper-check", action="store_true",
                    help="compare against the reference decompositions; exit 1 on mismatch")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"leolab {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except schemas.SchemaError as e:
        for ptr, msg in e.errors:
            print(f"leolab {args.command}: config error at {ptr}: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"leolab {args.command}: I/O error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

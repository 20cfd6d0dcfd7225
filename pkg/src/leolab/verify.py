"""Named numerical checks grouped into suites for ``leolab verify``."""

from __future__ import annotations

from typing import Callable

import numpy as np

from . import dfs3, dfs4
from .basis import DfsBasis, ErrorClass, classify, verify_stabilizer
from .decoupling import (
    BathModel,
    PulseSchedule,
    parity_kick_sweep,
    random_hermitian,
    random_leakage_operator,
    simulate_open_system,
    symmetrize_logical_group,
    twirl_residual,
)
from .error_decomp import CheckResult, paper_check
from .leakage import (
    Leo,
    LeoConstructionError,
    block_partition,
    equal_up_to_phase,
    grading_residuals,
    make_canonical_leo,
)
from .operators import anticommutator, collective, frob

SEED = 2024


def _check(name, residual, tol, **detail) -> CheckResult:
    return CheckResult(name, bool(residual < tol), float(residual), detail)


def _random_ops(dim, count, rng):
    return [rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)) for _ in range(count)]


def _gram_offdiag(basis: DfsBasis) -> float:
    s = basis.orthonormal_stack().reshape(len(basis), -1)
    g = s.conj() @ s.T
    return float(np.max(np.abs(g - np.eye(len(basis)))))


def _resynthesis(basis: DfsBasis, count: int, rng) -> float:
    worst = 0.0
    for m in _random_ops(basis.partition.total_dim, count, rng):
        worst = max(worst, classify(m, basis).residual)
    return worst


def code_block_target(logical, gauge_dim: int, dim: int) -> np.ndarray:
    """``diag(logical (x) I_gauge, 0)`` as a ``dim x dim`` frame matrix."""
    blk = np.kron(np.asarray(logical, dtype=complex), np.eye(gauge_dim))
    out = np.zeros((dim, dim), dtype=complex)
    out[: blk.shape[0], : blk.shape[0]] = blk
    return out


def basis_grading(basis: DfsBasis, leo: Leo) -> tuple[float, float]:
    """Grading residuals of ``leo`` over the basis: non-leakage vs leakage elements."""
    even = [basis.physical(e.name) for e in basis if e.error_class is not ErrorClass.LEAKAGE]
    odd = [basis.physical(e.name) for e in basis.of_class(ErrorClass.LEAKAGE)]
    return grading_residuals(leo.unitary, basis.partition, even, odd)


def collective_identity_residuals() -> dict[str, float]:
    """``||U S_a U^dag - tilde form||_F`` for the corrected and the printed sums."""
    out = {}
    for a in "xyz":
        phys = dfs3.collective_frame(a)
        key = "S_" + a.upper()
        out[key] = frob(phys - dfs3.tilde_sum(dfs3.COLLECTIVE_TILDE[key]))
        out[key + "_printed"] = frob(phys - dfs3.tilde_sum(dfs3.COLLECTIVE_PRINTED[key]))
    return out


def suite_dfs3() -> list[CheckResult]:
    rng = np.random.default_rng(SEED)
    b = dfs3.build_basis64()
    p = b.partition
    x, y, z = dfs3.logical_ops3()
    out = [
        _check("udfs3_unitary", frob(p.basis_change @ p.basis_change.conj().T - np.eye(8)), 1e-12),
        _check("basis64_count", abs(len(b) - 64), 0.5),
        _check("basis64_gram_offdiag", _gram_offdiag(b), 1e-10),
        _check("basis64_resynthesis", _resynthesis(b, 100, rng), 1e-10),
    ]
    for name, op, blk in (
        ("logical_x_block", x, [[0, 1], [1, 0]]),
        ("logical_y_block", y, [[0, -1j], [1j, 0]]),
        ("logical_z_block", z, [[1, 0], [0, -1]]),
    ):
        target = code_block_target(blk, 2, 8)
        out.append(_check(name, np.max(np.abs(p.to_frame(op) - target)), 1e-12))
    res = collective_identity_residuals()
    for a in "XYZ":
        out.append(_check(f"collective_identity_S_{a}", res[f"S_{a}"], 1e-10,
                          printed_form_residual=res[f"S_{a}_printed"]))
    for a in "XY":
        names = [f"S_{a}{k}" for k in (1, 2, 3)]
        m = np.array([dfs3.collective_vector(a)] + [dfs3.coefficient_vector(n) for n in names])
        out.append(_check(f"so4_completion_{a}", np.max(np.abs(m @ m.T - np.eye(4))), 1e-10))
        for n in names:
            ok = verify_stabilizer(b.physical(n), p)
            out.append(CheckResult(f"stabilizer_{n}", ok, 0.0))
    zp = b["sigma_z_perp"].raw
    out.append(_check(
        "sigma_z_perp_orthogonal",
        max(abs(np.vdot(zp, b["S_Z"].raw)), abs(np.vdot(zp, b["sigma_z"].raw))),
        1e-10,
    ))
    diag = np.array([np.diag(b[n].raw) for n in dfs3.DIAGONAL_ELEMENTS])
    out.append(CheckResult("cartan_span", int(np.linalg.matrix_rank(diag)) == 8, 0.0))
    summ = classify(collective(3, "x"), b).summary
    bad = summ & {ErrorClass.LOGICAL, ErrorClass.LEAKAGE, ErrorClass.LOGICAL_COLLECTIVE_PRODUCT}
    out.append(CheckResult("collective_x_classification", not bad, 0.0,
                           {"classes": sorted(c.value for c in summ)}))
    return out


def suite_dfs4() -> list[CheckResult]:
    rng = np.random.default_rng(SEED)
    st = dfs4.dfs4_states()
    u = st.udfs
    p = dfs4.partition4()
    out = [_check("states_orthonormal", np.max(np.abs(u @ u.conj().T - np.eye(16))), 1e-12)]
    ann = max(frob(collective(4, a) @ v) for a in "xyz" for v in st.code)
    out.append(_check("code_annihilated_by_collective", ann, 1e-12))
    s2 = np.real(np.diag(p.to_frame(dfs4.spin_squared_half4())))
    want = np.array([0] * 2 + [1] * 9 + [3] * 5)
    out.append(_check("spin_squared_half_spectrum", np.max(np.abs(s2 - want)), 1e-12))
    x, y, z = dfs4.logical_ops4()
    sx = np.array([[0, 1], [1, 0]])
    sz = np.diag([1, -1])
    for name, op, s in (("logical_x_code_block", x, sx), ("logical_z_code_block", z, sz)):
        bb, _, d, f = block_partition(op, p)
        out.append(_check(name, max(np.max(np.abs(bb - s)), np.max(np.abs(d)), np.max(np.abs(f))), 1e-12))
    zperp = np.real(np.diag(p.to_frame(z)))[2:]
    out.append(CheckResult("logical_z_perp_eigenvalues", True, 0.0,
                           {"eigenvalues": dict(zip(dfs4.STATE_LABELS[2:], np.round(zperp, 12)))}))
    cx, cz = dfs4.canonical_ops4()
    for name, op, s in (("canonical_x_form", cx, sx), ("canonical_z_form", cz, sz)):
        target = code_block_target(s, 1, 16)
        out.append(_check(name, np.max(np.abs(p.to_frame(op) - target)), 1e-10))
        out.append(_check(name.replace("form", "square"), frob(op @ op - p.code_projector()), 1e-10))
    bb, _, _, _ = block_partition(anticommutator(cx, cz), p)
    out.append(_check("canonical_anticommute_on_code", frob(bb), 1e-10))
    b4 = dfs4.build_basis256()
    out.append(_check("basis256_count", abs(len(b4) - 256), 0.5))
    out.append(_check("basis256_gram_offdiag", _gram_offdiag(b4), 1e-10))
    out.append(_check("basis256_resynthesis", _resynthesis(b4, 20, rng), 1e-10))
    return out


def suite_leo() -> list[CheckResult]:
    out = []
    leo3 = dfs3.canonical_leo3()
    c, a = basis_grading(dfs3.build_basis64(), leo3)
    out.append(_check("leo3_commutes_non_leakage", c, 1e-10))
    out.append(_check("leo3_anticommutes_leakage", a, 1e-10))
    out.append(_check("leo3_parity", leo3.parity_residual(), 1e-10))
    leo4 = dfs4.leo4()
    c, a = basis_grading(dfs4.build_basis256(), leo4)
    out.append(_check("leo4_commutes_non_leakage", c, 1e-10))
    out.append(_check("leo4_anticommutes_leakage", a, 1e-10))
    diff, phase = equal_up_to_phase(leo4.unitary, dfs4.leo4_from_modified_z().unitary)
    out.append(_check("leo4_s2_vs_modified_z", diff, 1e-10, relative_phase=phase))
    try:
        make_canonical_leo(dfs4.logical_ops4()[2], dfs4.partition4())
        out.append(CheckResult("rejects_noncanonical_z4", False, 0.0))
    except LeoConstructionError as e:
        out.append(CheckResult("rejects_noncanonical_z4", e.condition == "perp_action", e.residual,
                               {"condition": e.condition, **e.details}))
    try:
        make_canonical_leo(np.zeros((8, 8)), dfs3.partition3())
        out.append(CheckResult("rejects_zero_generator", False, 0.0))
    except LeoConstructionError as e:
        out.append(CheckResult("rejects_zero_generator", e.condition == "code_square", e.residual))
    r = make_canonical_leo(dfs3.logical_ops3()[2], dfs3.partition3())
    out.append(_check("accepts_z3", frob(r.unitary - leo3.unitary), 1e-10))
    return out


def criterion7(seed: int = SEED, t: float = 0.2):
    """Parity-kick sweep on a leakage-only system-bath coupling."""
    p = dfs3.partition3()
    rng = np.random.default_rng(seed)
    bath = BathModel.random([random_leakage_operator(p, rng) for _ in range(2)], dim=2, seed=seed)
    h = bath.hamiltonian(np.zeros((8, 8)))
    return parity_kick_sweep(h, dfs3.canonical_leo3(), t, [2**k for k in range(8)])


def suite_decoupling() -> list[CheckResult]:
    out = []
    rep = criterion7()
    out.append(_check("parity_kick_slope", abs(rep.slope + 1.0), 0.15, slope=rep.slope))
    out.append(_check("parity_kick_limit_n128", rep.limit_errors[-1], 1e-3))
    mono = all(a >= b for a, b in zip(rep.leakage, rep.leakage[1:]))
    out.append(CheckResult("parity_kick_monotone", mono, 0.0))
    rng = np.random.default_rng(SEED)
    p = dfs3.partition3()
    ops = dfs3.logical_ops3()
    worst = max(twirl_residual(symmetrize_logical_group(random_hermitian(8, rng), ops, p), p)
                for _ in range(50))
    out.append(_check("logical_group_twirl", worst, 1e-10))
    leo = dfs3.canonical_leo3()
    bath = BathModel.random([collective(3, a) for a in "xyz"], dim=2, seed=SEED)
    r = simulate_open_system(bath, np.zeros((8, 8)), PulseSchedule(leo, 0.5, 1), p)
    out.append(_check("collective_fidelity_unpulsed", abs(1 - r.unpulsed_fidelity), 1e-8))
    bath = BathModel.random([random_leakage_operator(p, rng) for _ in range(2)], dim=2, seed=SEED)
    r = simulate_open_system(bath, np.zeros((8, 8)), PulseSchedule(leo, 0.2, 1), p, [1, 8])
    ratio = r.leakage[0] / r.leakage[1]
    out.append(_check("open_system_population_ratio", abs(ratio - 64) / 64, 0.1, ratio=ratio))
    out.append(_check("open_system_norm", r.norm_error, 1e-10))
    return out


def suite_errors() -> list[CheckResult]:
    return paper_check()


SUITES: dict[str, Callable[[], list[CheckResult]]] = {
    "dfs3": suite_dfs3,
    "dfs4": suite_dfs4,
    "leo": suite_leo,
    "decoupling": suite_decoupling,
    "errors": suite_errors,
}


def run_suite(name: str) -> list[CheckResult]:
    if name == "all":
        return [c for fn in SUITES.values() for c in fn()]
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name]()

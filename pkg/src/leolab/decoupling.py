"""Bang-bang decoupling: parity kicks, average Hamiltonians, logical-group twirls
and system-bath dynamics with interleaved leakage-elimination pulses.

Time convention: a parity-kick cycle is ``exp(-iH tau) R^dag exp(-iH tau) R``
with ``tau = t / (2 n)``, so ``n`` cycles use total free-evolution time ``t``
and converge to ``exp(-i H_even t)`` with ``H_even = (H + R H R^dag) / 2``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .leakage import BlockPartition, Leo, block_partition, leakage_norm, logical_factor_residual
from .operators import DEFAULT_TOL, as_operator, expm_hermitian, frob, is_unitary


@dataclass(frozen=True)
class PulseSchedule:
    leo: Leo
    t: float
    n: int = 1

    def __post_init__(self):
        if not np.isfinite(self.t) or self.t < 0:
            raise ValueError(f"total time must be finite and >= 0, got {self.t}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"cycle count must be a positive integer, got {self.n}")

    @property
    def tau(self) -> float:
        return self.t / (2 * self.n)


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Gaussian Hermitian matrix scaled to unit spectral radius."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h = (a + a.conj().T) / 2
    return h / np.max(np.abs(np.linalg.eigvalsh(h)))


@dataclass
class BathModel:
    """``H = H_S (x) I + I (x) H_B + sum_g S_g (x) B_g`` on system (x) bath."""

    dim: int
    couplings: list[tuple[np.ndarray, np.ndarray]]
    h_b: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        self.h_b = as_operator(self.h_b)
        if self.h_b.shape[0] != self.dim:
            raise ValueError("bath Hamiltonian dimension does not match bath dim")
        if frob(self.h_b - self.h_b.conj().T) > DEFAULT_TOL:
            raise ValueError("bath Hamiltonian is not Hermitian")
        checked = []
        for s, b in self.couplings:
            s, b = as_operator(s), as_operator(b)
            if b.shape[0] != self.dim:
                raise ValueError("bath operator dimension does not match bath dim")
            if frob(b - b.conj().T) > DEFAULT_TOL or frob(s - s.conj().T) > DEFAULT_TOL:
                raise ValueError("coupling operators must be Hermitian")
            checked.append((s, b))
        self.couplings = checked

    @classmethod
    def random(cls, system_ops: Sequence, dim: int = 2, seed: int = 0,
               bath_scale: float = 1.0) -> "BathModel":
        """Couple each system operator to a seeded random Hermitian bath operator."""
        rng = np.random.default_rng(seed)
        h_b = bath_scale * random_hermitian(dim, rng)
        couplings = [(as_operator(s), random_hermitian(dim, rng)) for s in system_ops]
        return cls(dim, couplings, h_b, seed)

    def hamiltonian(self, h_s) -> np.ndarray:
        h_s = as_operator(h_s)
        n = h_s.shape[0]
        for s, _ in self.couplings:
            if s.shape[0] != n:
                raise ValueError("system operator dimension mismatch")
        h = np.kron(h_s, np.eye(self.dim)) + np.kron(np.eye(n), self.h_b)
        for s, b in self.couplings:
            h = h + np.kron(s, b)
        return h


@dataclass
class SimulationReport:
    """Per-``n`` results of a decoupling run.

    ``leakage`` holds the Frobenius norm of the leakage blocks of ``U_eff``
    for closed runs and the leaked population for open-system runs.
    ``fidelities`` are logical entanglement fidelities against the ideal
    evolution, ``limit_errors`` are ``||U_eff - U_limit||_F``.
    """

    n_values: list[int]
    t: float
    leakage: list[float]
    fidelities: list[float]
    limit_errors: list[float] = field(default_factory=list)
    slope: float | None = None
    unpulsed_leakage: float | None = None
    unpulsed_fidelity: float | None = None
    norm_error: float = 0.0
    wall_time: float | None = None
    metric: str = "leakage_norm"

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "metric": self.metric,
            "t": self.t,
            "n_values": list(self.n_values),
            "leakage": list(self.leakage),
            "fidelities": list(self.fidelities),
            "limit_errors": list(self.limit_errors),
            "slope": self.slope,
            "unpulsed_leakage": self.unpulsed_leakage,
            "unpulsed_fidelity": self.unpulsed_fidelity,
            "norm_error": self.norm_error,
        }
        if timing:
            d["wall_time"] = self.wall_time
        return d

    def rows(self):
        return list(zip(self.n_values, self.leakage, self.fidelities))


def effective_hamiltonian(h, pulses: Sequence) -> np.ndarray:
    """Average ``(1/N) sum_k U_k h U_k^dag`` over the pulse set."""
    h = as_operator(h)
    if not pulses:
        raise ValueError("need at least one pulse")
    acc = np.zeros_like(h)
    for u in pulses:
        u = as_operator(u)
        if not is_unitary(u, 1e-9):
            raise ValueError("pulse is not unitary")
        acc = acc + u @ h @ u.conj().T
    return acc / len(pulses)


def _lift(r: np.ndarray, dim: int) -> np.ndarray:
    """Act with a system operator on ``system (x) bath`` when ``dim`` is larger."""
    if dim == r.shape[0]:
        return r
    if dim % r.shape[0]:
        raise ValueError(f"LEO dimension {r.shape[0]} does not divide {dim}")
    return np.kron(r, np.eye(dim // r.shape[0]))


def even_part(h, r) -> np.ndarray:
    r = _lift(as_operator(r), as_operator(h).shape[0])
    return 0.5 * (h + r @ h @ r.conj().T)


def _kick_unitary(h, r, t: float, n: int) -> np.ndarray:
    tau = t / (2 * n)
    u = expm_hermitian(h, tau)
    cycle = u @ r.conj().T @ u @ r
    return np.linalg.matrix_power(cycle, n)


def _partition_for(h: np.ndarray, p: BlockPartition) -> BlockPartition:
    if h.shape[0] == p.total_dim:
        return p
    return p.with_bath(h.shape[0] // p.total_dim)


def loglog_slope(n_values, values) -> float | None:
    """Least-squares slope of ``log(values)`` against ``log(n)``; None if any value is 0."""
    v = np.asarray(values, dtype=float)
    if len(v) < 2 or np.any(v <= 0):
        return None
    return float(np.polyfit(np.log(n_values), np.log(v), 1)[0])


def parity_kick(h, schedule: PulseSchedule):
    """Parity-kick propagator ``(e^{-iH tau} R^dag e^{-iH tau} R)^n`` and its report.

    ``h`` may live on system (x) bath; the LEO then acts as ``R (x) I``.
    """
    h = as_operator(h)
    if frob(h - h.conj().T) > DEFAULT_TOL * max(1.0, frob(h)):
        raise ValueError("Hamiltonian is not Hermitian")
    t0 = time.perf_counter()
    r = _lift(schedule.leo.unitary, h.shape[0])
    p = _partition_for(h, schedule.leo.partition)
    u = _kick_unitary(h, r, schedule.t, schedule.n)
    limit = expm_hermitian(even_part(h, r), schedule.t)
    report = SimulationReport(
        n_values=[schedule.n],
        t=schedule.t,
        leakage=[leakage_norm(u, p)],
        fidelities=[_unitary_overlap(u, limit)],
        limit_errors=[frob(u - limit)],
        norm_error=frob(u.conj().T @ u - np.eye(u.shape[0])),
        wall_time=time.perf_counter() - t0,
    )
    return u, report


def parity_kick_sweep(h, leo: Leo, t: float, n_values: Sequence[int]) -> SimulationReport:
    """Run :func:`parity_kick` over ``n_values`` and fit the log-log leakage slope."""
    t0 = time.perf_counter()
    leak, fid, lim, norm = [], [], [], 0.0
    for n in n_values:
        _, rep = parity_kick(h, PulseSchedule(leo, t, int(n)))
        leak += rep.leakage
        fid += rep.fidelities
        lim += rep.limit_errors
        norm = max(norm, rep.norm_error)
    return SimulationReport(
        n_values=[int(n) for n in n_values],
        t=t,
        leakage=leak,
        fidelities=fid,
        limit_errors=lim,
        slope=loglog_slope(n_values, leak),
        norm_error=norm,
        wall_time=time.perf_counter() - t0,
    )


def _unitary_overlap(u, v) -> float:
    """``|Tr(v^dag u)|^2 / d^2``: 1 exactly when ``u`` equals ``v`` up to phase."""
    d = u.shape[0]
    return float(abs(np.trace(v.conj().T @ u)) ** 2 / d**2)


# ---- logical-group symmetrization -----------------------------------------

_PAULI_BLOCKS = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def logical_pulses(logical_paulis, p: BlockPartition, tol: float = 1e-9):
    """``{I, exp(-i pi/2 L)}`` for logical ``L`` acting as Paulis on the code.

    Each ``L`` must be block diagonal with code block ``sigma (x) I_gauge``;
    the resulting pulses have code blocks ``{I, -i sigma_x, -i sigma_y, -i sigma_z}``.

    Raises
    ------
    ValueError
        If some ``L`` couples code and complement or its code block is not a Pauli.
    """
    pulses = [np.eye(p.total_dim, dtype=complex)]
    g = np.eye(p.gauge_dim)
    for axis, op in zip("xyz", logical_paulis):
        b, _, d, f = block_partition(op, p)
        if np.sqrt(frob(d) ** 2 + frob(f) ** 2) > tol:
            raise ValueError(f"logical {axis.upper()} couples code and complement")
        if frob(b - np.kron(_PAULI_BLOCKS[axis], g)) > tol:
            raise ValueError(f"logical {axis.upper()} does not act as sigma_{axis} on the code")
        pulses.append(expm_hermitian(op, np.pi / 2))
    return pulses


def symmetrize_logical_group(h, logical_paulis, p: BlockPartition) -> np.ndarray:
    """Average ``h`` over the encoded Pauli group realized by ``logical_pulses``.

    The code block of the result has the form ``I_logical (x) M_gauge``.
    """
    return effective_hamiltonian(h, logical_pulses(logical_paulis, p))


def twirl_residual(h, p: BlockPartition) -> float:
    """Distance of the code block of ``h`` from ``I_logical (x) M_gauge``."""
    b, _, _, _ = block_partition(h, p)
    return logical_factor_residual(b, p.logical_dim)


# ---- open-system runs ------------------------------------------------------


def logical_unitary(block, logical_dim: int = 2) -> np.ndarray:
    """Logical factor ``V`` of a code block ``V (x) W`` (nearest Kronecker product)."""
    block = np.asarray(block)
    g = block.shape[0] // logical_dim
    m = block.reshape(logical_dim, g, logical_dim, g).transpose(0, 2, 1, 3)
    m = m.reshape(logical_dim**2, g * g)
    u, s, _ = np.linalg.svd(m)
    v = (u[:, 0] * np.sqrt(s[0])).reshape(logical_dim, logical_dim)
    return v * np.sqrt(logical_dim) / frob(v)


def logical_fidelity(u_joint, v_logical, p: BlockPartition, bath_dim: int) -> float:
    """Logical entanglement fidelity of ``u_joint`` against ``v_logical``.

    A reference qubit is maximally entangled with the logical factor; the
    gauge and bath start in each basis state in turn (results averaged),
    population leaving the code counts as loss.
    """
    ld, g = p.logical_dim, p.gauge_dim
    pb = p.with_bath(bath_dim)
    a = pb.to_frame(u_joint)[: pb.code_dim, : pb.code_dim]
    gb = g * bath_dim
    a = a.reshape(ld, gb, ld, gb)
    # overlap[j, k] = Tr_logical(V^dag A_{j k}) for output gauge-bath j, input k
    ov = np.einsum("ab,ajbk->jk", v_logical.conj(), a)
    return float(np.sum(np.abs(ov) ** 2) / (ld**2 * gb))


def leaked_population(u_joint, p: BlockPartition, bath_dim: int) -> float:
    """Population leaving ``C (x) bath``, averaged over code (x) bath basis inputs."""
    pb = p.with_bath(bath_dim)
    _, _, _, f = block_partition(u_joint, pb)
    return float(frob(f) ** 2 / pb.code_dim)


def _open_run(h, r, t, n, p, b, v_ideal):
    u = _kick_unitary(h, r, t, n) if r is not None else expm_hermitian(h, t)
    return leaked_population(u, p, b), logical_fidelity(u, v_ideal, p, b), u


def simulate_open_system(bath: BathModel, h_s, schedule: PulseSchedule, p: BlockPartition,
                         n_values: Sequence[int] | None = None) -> SimulationReport:
    """Evolve system (x) bath with ``R (x) I`` parity kicks and without pulses.

    The ideal logical evolution is the code block of ``exp(-i H_S,even t)``.
    Reports leaked population and logical fidelity per ``n`` plus the
    unpulsed run, and the worst deviation from unitarity.
    """
    t0 = time.perf_counter()
    h_s = as_operator(h_s)
    if h_s.shape[0] != p.total_dim or schedule.leo.partition.total_dim != p.total_dim:
        raise ValueError("system Hamiltonian, LEO and partition dimensions differ")
    h = bath.hamiltonian(h_s)
    r_sys = schedule.leo.unitary
    ideal = expm_hermitian(even_part(h_s, r_sys), schedule.t)
    v = logical_unitary(block_partition(ideal, p)[0], p.logical_dim)
    r = np.kron(r_sys, np.eye(bath.dim))
    ns = [int(n) for n in (n_values or [schedule.n])]
    leak, fid, norm = [], [], 0.0
    for n in ns:
        lp, f, u = _open_run(h, r, schedule.t, n, p, bath.dim, v)
        leak.append(lp)
        fid.append(f)
        norm = max(norm, float(np.max(np.abs(np.linalg.norm(u, axis=0) - 1))))
    lp0, f0, u0 = _open_run(h, None, schedule.t, 1, p, bath.dim, v)
    norm = max(norm, float(np.max(np.abs(np.linalg.norm(u0, axis=0) - 1))))
    return SimulationReport(
        n_values=ns,
        t=schedule.t,
        leakage=leak,
        fidelities=fid,
        slope=loglog_slope(ns, leak) if len(ns) > 1 else None,
        unpulsed_leakage=lp0,
        unpulsed_fidelity=f0,
        norm_error=norm,
        wall_time=time.perf_counter() - t0,
        metric="leaked_population",
    )


def random_leakage_operator(p: BlockPartition, rng: np.random.Generator) -> np.ndarray:
    """Random Hermitian operator with only code-complement blocks, unit spectral radius,
    in the computational basis."""
    k, n = p.code_dim, p.total_dim
    d = rng.normal(size=(k, n - k)) + 1j * rng.normal(size=(k, n - k))
    m = np.zeros((n, n), dtype=complex)
    m[:k, k:] = d
    m[k:, :k] = d.conj().T
    m /= np.max(np.abs(np.linalg.eigvalsh(m)))
    return p.from_frame(m)

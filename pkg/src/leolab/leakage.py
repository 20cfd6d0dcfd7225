"""Code/complement block structure, Z2 grading and leakage-elimination operators.

An operator written in a code-adapted basis splits as::

    [[B, D],
     [F, C]]

with ``B`` acting on the code, ``C`` on its complement, and ``D``/``F`` the
leakage blocks. A leakage-elimination operator (LEO) is a unitary equal to
``exp(i phi) * diag(-I_code, I_perp)`` in that basis; conjugation by it
flips the sign of the leakage blocks and leaves the rest alone.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .operators import (
    DEFAULT_TOL,
    anticommutator,
    as_operator,
    commutator,
    expm_hermitian,
    frob,
    is_unitary,
)

INTEGER_TOL = 1e-8


class GradedClass(enum.Enum):
    EVEN = "Even"
    ODD = "Odd"
    MIXED = "Mixed"


class LeoConstructionError(ValueError):
    """A candidate generator failed an LEO precondition.

    Attributes
    ----------
    condition : str
        Short machine-readable name of the failed precondition.
    residual : float
        Size of the violation.
    details : dict
        Extra diagnostics, e.g. the offending eigenvalues.
    """

    def __init__(self, condition: str, residual: float, message: str, **details):
        super().__init__(f"{condition}: {message} (residual {residual:.3e})")
        self.condition = condition
        self.residual = float(residual)
        self.details = details


@dataclass(frozen=True)
class BlockPartition:
    """Split of a Hilbert space into a code and its orthogonal complement.

    ``basis_change`` maps computational coordinates to code-adapted ones:
    its first ``code_dim`` rows are the code basis vectors. The code is a
    logical qubit times an optional gauge factor, ``code_dim = 2 * gauge_dim``,
    with the logical index most significant.
    """

    total_dim: int
    code_dim: int
    basis_change: np.ndarray = field(repr=False)
    logical_dim: int = 2

    def __post_init__(self):
        u = as_operator(self.basis_change)
        if u.shape[0] != self.total_dim:
            raise ValueError(f"basis_change is {u.shape}, expected dim {self.total_dim}")
        if not 0 < self.code_dim < self.total_dim:
            raise ValueError("need 0 < code_dim < total_dim")
        if self.code_dim % self.logical_dim:
            raise ValueError("code_dim must be a multiple of logical_dim")
        if not is_unitary(u, 1e-10):
            raise ValueError("basis_change is not unitary")
        u.setflags(write=False)
        object.__setattr__(self, "basis_change", u)

    @property
    def perp_dim(self) -> int:
        return self.total_dim - self.code_dim

    @property
    def gauge_dim(self) -> int:
        return self.code_dim // self.logical_dim

    def to_frame(self, op) -> np.ndarray:
        """Express a computational-basis operator in the code-adapted basis."""
        u = self.basis_change
        return u @ as_operator(op) @ u.conj().T

    def from_frame(self, op) -> np.ndarray:
        u = self.basis_change
        return u.conj().T @ as_operator(op) @ u

    def code_projector(self) -> np.ndarray:
        d = np.zeros(self.total_dim)
        d[: self.code_dim] = 1
        return self.from_frame(np.diag(d))

    def perp_projector(self) -> np.ndarray:
        return np.eye(self.total_dim) - self.code_projector()

    def with_bath(self, bath_dim: int) -> "BlockPartition":
        """Partition of ``system (x) bath`` with the system code tensored with the whole bath."""
        u = np.kron(self.basis_change, np.eye(bath_dim))
        return BlockPartition(
            self.total_dim * bath_dim,
            self.code_dim * bath_dim,
            u,
            self.logical_dim,
        )


def block_partition(op, p: BlockPartition):
    """Return the blocks ``(B, C, D, F)`` of ``op`` in the partition frame."""
    m = as_operator(op)
    if m.shape[0] != p.total_dim:
        raise ValueError(f"operator dim {m.shape[0]} does not match partition dim {p.total_dim}")
    t = p.to_frame(m)
    k = p.code_dim
    return t[:k, :k], t[k:, k:], t[:k, k:], t[k:, :k]


def assemble_blocks(b, c, d, f) -> np.ndarray:
    """Inverse of :func:`block_partition` in the partition frame."""
    return np.block([[b, d], [f, c]])


def leakage_norm(op, p: BlockPartition) -> float:
    """Frobenius norm of the two leakage blocks."""
    _, _, d, f = block_partition(op, p)
    return float(np.sqrt(frob(d) ** 2 + frob(f) ** 2))


def classify_blocks(op, p: BlockPartition, tol: float = DEFAULT_TOL) -> tuple[GradedClass, dict]:
    """Grade ``op`` by its block structure alone, with the block norms.

    ``Even`` when the leakage blocks vanish, ``Odd`` when only they survive.
    """
    b, c, d, f = block_partition(op, p)
    norms = {"code": frob(b), "perp": frob(c), "code_to_perp": frob(f), "perp_to_code": frob(d)}
    scale = max(1.0, frob(op))
    if np.hypot(norms["code_to_perp"], norms["perp_to_code"]) < tol * scale:
        return GradedClass.EVEN, norms
    if np.hypot(norms["code"], norms["perp"]) < tol * scale:
        return GradedClass.ODD, norms
    return GradedClass.MIXED, norms


def logical_factor_residual(block, logical_dim: int = 2) -> float:
    """Distance of a code block from ``I_logical (x) M_gauge``.

    The closest such operator is ``I (x) Tr_logical(block) / logical_dim``.
    """
    block = np.asarray(block)
    g = block.shape[0] // logical_dim
    t = block.reshape(logical_dim, g, logical_dim, g)
    reduced = np.einsum("iaib->ab", t) / logical_dim
    return frob(block - np.kron(np.eye(logical_dim), reduced))


@dataclass(frozen=True)
class Leo:
    """A leakage-elimination operator with its grading certificate."""

    unitary: np.ndarray = field(repr=False)
    phase: complex
    partition: BlockPartition = field(repr=False)
    grading_residuals: tuple[float, float]
    generator: str = ""

    @property
    def max_commutator(self) -> float:
        return self.grading_residuals[0]

    @property
    def max_anticommutator(self) -> float:
        return self.grading_residuals[1]

    def frame_form(self) -> np.ndarray:
        return self.partition.to_frame(self.unitary)

    def parity_residual(self) -> float:
        r = self.unitary
        return frob(r @ r - self.phase**2 * np.eye(r.shape[0]))


def _unit_probes(p: BlockPartition):
    """Hermitian matrix-unit probes split into non-leakage and leakage sets."""
    n, k = p.total_dim, p.code_dim
    even, odd = [], []
    for a in range(n):
        for b in range(a, n):
            e = np.zeros((n, n), dtype=complex)
            e[a, b] = e[b, a] = 1
            y = np.zeros((n, n), dtype=complex)
            if a != b:
                y[a, b], y[b, a] = -1j, 1j
            leak = (a < k) != (b < k)
            for m in (e, y) if a != b else (e,):
                (odd if leak else even).append(p.from_frame(m))
    return even, odd


def grading_residuals(r, p: BlockPartition, even=None, odd=None) -> tuple[float, float]:
    """Max ``||[R, E]||`` over even probes and max ``||{R, L}||`` over odd probes."""
    if even is None or odd is None:
        de, do = _unit_probes(p)
        even = de if even is None else even
        odd = do if odd is None else odd
    c = max((frob(commutator(r, e)) for e in even), default=0.0)
    a = max((frob(anticommutator(r, l)) for l in odd), default=0.0)
    return c, a


def _leo_phase(r, p: BlockPartition) -> complex:
    """Read ``exp(i phi)`` off the complement block of an LEO."""
    _, c, _, _ = block_partition(r, p)
    return complex(np.trace(c) / p.perp_dim)


def _check_leo_form(r, p: BlockPartition, tol: float) -> complex:
    phase = _leo_phase(r, p)
    target = phase * np.diag([-1.0] * p.code_dim + [1.0] * p.perp_dim)
    resid = frob(p.to_frame(r) - target)
    if resid > tol or abs(abs(phase) - 1) > tol:
        raise LeoConstructionError(
            "leo_form", resid, "exponential is not exp(i phi) diag(-I, I)"
        )
    return phase


def grade(op, leo: Leo, tol: float = DEFAULT_TOL) -> GradedClass:
    """Classify ``op`` as even (commutes with the LEO), odd, or mixed."""
    m = as_operator(op)
    r = leo.unitary
    scale = max(1.0, frob(m))
    if frob(commutator(r, m)) < tol * scale:
        return GradedClass.EVEN
    if frob(anticommutator(r, m)) < tol * scale:
        return GradedClass.ODD
    return GradedClass.MIXED


def make_canonical_leo(sigma_l, p: BlockPartition, tol: float = DEFAULT_TOL, name: str = "") -> Leo:
    """LEO ``exp(-i pi sigma_L)`` from a canonical logical operation.

    ``sigma_L`` must be Hermitian, square to the code projector, and
    annihilate the complement.

    Raises
    ------
    LeoConstructionError
        With ``condition`` one of ``"hermitian"``, ``"perp_action"``,
        ``"code_square"`` and the failing residual.
    """
    s = as_operator(sigma_l)
    if s.shape[0] != p.total_dim:
        raise ValueError("sigma_L dimension does not match the partition")
    herm = frob(s - s.conj().T)
    if herm > tol:
        raise LeoConstructionError("hermitian", herm, "sigma_L is not Hermitian")
    _, c, d, f = block_partition(s, p)
    perp = float(np.sqrt(frob(c) ** 2 + frob(d) ** 2 + frob(f) ** 2))
    if perp > tol:
        # report eigenvalues on the complement so non-canonical gates show why they fail
        ev = np.linalg.eigvalsh(0.5 * (c + c.conj().T))
        raise LeoConstructionError(
            "perp_action",
            perp,
            "sigma_L acts on the complement of the code",
            perp_eigenvalues=np.round(ev, 12).tolist(),
        )
    sq = frob(s @ s - p.code_projector())
    if sq > tol:
        raise LeoConstructionError("code_square", sq, "sigma_L^2 differs from the code projector")
    r = expm_hermitian(s, np.pi)
    phase = _check_leo_form(r, p, 1e3 * tol)
    return Leo(r, phase, p, grading_residuals(r, p), name or "canonical")


def _distance_to_integers(values) -> np.ndarray:
    return np.abs(values - np.rint(values))


def make_generalized_leo(h, p: BlockPartition, tol: float = DEFAULT_TOL, name: str = "") -> Leo:
    """LEO ``exp(-i pi h)`` from a block-diagonal generator with integer spectra.

    The code block of ``h`` must have integer eigenvalues of one parity and
    the complement block integers of the other parity.

    Raises
    ------
    LeoConstructionError
        ``"block_diagonal"``, ``"non_integer"`` or ``"parity"`` with the
        offending eigenvalues in ``details``.
    """
    m = as_operator(h)
    herm = frob(m - m.conj().T)
    if herm > tol * max(1.0, frob(m)):
        raise LeoConstructionError("hermitian", herm, "generator is not Hermitian")
    b, c, d, f = block_partition(m, p)
    leak = float(np.sqrt(frob(d) ** 2 + frob(f) ** 2))
    if leak > tol * max(1.0, frob(m)):
        raise LeoConstructionError("block_diagonal", leak, "generator couples code and complement")
    ev_code = np.linalg.eigvalsh(0.5 * (b + b.conj().T))
    ev_perp = np.linalg.eigvalsh(0.5 * (c + c.conj().T))
    for label, ev in (("code", ev_code), ("perp", ev_perp)):
        off = _distance_to_integers(ev)
        if np.any(off > INTEGER_TOL):
            bad = ev[off > INTEGER_TOL]
            raise LeoConstructionError(
                "non_integer",
                float(off.max()),
                f"{label} block has non-integer eigenvalues",
                block=label,
                eigenvalues=bad.tolist(),
            )
    code_par = set(np.rint(ev_code).astype(int) % 2)
    perp_par = set(np.rint(ev_perp).astype(int) % 2)
    if len(code_par) != 1 or len(perp_par) != 1 or code_par == perp_par:
        raise LeoConstructionError(
            "parity",
            0.0,
            "code and complement spectra need uniform, opposite parity",
            code_eigenvalues=np.rint(ev_code).tolist(),
            perp_eigenvalues=np.rint(ev_perp).tolist(),
        )
    r = expm_hermitian(m, np.pi)
    phase = _check_leo_form(r, p, 1e-8)
    return Leo(r, phase, p, grading_residuals(r, p), name or "generalized")


def is_in_commutant(op, generators: Sequence, tol: float = DEFAULT_TOL) -> bool:
    """True if ``op`` commutes with every generator."""
    m = as_operator(op)
    for g in generators:
        g = as_operator(g)
        if frob(commutator(m, g)) > tol * max(1.0, frob(m) * frob(g)):
            return False
    return True


def equal_up_to_phase(a, b) -> tuple[float, complex]:
    """Best-aligned entrywise max difference ``max|a - e^{i t} b|`` and the phase used."""
    a = np.asarray(a)
    b = np.asarray(b)
    ov = np.vdot(b, a)
    ph = ov / abs(ov) if abs(ov) > 0 else 1.0
    return float(np.max(np.abs(a - ph * b))), complex(ph)

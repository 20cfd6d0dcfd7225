"""Dense operator construction for n-qubit Hilbert spaces.

Operators are plain ``numpy`` complex arrays. Qubit 1 is the most
significant bit of the computational index, and ``|0>`` is spin up
(``+1`` eigenstate of ``sigma_z``).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DEFAULT_TOL",
    "PAULI",
    "PauliString",
    "OperatorSum",
    "kron",
    "pauli",
    "single",
    "exchange",
    "collective",
    "total_spin_squared",
    "expm_hermitian",
    "hs_inner",
    "commutator",
    "anticommutator",
    "frob",
    "is_hermitian",
    "is_unitary",
    "as_operator",
]

DEFAULT_TOL = float(os.environ.get("LEOLAB_TOL", "1e-10"))

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

PAULI = {"I": I2, "X": SX, "Y": SY, "Z": SZ}
for _m in PAULI.values():
    _m.setflags(write=False)

_AXES = {"x": SX, "y": SY, "z": SZ}


def as_operator(a) -> np.ndarray:
    """Validate and return ``a`` as a square, finite complex matrix."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"operator must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("operator has non-finite entries")
    return m


def _same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def kron(*ops) -> np.ndarray:
    """Kronecker product of one or more operators, left factor most significant."""
    if not ops:
        raise ValueError("kron needs at least one operator")
    return reduce(np.kron, (np.asarray(o, dtype=complex) for o in ops))


@dataclass(frozen=True)
class PauliString:
    """A tensor product of single-qubit Paulis with a complex prefactor."""

    factors: str
    coefficient: complex = 1.0

    def __post_init__(self):
        factors = self.factors.upper()
        if not factors or set(factors) - set("IXYZ"):
            raise ValueError(f"invalid Pauli string {self.factors!r}")
        object.__setattr__(self, "factors", factors)

    @property
    def n(self) -> int:
        return len(self.factors)

    def matrix(self) -> np.ndarray:
        return self.coefficient * kron(*(PAULI[f] for f in self.factors))


@dataclass
class OperatorSum:
    """Formal linear combination of Pauli strings on a fixed qubit count."""

    terms: list[PauliString] = field(default_factory=list)

    def __post_init__(self):
        ns = {t.n for t in self.terms}
        if len(ns) > 1:
            raise ValueError(f"terms act on different qubit counts: {sorted(ns)}")

    def add(self, coefficient: complex, factors: str) -> "OperatorSum":
        term = PauliString(factors, coefficient)
        if self.terms and term.n != self.terms[0].n:
            raise ValueError("term acts on a different qubit count")
        self.terms.append(term)
        return self

    def matrix(self) -> np.ndarray:
        if not self.terms:
            raise ValueError("empty operator sum")
        return sum(t.matrix() for t in self.terms)


def pauli(n: int, string: str | PauliString) -> np.ndarray:
    """Matrix of a Pauli string on ``n`` qubits, e.g. ``pauli(3, "XII")``."""
    ps = string if isinstance(string, PauliString) else PauliString(string)
    if ps.n != n:
        raise ValueError(f"Pauli string {ps.factors!r} has length {ps.n}, expected {n}")
    return ps.matrix()


def single(n: int, qubit: int, op) -> np.ndarray:
    """Embed a one-qubit operator on ``qubit`` (1-based) of an n-qubit register."""
    if not 1 <= qubit <= n:
        raise ValueError(f"qubit index {qubit} out of range 1..{n}")
    mats = [I2] * n
    mats[qubit - 1] = np.asarray(op, dtype=complex)
    return kron(*mats)


def _check_pair(n: int, i: int, j: int) -> None:
    if not (1 <= i < j <= n):
        raise ValueError(f"need 1 <= i < j <= n, got i={i}, j={j}, n={n}")


def exchange(n: int, i: int, j: int) -> np.ndarray:
    """Exchange (swap) operator ``(I + sigma_i . sigma_j) / 2`` on qubits i < j (1-based)."""
    _check_pair(n, i, j)
    dot = sum(single(n, i, s) @ single(n, j, s) for s in (SX, SY, SZ))
    return 0.5 * (np.eye(2**n, dtype=complex) + dot)


def collective(n: int, axis: str) -> np.ndarray:
    """Unnormalized collective operator ``sum_i sigma_i^axis``."""
    try:
        s = _AXES[axis.lower()]
    except KeyError:
        raise ValueError(f"axis must be one of x, y, z; got {axis!r}") from None
    return sum(single(n, q, s) for q in range(1, n + 1))


def total_spin_squared(n: int) -> np.ndarray:
    """Total spin ``S^2 = (sum_i sigma_i)^2 / 4`` with eigenvalues ``S(S+1)``."""
    return sum(c @ c for c in (collective(n, a) for a in "xyz")) / 4


def is_hermitian(h, tol: float = DEFAULT_TOL) -> bool:
    h = np.asarray(h)
    return bool(np.linalg.norm(h - h.conj().T) < tol)


def is_unitary(u, tol: float = DEFAULT_TOL) -> bool:
    u = np.asarray(u)
    return bool(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])) < tol)


def expm_hermitian(h, scale: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Return ``exp(-i * scale * h)`` for Hermitian ``h`` via eigendecomposition.

    Raises
    ------
    ValueError
        If ``h`` deviates from Hermiticity by more than ``tol`` (Frobenius).
    """
    h = as_operator(h)
    resid = np.linalg.norm(h - h.conj().T)
    if resid > tol * max(1.0, np.linalg.norm(h)):
        raise ValueError(f"operator is not Hermitian (residual {resid:.3e})")
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    return (v * np.exp(-1j * scale * w)) @ v.conj().T


def hs_inner(a, b) -> complex:
    """Unnormalized Hilbert-Schmidt inner product ``Tr(a^dagger b)``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    _same_dim(a, b)
    return complex(np.vdot(a, b))


def commutator(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    _same_dim(a, b)
    return a @ b - b @ a


def anticommutator(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    _same_dim(a, b)
    return a @ b + b @ a


def frob(a) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(a))


def pauli_strings(n: int) -> Iterable[str]:
    """All ``4**n`` Pauli labels in lexicographic IXYZ order."""
    labels = [""]
    for _ in range(n):
        labels = [s + p for s in labels for p in "IXYZ"]
    return labels


def gram(ops: Sequence[np.ndarray]) -> np.ndarray:
    """Gram matrix ``G[k, l] = Tr(ops[k]^dagger ops[l])``."""
    stack = np.asarray(ops, dtype=complex).reshape(len(ops), -1)
    return stack.conj() @ stack.T

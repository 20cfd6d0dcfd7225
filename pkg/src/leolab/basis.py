"""Classified operator bases adapted to a code/complement partition."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .leakage import BlockPartition, block_partition, logical_factor_residual
from .operators import DEFAULT_TOL, as_operator, frob, kron


class ErrorClass(enum.Enum):
    IDENTITY = "Identity"
    LOGICAL = "Logical"
    ORTHO_LOGICAL = "OrthoLogical"
    COLLECTIVE = "Collective"
    STABILIZER = "Stabilizer"
    ORTHO_ANNIHILATOR = "OrthoAnnihilator"
    LOGICAL_COLLECTIVE_PRODUCT = "LogicalCollectiveProduct"
    LEAKAGE = "Leakage"

    @classmethod
    def parse(cls, name: str) -> "ErrorClass":
        for c in cls:
            if name in (c.value, c.name, c.value.lower()):
                return c
        raise ValueError(f"unknown error class {name!r}")


# classes that act nontrivially on the encoded qubit
CODE_ACTING = frozenset({ErrorClass.LOGICAL, ErrorClass.LOGICAL_COLLECTIVE_PRODUCT})
CPERP = frozenset({ErrorClass.ORTHO_LOGICAL, ErrorClass.ORTHO_ANNIHILATOR})


@dataclass(frozen=True)
class BasisElement:
    """One basis operator.

    ``raw`` is the operator in the code-adapted frame, scaled as it is
    conventionally written. ``display`` is its tilde-product form;
    ``display_scale`` relates the two for single products
    (``raw = display_scale * product``), so a raw coefficient ``c`` reads
    as ``c * display_scale`` on the printed product.
    """

    name: str
    error_class: ErrorClass
    raw: np.ndarray = field(repr=False)
    display: str
    display_scale: float = 1.0

    @property
    def norm(self) -> float:
        return frob(self.raw)


@dataclass(frozen=True)
class DfsBasis:
    n: int
    elements: tuple[BasisElement, ...]
    partition: BlockPartition = field(repr=False)

    def __post_init__(self):
        names = [e.name for e in self.elements]
        if len(set(names)) != len(names):
            raise ValueError("duplicate basis element names")
        stack = np.array([e.raw for e in self.elements])
        stack.setflags(write=False)
        object.__setattr__(self, "_stack", stack)
        norms = np.array([e.norm for e in self.elements])
        object.__setattr__(self, "_norms", norms)
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[BasisElement]:
        return iter(self.elements)

    def __getitem__(self, name: str) -> BasisElement:
        return self.elements[self._index[name]]

    @property
    def udfs(self) -> np.ndarray:
        return self.partition.basis_change

    @property
    def names(self) -> list[str]:
        return [e.name for e in self.elements]

    def raw_stack(self) -> np.ndarray:
        return self._stack

    def orthonormal_stack(self) -> np.ndarray:
        return self._stack / self._norms[:, None, None]

    def of_class(self, cls: ErrorClass) -> list[BasisElement]:
        return [e for e in self.elements if e.error_class is cls]

    def physical(self, name: str) -> np.ndarray:
        """Element ``name`` mapped back to the computational basis."""
        return self.partition.from_frame(self[name].raw)

    def gram(self) -> np.ndarray:
        s = self._stack.reshape(len(self), -1)
        return s.conj() @ s.T

    def orthogonality_violations(self, tol: float = DEFAULT_TOL) -> list[tuple[str, str, float]]:
        """Pairs of elements whose normalized overlap exceeds ``tol``."""
        g = self.gram() / np.outer(self._norms, self._norms)
        np.fill_diagonal(g, 0)
        bad = np.argwhere(np.abs(g) > tol)
        return [
            (self.elements[i].name, self.elements[j].name, float(abs(g[i, j])))
            for i, j in bad
            if i < j
        ]

    def raw_coefficients(self, frame_op) -> np.ndarray:
        """Coefficients ``c`` with ``frame_op = sum_k c_k raw_k``."""
        s = self._stack.reshape(len(self), -1)
        return (s.conj() @ np.asarray(frame_op).reshape(-1)) / self._norms**2

    def synthesize(self, raw_coefficients) -> np.ndarray:
        return np.tensordot(np.asarray(raw_coefficients), self._stack, axes=1)


@dataclass
class Classification:
    coefficients: dict[str, complex]
    summary: set[ErrorClass]
    residual: float
    class_weights: dict[ErrorClass, float]


def classify(op, basis: DfsBasis, tol: float = DEFAULT_TOL) -> Classification:
    """Expand a computational-basis operator over ``basis``.

    Returns raw-convention coefficients, the set of classes carrying weight
    above ``tol`` (relative to ``||op||``), the reconstruction residual and the
    squared orthonormal weight per class.
    """
    m = as_operator(op)
    if m.shape[0] != basis.partition.total_dim:
        raise ValueError(f"operator dim {m.shape[0]} does not match basis dim {basis.partition.total_dim}")
    frame = basis.partition.to_frame(m)
    c = basis.raw_coefficients(frame)
    resid = frob(basis.synthesize(c) - frame)
    weights: dict[ErrorClass, float] = {}
    for e, ck in zip(basis.elements, c):
        weights[e.error_class] = weights.get(e.error_class, 0.0) + abs(ck * e.norm) ** 2
    scale = max(frob(m), 1.0)
    summary = {k for k, w in weights.items() if np.sqrt(w) > tol * scale}
    coeffs = {e.name: complex(ck) for e, ck in zip(basis.elements, c)}
    return Classification(coeffs, summary, resid, weights)


def verify_stabilizer(op, partition: BlockPartition, tol: float = DEFAULT_TOL) -> bool:
    """True if ``op`` leaves the encoded qubit untouched.

    The code block must have the form ``I_logical (x) M_gauge`` and both
    leakage blocks must vanish. Action on the complement is unrestricted.
    """
    b, _, d, f = block_partition(op, partition)
    scale = max(1.0, frob(op))
    if np.sqrt(frob(d) ** 2 + frob(f) ** 2) > tol * scale:
        return False
    return logical_factor_residual(b, partition.logical_dim) <= tol * scale


_TILDE_FACTORS = {
    "(I+Z)": np.array([[2, 0], [0, 0]], dtype=complex),
    "(I-Z)": np.array([[0, 0], [0, 2]], dtype=complex),
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def parse_tilde(product: str) -> list[str]:
    """Split a tilde product such as ``"(I+Z)XI"`` into its factor tokens."""
    tokens, i = [], 0
    while i < len(product):
        if product[i] == "(":
            tok = product[i : i + 5]
            i += 5
        else:
            tok = product[i]
            i += 1
        if tok not in _TILDE_FACTORS:
            raise ValueError(f"bad tilde factor {tok!r} in {product!r}")
        tokens.append(tok)
    return tokens


def tilde_product(product: str) -> np.ndarray:
    """Matrix of a tilde product in the code-adapted frame.

    ``(I+Z)`` and ``(I-Z)`` are the unnormalized sums, i.e. twice the
    projectors onto the first and second half of their factor.
    """
    return kron(*(_TILDE_FACTORS[t] for t in parse_tilde(product)))

"""Four-qubit decoherence-free subspace.

The two total-spin singlets ``S0``, ``S1`` form the code. The complement
holds three spin-1 triplets ``T1, T2, T3`` (magnetic numbers +1, 0, -1)
and the spin-2 quintuplet ``Q`` (+2 .. -2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .basis import BasisElement, DfsBasis, ErrorClass
from .leakage import BlockPartition, Leo, make_canonical_leo, make_generalized_leo
from .operators import collective, commutator, exchange, frob

N = 4
DIM = 16
S2, S3, S6 = np.sqrt(2), np.sqrt(3), np.sqrt(6)

# 4-qubit elements carry the Pauli-string norm, ||e||_HS^2 = 16
ELEMENT_NORM = 4.0

_STATES = {
    "S0": ([(1, "0101"), (1, "1010"), (-1, "0110"), (-1, "1001")], 2),
    "S1": ([(2, "0011"), (2, "1100"), (-1, "0110"), (-1, "1001"), (-1, "0101"), (-1, "1010")], np.sqrt(12)),
    "T1(+1)": ([(1, "0100"), (1, "1000"), (-1, "0001"), (-1, "0010")], 2),
    "T1(0)": ([(1, "1100"), (-1, "0011")], S2),
    "T1(-1)": ([(1, "1110"), (1, "1101"), (-1, "1011"), (-1, "0111")], 2),
    "T2(+1)": ([(1, "0001"), (-1, "0010")], S2),
    "T2(0)": ([(1, "1001"), (1, "0101"), (-1, "1010"), (-1, "0110")], 2),
    "T2(-1)": ([(1, "1101"), (-1, "1110")], S2),
    "T3(+1)": ([(1, "0100"), (-1, "1000")], S2),
    "T3(0)": ([(1, "0110"), (1, "0101"), (-1, "1010"), (-1, "1001")], 2),
    "T3(-1)": ([(1, "0111"), (-1, "1011")], S2),
    "Q(+2)": ([(1, "0000")], 1),
    "Q(+1)": ([(1, s) for s in ("1000", "0100", "0010", "0001")], 2),
    "Q(0)": ([(1, s) for s in ("1100", "1010", "1001", "0110", "0101", "0011")], S6),
    "Q(-1)": ([(1, s) for s in ("0111", "1011", "1101", "1110")], 2),
    "Q(-2)": ([(1, "1111")], 1),
}

STATE_LABELS = tuple(_STATES)


def _ket(terms, norm) -> np.ndarray:
    v = np.zeros(DIM, dtype=complex)
    for c, bits in terms:
        v[int(bits, 2)] += c
    return v / norm


@dataclass(frozen=True)
class Dfs4States:
    """The 16 total-spin states in the computational basis."""

    code: tuple[np.ndarray, np.ndarray] = field(repr=False)
    triplets: tuple[tuple[np.ndarray, ...], ...] = field(repr=False)
    quintuplet: tuple[np.ndarray, ...] = field(repr=False)
    udfs: np.ndarray = field(repr=False)
    labels: tuple[str, ...] = STATE_LABELS

    def as_dict(self) -> dict[str, np.ndarray]:
        return dict(zip(self.labels, self.udfs))


@lru_cache(maxsize=None)
def dfs4_states() -> Dfs4States:
    vecs = [_ket(*spec) for spec in _STATES.values()]
    u = np.array(vecs)
    u.setflags(write=False)
    return Dfs4States(
        code=(vecs[0], vecs[1]),
        triplets=(tuple(vecs[2:5]), tuple(vecs[5:8]), tuple(vecs[8:11])),
        quintuplet=tuple(vecs[11:]),
        udfs=u,
    )


def udfs4() -> np.ndarray:
    """Rows are S0, S1, T1, T2, T3 (m = +1, 0, -1) and Q (m = +2 .. -2)."""
    return np.array(dfs4_states().udfs)


@lru_cache(maxsize=None)
def partition4() -> BlockPartition:
    return BlockPartition(DIM, 2, dfs4_states().udfs)


def logical_ops4():
    """Exchange-built logical ``(X, Y, Z)``; not canonical, they act on the complement."""
    x = (exchange(N, 2, 3) - exchange(N, 1, 3)) / S3
    z = -exchange(N, 1, 2)
    y = commutator(z, x) / 2j
    return x, y, z


def spin_squared_half4() -> np.ndarray:
    """``S^2 / 2`` written through exchange terms, ``(12 + 2 sum sigma_i . sigma_j) / 8``."""
    dots = sum(2 * exchange(N, i, j) - np.eye(DIM) for i in range(1, N + 1) for j in range(i + 1, N + 1))
    return (12 * np.eye(DIM) + 2 * dots) / 8


def leo4() -> Leo:
    """``exp(-i pi S^2/2)``: ``+1`` on the code, ``-1`` on every triplet and quintuplet state."""
    return make_generalized_leo(spin_squared_half4(), partition4(), name="exp(-i pi S^2/2)")


def modified_logical_ops4():
    """``O' = O + S^2/2``; integer spectra of opposite parity on code and complement."""
    h = spin_squared_half4()
    return tuple(o + h for o in logical_ops4())


def leo4_from_modified_z() -> Leo:
    return make_generalized_leo(modified_logical_ops4()[2], partition4(), name="exp(-i pi Zbar')")


# U sigma^c U^dagger carries these factors on the code block when E = I + sigma.sigma
CANONICAL_SCALE = {"x": 8 * S3, "z": 24.0}


def _full_exchange(i: int, j: int) -> np.ndarray:
    return 2 * exchange(N, i, j)


def canonical_ops4():
    """Four-body canonical logical ``(X, Z)``: Pauli on the code, zero on the complement.

    The exchange polynomials are multiplied out with ``E_ij = I + sigma_i . sigma_j``
    and divided by their code-block scale.
    """
    a = {p: 2 * np.eye(DIM) - _full_exchange(*p) for p in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]}
    sx = a[1, 3] @ a[2, 4] - a[2, 3] @ a[1, 4]
    sz = 2 * a[3, 4] @ a[1, 2] - a[1, 3] @ a[2, 4] - a[2, 3] @ a[1, 4]
    return sx / CANONICAL_SCALE["x"], sz / CANONICAL_SCALE["z"]


def canonical_y4() -> np.ndarray:
    sx, sz = canonical_ops4()
    return commutator(sz, sx) / 2j


def canonical_leo4() -> Leo:
    """Canonical LEO ``exp(-i pi sigma_z^c)`` from the four-body gate."""
    return make_canonical_leo(canonical_ops4()[1], partition4(), name="exp(-i pi sigma_z^c)")


# ---- 256-element operator basis -------------------------------------------

_PAULI2 = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

LOGICAL_PREFIX = "(I+Z)(I+Z)(I+Z)"
DEPENDENCE_TOL = 1e-8


def _embed(block, rows: slice, cols: slice) -> np.ndarray:
    m = np.zeros((DIM, DIM), dtype=complex)
    m[rows, cols] = block
    return m


def _perp_seeds():
    """Generalized Gell-Mann matrices on the 14-dim complement, then traceless diagonals."""
    d = DIM - 2
    out = []
    for a in range(d):
        for b in range(a + 1, d):
            e = np.zeros((d, d), dtype=complex)
            e[a, b] = e[b, a] = 1
            out.append(e)
            y = np.zeros((d, d), dtype=complex)
            y[a, b], y[b, a] = -1j, 1j
            out.append(y)
    for k in range(1, d):
        diag = np.zeros(d)
        diag[:k] = 1
        diag[k] = -k
        out.append(np.diag(diag).astype(complex))
    return out


def _complete_perp(fixed):
    """Orthogonal completion of ``fixed`` within the traceless complement block."""
    frame = [f / frob(f) for f in fixed]
    new = []
    for seed in _perp_seeds():
        v = seed.copy()
        for f in frame:
            v = v - np.vdot(f, v) * f
        nv = frob(v)
        if nv < DEPENDENCE_TOL * frob(seed):
            continue
        v = v / nv
        frame.append(v)
        new.append(v)
    return new


@lru_cache(maxsize=None)
def build_basis256() -> DfsBasis:
    """Classified, trace-orthogonal 256-element basis of 16x16 operators.

    Every element except the physical collective generators has
    ``||e||_HS^2 = 16``, the Pauli-string normalization. Elements are
    stored in the DFS frame.
    """
    p = partition4()
    code, perp = slice(0, 2), slice(2, DIM)
    els: list[BasisElement] = []

    def add(name, cls, raw, display=None, scale=1.0):
        raw = np.asarray(raw, dtype=complex)
        raw.setflags(write=False)
        els.append(BasisElement(name, cls, raw, display or name, scale))

    add("IIII", ErrorClass.IDENTITY, np.eye(DIM))
    for a, s in _PAULI2.items():
        add(LOGICAL_PREFIX + a, ErrorClass.LOGICAL, _embed(2 * S2 * s, code, code))
    w = np.sqrt(7.0)
    add("code_vs_perp", ErrorClass.COLLECTIVE, np.diag([w] * 2 + [-1 / w] * 14),
        "sqrt7*P_code - P_perp/sqrt7")
    coll = []
    for a in "xyz":
        f = p.to_frame(collective(N, a))
        coll.append(f[perp, perp])
        add(f"S_{a.upper()}", ErrorClass.COLLECTIVE, f, f"sum_i sigma_i^{a}")
    labels = STATE_LABELS
    for i in range(2):
        for j in range(2, DIM):
            m = np.zeros((DIM, DIM), dtype=complex)
            m[i, j] = m[j, i] = 2 * S2
            add(f"leak_x[{labels[i]},{labels[j]}]", ErrorClass.LEAKAGE, m)
            m = np.zeros((DIM, DIM), dtype=complex)
            m[i, j], m[j, i] = -2j * S2, 2j * S2
            add(f"leak_y[{labels[i]},{labels[j]}]", ErrorClass.LEAKAGE, m)
    for k, v in enumerate(_complete_perp(coll)):
        add(f"perp_{k:03d}", ErrorClass.ORTHO_ANNIHILATOR, _embed(ELEMENT_NORM * v, perp, perp),
            f"C_perp[{k}]")
    return DfsBasis(N, tuple(els), p)


def logical_element(axis: str) -> str:
    return LOGICAL_PREFIX + axis.upper()

"""Three-qubit decoherence-free subsystem.

The code-adapted ("tilde") frame orders states as ``|J, lambda, mu>`` with
the J-sector factor most significant, then the degeneracy label lambda,
then mu. The first four states (J = 1/2) form the code: a logical qubit
carried by lambda times a two-dimensional gauge factor mu.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .basis import BasisElement, DfsBasis, ErrorClass, tilde_product
from .leakage import BlockPartition, Leo, make_canonical_leo
from .operators import collective, commutator, exchange

N = 3
S2, S3, S6 = np.sqrt(2), np.sqrt(3), np.sqrt(6)

# rows: |1/2,0,+>, |1/2,0,->, |1/2,1,+>, |1/2,1,->, then the J=3/2 quartet
_UDFS3 = np.array(
    [
        [0, 0, 1 / S2, 0, -1 / S2, 0, 0, 0],
        [0, 0, 0, 1 / S2, 0, -1 / S2, 0, 0],
        [0, 2 / S6, -1 / S6, 0, -1 / S6, 0, 0, 0],
        [0, 0, 0, 1 / S6, 0, 1 / S6, -2 / S6, 0],
        [1, 0, 0, 0, 0, 0, 0, 0],
        [0, 1 / S3, 1 / S3, 0, 1 / S3, 0, 0, 0],
        [0, 0, 0, 1 / S3, 0, 1 / S3, 1 / S3, 0],
        [0, 0, 0, 0, 0, 0, 0, 1],
    ],
    dtype=complex,
)
_UDFS3.setflags(write=False)

STATE_LABELS = (
    "1/2,0,+1/2",
    "1/2,0,-1/2",
    "1/2,1,+1/2",
    "1/2,1,-1/2",
    "3/2,+3/2",
    "3/2,+1/2",
    "3/2,-1/2",
    "3/2,-3/2",
)

# Collective generators as tilde sums over the unnormalized (I+-Z) factors.
COLLECTIVE_TILDE = {
    "S_X": [(0.5, "(I+Z)IX"), (0.5 * S3, "(I-Z)IX"), (0.5, "(I-Z)XX"), (0.5, "(I-Z)YY")],
    "S_Y": [(0.5, "(I+Z)IY"), (0.5 * S3, "(I-Z)IY"), (-0.5, "(I-Z)XY"), (0.5, "(I-Z)YX")],
    "S_Z": [(1.0, "IIZ"), (1.0, "(I-Z)ZI")],
}

# The sums as conventionally typeset, kept for comparison reports. In the
# typeset S_X and S_Y the (I+-Z) factors are projectors (hence the 1/2 here),
# and the XY term of S_Y carries a + sign, which does not match S_Y.
COLLECTIVE_PRINTED = {
    "S_X": [(0.5, "(I+Z)IX"), (0.5 * S3, "(I-Z)IX"), (0.5, "(I-Z)XX"), (0.5, "(I-Z)YY")],
    "S_Y": [(0.5, "(I+Z)IY"), (0.5 * S3, "(I-Z)IY"), (0.5, "(I-Z)XY"), (0.5, "(I-Z)YX")],
    "S_Z": [(1.0, "IIZ"), (1.0, "(I-Z)ZI")],
}

# SO(4) completion of the S_X and S_Y spans. The Y set mirrors the X set
# with the (I-Z)XY coefficient negated, following the sign of that term in
# S_Y; the last S_Y1 product is (I-Z)YX, not (I+Z)YX.
SO4_COMPLETION = {
    "S_X1": [(1 / np.sqrt(30), "(I+Z)IX"), (1 / np.sqrt(10), "(I-Z)IX"),
             (1 / np.sqrt(30), "(I-Z)XX"), (-np.sqrt(5 / 6), "(I-Z)YY")],
    "S_X2": [(-S3 / 2, "(I+Z)IX"), (0.5, "(I-Z)IX")],
    "S_X3": [(-1 / (2 * np.sqrt(5)), "(I+Z)IX"), (-0.5 * np.sqrt(3 / 5), "(I-Z)IX"),
             (2 / np.sqrt(5), "(I-Z)XX")],
    "S_Y1": [(1 / np.sqrt(30), "(I+Z)IY"), (1 / np.sqrt(10), "(I-Z)IY"),
             (-1 / np.sqrt(30), "(I-Z)XY"), (-np.sqrt(5 / 6), "(I-Z)YX")],
    "S_Y2": [(-S3 / 2, "(I+Z)IY"), (0.5, "(I-Z)IY")],
    "S_Y3": [(-1 / (2 * np.sqrt(5)), "(I+Z)IY"), (-0.5 * np.sqrt(3 / 5), "(I-Z)IY"),
             (-2 / np.sqrt(5), "(I-Z)XY")],
}

# span of each collective generator, in the order the coefficient vectors use
COLLECTIVE_SPAN = {
    "X": ("(I+Z)IX", "(I-Z)IX", "(I-Z)XX", "(I-Z)YY"),
    "Y": ("(I+Z)IY", "(I-Z)IY", "(I-Z)XY", "(I-Z)YX"),
}


def tilde_sum(terms) -> np.ndarray:
    return sum(c * tilde_product(p) for c, p in terms)


def _format_sum(terms) -> str:
    return " + ".join(f"{c:.12g}*{p}" for c, p in terms).replace("+ -", "- ")


def coefficient_vector(name: str) -> np.ndarray:
    """Coefficients of an SO(4)-completion element over its collective span."""
    terms = dict((p, c) for c, p in SO4_COMPLETION[name])
    span = COLLECTIVE_SPAN[name[2]]
    return np.array([terms.get(p, 0.0) for p in span])


def collective_vector(axis: str) -> np.ndarray:
    """Coefficients of ``S_axis`` over its span, normalized to unit length."""
    terms = dict((p, c) for c, p in COLLECTIVE_TILDE["S_" + axis.upper()])
    v = np.array([terms.get(p, 0.0) for p in COLLECTIVE_SPAN[axis.upper()]])
    return v / np.linalg.norm(v)


def udfs3() -> np.ndarray:
    """Change of basis from computational to DFS coordinates (rows are DFS states)."""
    return _UDFS3.copy()


@lru_cache(maxsize=None)
def partition3() -> BlockPartition:
    return BlockPartition(8, 4, _UDFS3)


def logical_ops3():
    """Exchange-built logical ``(X, Y, Z)`` in the computational basis.

    ``Y`` is ``[Z, X] / 2i``, which is ``sigma_y`` on the code block.
    """
    e12, e13, e23 = exchange(N, 1, 2), exchange(N, 1, 3), exchange(N, 2, 3)
    x = (e23 - e13) / S3
    z = (e13 + e23 - 2 * e12) / 3
    y = commutator(z, x) / 2j
    return x, y, z


def canonical_leo3() -> Leo:
    """``exp(-i pi Z)`` for the canonical exchange-built logical Z."""
    return make_canonical_leo(logical_ops3()[2], partition3(), name="exp(-i pi Zbar)")


def collective_frame(axis: str) -> np.ndarray:
    """``U S_axis U^dagger`` computed from the physical qubit operators."""
    return partition3().to_frame(collective(N, axis))


_PAULI_PAIRS = [a + b for a in "IXYZ" for b in "IXYZ"]


def _element_specs():
    """(name, class, display, display_scale, raw matrix) in canonical order."""
    specs = [("III", ErrorClass.IDENTITY, "III", 1.0, tilde_product("III"))]
    for a in "xyz":
        p = f"(I+Z){a.upper()}I"
        specs.append((f"sigma_{a}", ErrorClass.LOGICAL, p, 0.5, 0.5 * tilde_product(p)))
    for a in "xy":
        p = f"(I-Z){a.upper()}I"
        specs.append((f"sigma_{a}_perp", ErrorClass.ORTHO_LOGICAL, p, 1.0, tilde_product(p)))
    zperp = [(2.0, "IIZ"), (-1.0, "(I-Z)ZI")]
    specs.append(("sigma_z_perp", ErrorClass.ORTHO_LOGICAL, _format_sum(zperp), 1.0, tilde_sum(zperp)))
    for name, terms in COLLECTIVE_TILDE.items():
        specs.append((name, ErrorClass.COLLECTIVE, _format_sum(terms), 1.0, tilde_sum(terms)))
    for name, terms in SO4_COMPLETION.items():
        specs.append((name, ErrorClass.STABILIZER, _format_sum(terms), 1.0, tilde_sum(terms)))
    for p in ("ZIZ", "ZII"):
        specs.append((p, ErrorClass.COLLECTIVE, p, 1.0, tilde_product(p)))
    for tail in ("XZ", "YZ", "ZX", "ZY", "ZZ"):
        p = "(I-Z)" + tail
        specs.append((p, ErrorClass.ORTHO_ANNIHILATOR, p, 1.0, tilde_product(p)))
    for tail in _PAULI_PAIRS:
        if "I" in tail:
            continue
        p = "(I+Z)" + tail
        specs.append((p, ErrorClass.LOGICAL_COLLECTIVE_PRODUCT, p, 1.0, tilde_product(p)))
    for j in "XY":
        for tail in _PAULI_PAIRS:
            p = j + tail
            specs.append((p, ErrorClass.LEAKAGE, p, 1.0, tilde_product(p)))
    return specs


@lru_cache(maxsize=None)
def build_basis64() -> DfsBasis:
    """The 64-element classified operator basis of the three-qubit DFS."""
    elements = []
    for name, cls, display, scale, raw in _element_specs():
        raw = np.asarray(raw, dtype=complex)
        raw.setflags(write=False)
        elements.append(BasisElement(name, cls, raw, display, scale))
    return DfsBasis(N, tuple(elements), partition3())


DIAGONAL_ELEMENTS = (
    "III", "sigma_z", "sigma_z_perp", "S_Z", "ZIZ", "ZII", "(I-Z)ZZ", "(I+Z)ZZ",
)

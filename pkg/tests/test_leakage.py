from __future__ import annotations

import numpy as np
import pytest

from leolab import dfs3, dfs4
from leolab.leakage import (
    BlockPartition,
    GradedClass,
    LeoConstructionError,
    assemble_blocks,
    block_partition,
    classify_blocks,
    equal_up_to_phase,
    grade,
    is_in_commutant,
    leakage_norm,
    logical_factor_residual,
    make_canonical_leo,
    make_generalized_leo,
)
from leolab.operators import collective, frob

from conftest import random_operator


@pytest.fixture(scope="module")
def p3():
    return dfs3.partition3()


def _structured(rng, p, even=True):
    """Random frame operator with only diagonal (even) or only off-diagonal (odd) blocks."""
    k, n = p.code_dim, p.total_dim
    m = random_operator(rng, n)
    mask = np.zeros((n, n), bool)
    mask[:k, :k] = mask[k:, k:] = True
    m = np.where(mask if even else ~mask, m, 0)
    return p.from_frame(m)


def test_partition_validation():
    with pytest.raises(ValueError):
        BlockPartition(4, 0, np.eye(4))
    with pytest.raises(ValueError):
        BlockPartition(4, 2, np.ones((4, 4)))
    with pytest.raises(ValueError):
        BlockPartition(4, 3, np.eye(4))
    p = BlockPartition(4, 2, np.eye(4))
    assert p.perp_dim == 2 and p.gauge_dim == 1


def test_block_partition_identity(p3):
    b, c, d, f = block_partition(np.eye(8), p3)
    np.testing.assert_allclose(b, np.eye(4), atol=1e-14)
    np.testing.assert_allclose(c, np.eye(4), atol=1e-14)
    assert frob(d) < 1e-14 and frob(f) < 1e-14


def test_block_partition_logical_x(p3):
    _, c, d, f = block_partition(dfs3.logical_ops3()[0], p3)
    assert max(frob(c), frob(d), frob(f)) < 1e-12


def test_block_reassembly_exact(rng, p3):
    m = random_operator(rng, 8)
    blocks = block_partition(m, p3)
    np.testing.assert_array_equal(assemble_blocks(*blocks), p3.to_frame(m))


def test_block_partition_dim_mismatch(p3):
    with pytest.raises(ValueError):
        block_partition(np.eye(4), p3)


def test_projectors(p3):
    pc, pp = p3.code_projector(), p3.perp_projector()
    np.testing.assert_allclose(pc @ pc, pc, atol=1e-12)
    np.testing.assert_allclose(pc + pp, np.eye(8), atol=1e-12)
    assert abs(np.trace(pc) - 4) < 1e-12


def test_grade_examples(p3):
    leo = dfs3.canonical_leo3()
    b = dfs3.build_basis64()
    assert grade(np.eye(8), leo) is GradedClass.EVEN
    leak = b.physical("XIX")
    assert grade(leak, leo) is GradedClass.ODD
    assert grade(leak + dfs3.logical_ops3()[0], leo) is GradedClass.MIXED


def test_grading_matches_block_structure(rng, p3):
    leo = dfs3.canonical_leo3()
    leo4 = dfs4.leo4()
    p4 = dfs4.partition4()
    for _ in range(50):
        for p, l in ((p3, leo), (p4, leo4)):
            ev = _structured(rng, p, even=True)
            od = _structured(rng, p, even=False)
            assert grade(ev, l) is GradedClass.EVEN
            assert classify_blocks(ev, p)[0] is GradedClass.EVEN
            assert grade(od, l) is GradedClass.ODD
            assert classify_blocks(od, p)[0] is GradedClass.ODD
            assert grade(ev + od, l) is GradedClass.MIXED
            assert classify_blocks(ev + od, p)[0] is GradedClass.MIXED


def test_canonical_leo_accepts_z3(p3):
    leo = make_canonical_leo(dfs3.logical_ops3()[2], p3)
    np.testing.assert_allclose(leo.unitary, dfs3.canonical_leo3().unitary, atol=1e-12)
    np.testing.assert_allclose(leo.frame_form(), leo.phase * np.diag([-1] * 4 + [1] * 4), atol=1e-12)
    assert leo.parity_residual() < 1e-10


def test_canonical_leo_rejects_z4():
    with pytest.raises(LeoConstructionError) as info:
        make_canonical_leo(dfs4.logical_ops4()[2], dfs4.partition4())
    err = info.value
    assert err.condition == "perp_action"
    assert err.residual > 1
    assert set(np.round(err.details["perp_eigenvalues"], 8)) == {-1.0, 1.0}


def test_canonical_leo_rejects_zero(p3):
    with pytest.raises(LeoConstructionError) as info:
        make_canonical_leo(np.zeros((8, 8)), p3)
    assert info.value.condition == "code_square"


def test_canonical_leo_rejects_non_hermitian(p3):
    m = np.zeros((8, 8))
    m[0, 1] = 1
    with pytest.raises(LeoConstructionError) as info:
        make_canonical_leo(p3.from_frame(m), p3)
    assert info.value.condition == "hermitian"


def test_generalized_leo_s2():
    p = dfs4.partition4()
    leo = make_generalized_leo(dfs4.spin_squared_half4(), p)
    np.testing.assert_allclose(p.to_frame(leo.unitary), np.diag([1] * 2 + [-1] * 14), atol=1e-10)
    assert leo.parity_residual() < 1e-10


def test_generalized_leo_rejects_same_parity(p3):
    h = p3.from_frame(np.diag([0.0] * 4 + [2.0] * 4))
    with pytest.raises(LeoConstructionError) as info:
        make_generalized_leo(h, p3)
    assert info.value.condition == "parity"


def test_generalized_leo_rejects_non_integer(p3):
    h = p3.from_frame(np.diag([1.0] * 4 + [0.5] * 4))
    with pytest.raises(LeoConstructionError) as info:
        make_generalized_leo(h, p3)
    assert info.value.condition == "non_integer"
    np.testing.assert_allclose(info.value.details["eigenvalues"], [0.5] * 4)


def test_generalized_leo_rejects_leakage(p3):
    b = dfs3.build_basis64()
    with pytest.raises(LeoConstructionError) as info:
        make_generalized_leo(b.physical("XII"), p3)
    assert info.value.condition == "block_diagonal"


def test_canonical_and_generalized_agree(p3):
    z = dfs3.logical_ops3()[2]
    a = make_canonical_leo(z, p3).unitary
    h = p3.from_frame(np.diag([1.0, 1.0, -1.0, -1.0, 0, 0, 0, 0]))
    b = make_generalized_leo(h, p3).unitary
    assert equal_up_to_phase(a, b)[0] < 1e-10


def test_commutant():
    x = dfs3.logical_ops3()[0]
    s = [collective(3, a) for a in "xyz"]
    assert is_in_commutant(np.eye(8), s)
    assert is_in_commutant(x, s)


def test_commutant_rejects_random(rng):
    s = [collective(3, a) for a in "xyz"]
    assert not is_in_commutant(random_operator(rng, 8), s)


def test_leakage_norm_and_factor_residual(p3):
    assert leakage_norm(np.eye(8), p3) < 1e-14
    assert logical_factor_residual(np.kron(np.eye(2), np.diag([1, 2]))) < 1e-14
    assert logical_factor_residual(np.kron(np.diag([1, -1]), np.eye(2))) > 1

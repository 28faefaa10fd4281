import random

import numpy as np
import pytest

from hkgtower.additive import additive_from_span
from hkgtower.cohomology import (Cocycle, LinearizedModule, MatrixModule,
                                 cocycle_check, cocycle_from_action,
                                 coboundary, coboundary_test, h1_cyclic,
                                 kernel_of_additive_map)
from hkgtower.errors import BadOrder, NotCoboundary
from hkgtower.field import field_make
from hkgtower.tower import FiniteGroup, GroupAction, TowerSpec

F5 = field_make(5)


def s1_setup(lam=13):
    base = TowerSpec.base(F5, 5)
    P1 = additive_from_span([F5.one])
    spec = base.extend(1, lam, P1, base.monomial((lam,)))
    group = FiniteGroup.cyclic(5)
    action = GroupAction(spec, group,
                         [{j: base.constant(j) for j in range(5)}])
    return spec, action, P1


def test_module_matrices_unipotent_and_multiplicative():
    spec, action, _ = s1_setup()
    M = LinearizedModule(spec, action, 40)
    assert all(M.is_unipotent(s) for s in range(5))
    for a in range(5):
        for b in range(5):
            lhs = M.matrix(action.group.mul(a, b))
            rhs = M.matrix(a).dot(M.matrix(b)) % 5
            assert np.array_equal(lhs, rhs)


def test_zero_and_coboundary_are_cocycles():
    spec, action, _ = s1_setup()
    M = LinearizedModule(spec, action, 40)
    zero = Cocycle(M, {s: spec.zero() for s in range(5)})
    assert cocycle_check(M, zero) == (True, None)
    rng = random.Random(60)
    for _ in range(5):
        b = spec.monomial((rng.randint(0, 3), rng.randint(0, 2)),
                          rng.randint(0, 4))
        ok, _ = cocycle_check(M, coboundary(M, b))
        assert ok


def test_random_table_rejected_with_witness():
    spec, action, _ = s1_setup()
    M = LinearizedModule(spec, action, 40)
    rng = random.Random(61)
    rejected = 0
    for _ in range(10):
        values = {0: spec.zero()}
        values.update({s: spec.monomial((rng.randint(0, 3), rng.randint(0, 2)),
                                        rng.randint(0, 4))
                       for s in range(1, 5)})
        ok, witness = cocycle_check(M, Cocycle(M, values))
        if not ok:
            assert witness["pair"] is not None
            rejected += 1
    assert rejected >= 8  # random tables fail overwhelmingly


def test_coboundary_test_round_trip():
    spec, action, _ = s1_setup()
    M = LinearizedModule(spec, action, 66)
    rng = random.Random(62)
    for _ in range(10):
        b0 = spec.monomial((rng.randint(0, 5), rng.randint(0, 4)),
                           rng.randint(0, 4))
        cb = coboundary(M, b0)
        b = coboundary_test(M, cb)
        assert coboundary(M, b) == cb


def test_constant_cocycle_on_trivial_action_not_coboundary():
    base = TowerSpec.base(F5, 5)
    group = FiniteGroup.cyclic(5)
    action = GroupAction(base, group, [])
    M = LinearizedModule(base, action, 13)
    const = Cocycle(M, {s: base.constant(s) for s in range(5)})
    assert cocycle_check(M, const)[0]
    with pytest.raises(NotCoboundary):
        coboundary_test(M, const)


def test_h1_trivial_action():
    M = MatrixModule(5, np.eye(7, dtype=np.int64))
    res = h1_cyclic(M, 1, 5)
    assert res["dim_h1"] == 7
    assert res["norm_vanishes"] and res["coinvariants_formula_ok"]


def test_h1_regular_representation_vanishes():
    shift = np.roll(np.eye(5, dtype=np.int64), 1, axis=0)
    res = h1_cyclic(MatrixModule(5, shift), 1, 5)
    assert res["dim_h1"] == 0


def test_h1_norm_rank_two_ways():
    # rank(N) from the matrix sum vs p-fold repeated action on vectors
    spec, action, _ = s1_setup()
    M = LinearizedModule(spec, action, 40)
    mat = M.matrix(1)
    norm = np.zeros((M.dim, M.dim), dtype=np.int64)
    acc = np.eye(M.dim, dtype=np.int64)
    for _ in range(5):
        norm = (norm + acc) % 5
        acc = acc.dot(mat) % 5
    rng = random.Random(63)
    for _ in range(10):
        v = np.array([rng.randrange(5) for _ in range(M.dim)])
        w = np.zeros(M.dim, dtype=np.int64)
        x = v
        for _ in range(5):
            w = (w + x) % 5
            x = mat.dot(x) % 5
        assert np.array_equal(norm.dot(v) % 5, w)


def test_h1_tower_module_dims_two_ways():
    from hkgtower import modp
    spec, action, _ = s1_setup()
    M = LinearizedModule(spec, action, 40)
    res = h1_cyclic(M, 1, 5)
    mat = M.matrix(1)
    norm = np.zeros((M.dim, M.dim), dtype=np.int64)
    acc = np.eye(M.dim, dtype=np.int64)
    for _ in range(5):
        norm = (norm + acc) % 5
        acc = acc.dot(mat) % 5
    eye = np.eye(M.dim, dtype=np.int64)
    assert res["dim_ker_norm"] == M.dim - modp.rank(norm, 5)
    assert res["dim_image"] == modp.rank((mat - eye) % 5, 5)
    assert res["dim_h1"] == res["dim_ker_norm"] - res["dim_image"]


def test_h1_bad_order():
    M = MatrixModule(5, np.eye(3, dtype=np.int64))
    with pytest.raises(BadOrder):
        h1_cyclic(M, 1, 6)


def test_kernel_of_additive_map():
    spec, action, P1 = s1_setup()
    base = TowerSpec.base(F5, 5)
    group = FiniteGroup.cyclic(5)
    trivial = GroupAction(base, group, [])
    Msmall = LinearizedModule(base, trivial, 13)
    Mbig = LinearizedModule(base, trivial, 66)
    zero = Cocycle(Msmall, {s: base.zero() for s in range(5)})
    const = Cocycle(Msmall, {s: base.constant(s) for s in range(5)})
    noise = Cocycle(Msmall, {s: base.monomial((1,), s) for s in range(5)})
    assert cocycle_check(Msmall, noise)[0]
    out = kernel_of_additive_map(Mbig, P1, [zero, const, noise])
    assert out[0][1] and out[0][2].is_zero
    assert out[1][1]  # P kills the constants pointwise
    assert not out[2][1]  # P(f0) has no (sigma - 1)-preimage here


def test_coboundary_image_under_additive_map_is_coboundary():
    spec, action, P1 = s1_setup()
    Msmall = LinearizedModule(spec.prefix(0), action, 13)
    Mbig = LinearizedModule(spec.prefix(0), action, 66)
    b = spec.prefix(0).monomial((2,), 3).promote(spec)
    cb = coboundary(Msmall, b)
    out = kernel_of_additive_map(Mbig, P1, [cb])
    assert out[0][1]


def test_cocycle_from_action_passes_check():
    spec, action, _ = s1_setup()
    M = LinearizedModule(spec.prefix(0), action, 13)
    C = cocycle_from_action(M, 1)
    assert cocycle_check(M, C)[0]

import random

import pytest

from hkgtower.additive import additive_from_span
from hkgtower.errors import NotAGroup, ShapeError, SpecMismatch
from hkgtower.field import field_make
from hkgtower.tower import (FiniteGroup, GroupAction, TowerElement, TowerSpec,
                            bottom_subgroup, compat_check, cyclic_order_check,
                            representation_jumps, rescale_generator,
                            solve_compatible_cocycles)

F5 = field_make(5)


def as_tower(p=5, lam=13):
    field = field_make(p)
    base = TowerSpec.base(field, p)
    P1 = additive_from_span([field.one])
    spec = base.extend(1, lam, P1, base.monomial((lam,)))
    group = FiniteGroup.cyclic(p)
    action = GroupAction(spec, group,
                         [{j: base.constant(j) for j in range(p)}])
    return spec, action


def z25_tower(lam1=1, lam2=21):
    base = TowerSpec.base(F5, 25)
    P1 = additive_from_span([F5.one])
    pre = base.extend(1, 5 * lam1, P1, base.monomial((lam1,)))
    g25 = FiniteGroup.cyclic(25)
    act = GroupAction(pre, g25,
                      [{j: base.constant(j % 5) for j in range(25)}])
    fam = solve_compatible_cocycles(pre, act, g25, lam2, 1)
    return fam.build()


def test_reduction_rewrites_relation():
    spec, _ = as_tower()
    f0, f1 = spec.gen(0), spec.gen(1)
    assert (f1 ** 4) * f1 == f1 + f0 ** 13
    assert f1 ** 5 == f1 + f0 ** 13


def test_degree_additivity_random():
    spec, _ = as_tower()
    rng = random.Random(50)
    for _ in range(100):
        a = spec.monomial((rng.randint(0, 4), rng.randint(0, 4)),
                          rng.randint(1, 4))
        b = spec.monomial((rng.randint(0, 4), rng.randint(0, 4)),
                          rng.randint(1, 4))
        assert (a * b).degree() == a.degree() + b.degree()


def test_degree_matches_independent_scan():
    spec, _ = as_tower()
    x = spec.monomial((2, 3), 2) + spec.monomial((4, 1), 1)
    assert x.degree() == max(2 * 5 + 3 * 13, 4 * 5 + 1 * 13)


def test_ring_axioms_under_reduction():
    spec, _ = as_tower()
    rng = random.Random(51)
    elems = [spec.monomial((rng.randint(0, 3), rng.randint(0, 6)),
                           rng.randint(1, 4)) for _ in range(6)]
    a, b, c = elems[0] + elems[1], elems[2], elems[3] + elems[4]
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


def test_one_is_identity():
    spec, _ = as_tower()
    x = spec.monomial((3, 2), 4)
    assert x * spec.one() == x


def test_spec_mismatch_rejected():
    spec1, _ = as_tower(5, 13)
    spec2, _ = as_tower(5, 11)
    with pytest.raises(SpecMismatch):
        spec1.gen(1) + spec2.gen(1)


def test_extend_validates_degree():
    base = TowerSpec.base(F5, 5)
    P1 = additive_from_span([F5.one])
    with pytest.raises(ShapeError):
        base.extend(1, 13, P1, base.monomial((12,)))


def test_group_constructors():
    g = FiniteGroup.cyclic(25)
    assert g.order == 25 and g.element_order(1) == 25
    e = FiniteGroup.elementary_abelian(5, 2)
    assert e.order == 25
    assert all(e.element_order(a) == 5 for a in range(1, 25))
    with pytest.raises(NotAGroup):
        FiniteGroup([[0, 1], [0, 1]], (1,))


def test_action_binomial_expansion():
    spec, action = as_tower()
    f1 = spec.gen(1)
    assert action.apply(1, f1) == f1 + 1
    assert action.apply(1, f1 ** 2) == f1 ** 2 + 2 * f1 + 1


def test_action_is_ring_homomorphism_and_composes():
    spec, action = as_tower()
    g = action.group
    rng = random.Random(52)
    for _ in range(25):
        s1, s2 = rng.randrange(5), rng.randrange(5)
        a = spec.monomial((rng.randint(0, 3), rng.randint(0, 4)),
                          rng.randint(1, 4))
        b = spec.monomial((rng.randint(0, 3), rng.randint(0, 4)),
                          rng.randint(1, 4))
        assert action.apply(s1, a * b) == action.apply(s1, a) * action.apply(s1, b)
        assert action.apply(g.mul(s1, s2), a) == action.apply(
            s1, action.apply(s2, a))


def test_action_respects_relations():
    spec, action = as_tower()
    rel = spec.relations[0]
    from hkgtower.additive import additive_eval
    for sigma in range(5):
        lhs = additive_eval(rel.P, action.apply(sigma, spec.gen(1)))
        assert lhs == action.apply(sigma, rel.D.promote(spec))


def test_action_from_generators_matches_table():
    spec, action = as_tower()
    base = spec.prefix(0)
    rebuilt = GroupAction.from_generators(
        spec, action.group, {1: [base.constant(1)]})
    for j in range(5):
        assert rebuilt.cocycle(1, j) == action.cocycle(1, j)


def test_action_from_generators_rejects_inconsistent():
    spec, _ = as_tower()
    base = spec.prefix(0)
    # redundant generating set {sigma, sigma^2} with contradictory values
    table = [[(a + b) % 5 for b in range(5)] for a in range(5)]
    group = FiniteGroup(table, (1, 2))
    with pytest.raises(ShapeError):
        GroupAction.from_generators(
            spec, group, {1: [base.constant(1)], 2: [base.constant(3)]})


def test_compat_check_valid_and_perturbed():
    spec, action = as_tower()
    assert compat_check(spec, action).ok
    base = spec.prefix(0)
    table = {j: TowerElement(base, action.cocycle(1, j).terms)
             for j in range(5)}
    table[2] = table[2] + base.monomial((1,), 3)
    report = compat_check(spec, GroupAction(spec, action.group, [table]))
    assert not report.ok
    assert report.failures  # witness recorded


def test_compat_identity_element_trivial():
    spec, action = as_tower()
    report = compat_check(spec, action)
    assert all(sigma != 0 for _, sigma, _, _ in report.failures)


def test_bottom_subgroup():
    spec2, act2 = z25_tower()
    assert bottom_subgroup(act2, 1) == list(range(25))
    assert bottom_subgroup(act2, 2) == [0, 5, 10, 15, 20]
    assert bottom_subgroup(act2, 3) == [0]


def test_rescale_identity_and_coboundary_shift():
    spec, action = as_tower()
    s_id, a_id = rescale_generator(spec, action, 1, F5.one)
    assert s_id == spec
    assert all(a_id.cocycle(1, j) == action.cocycle(1, j) for j in range(5))
    # lam = 1, a != 0: C' = C + (sigma - 1)a, a pure coboundary shift
    base = spec.prefix(0)
    a = base.monomial((2,), 3)
    s2, a2 = rescale_generator(spec, action, 1, F5.one, a)
    for j in range(5):
        shift = action.apply(j, a.promote(spec)) - a.promote(spec)
        assert a2.cocycle(1, j) == TowerElement(
            spec.prefix(0), (action.cocycle(1, j) + shift).terms)
    assert compat_check(s2, a2).ok


def test_rescale_constants_span_scaled_roots():
    spec, action = as_tower()
    lam = F5(3)
    s2, a2 = rescale_generator(spec, action, 1, lam)
    expected = additive_from_span([lam * F5.one])
    assert s2.relations[0].P == expected


def test_rescale_round_trip_exact():
    spec, action = as_tower()
    rng = random.Random(53)
    for _ in range(5):
        lam = F5(rng.randint(1, 4))
        a = spec.prefix(0).monomial((rng.randint(0, 2),), rng.randint(0, 4))
        s2, a2 = rescale_generator(spec, action, 1, lam, a)
        assert compat_check(s2, a2).ok
        lam_inv = lam.inverse()
        s3, a3 = rescale_generator(s2, a2, 1, lam_inv, a * (-lam_inv))
        assert s3 == spec
        assert all(a3.cocycle(1, j) == action.cocycle(1, j) for j in range(5))


def test_rescale_two_step_tower():
    spec2, act2 = z25_tower()
    for step in (1, 2):
        s_r, a_r = rescale_generator(spec2, act2, step, F5(2),
                                     spec2.prefix(step - 1).one())
        assert compat_check(s_r, a_r).ok


def test_representation_jumps_s1():
    spec, action = as_tower()
    report = representation_jumps(spec, action)
    assert report.shape_ok
    assert [(m, kb, ka) for _, m, kb, ka in report.jumps] == [(13, 5, 1)]
    # c_n = r - 1 with (m_r, r) the first tame element data
    m_r, r = spec.semigroup().first_prime_to_p()
    assert report.jumps[0][0] == r and m_r == 13


def test_representation_jumps_trivial_action():
    spec, action = as_tower()
    trivial = GroupAction(spec, action.group,
                          [{j: spec.prefix(0).zero() for j in range(5)}])
    report = representation_jumps(spec, trivial)
    assert report.jumps == [] and report.shape_ok


def test_representation_jumps_two_step():
    spec2, act2 = z25_tower()
    report = representation_jumps(spec2, act2)
    assert report.shape_ok
    assert [(kb, ka) for _, _, kb, ka in report.jumps] == [(25, 5), (5, 1)]
    assert [m for _, m, _, _ in report.jumps] == [5, 21]


def test_cyclic_order_check():
    spec, action = as_tower()
    assert cyclic_order_check(action, 1)
    zero = GroupAction(spec, action.group,
                       [{j: spec.prefix(0).zero() for j in range(5)}])
    assert not cyclic_order_check(zero, 1)
    spec2, act2 = z25_tower()
    assert cyclic_order_check(act2, 2)


def test_solver_s1_family():
    base = TowerSpec.base(F5, 5)
    group = FiniteGroup.cyclic(5)
    fam = solve_compatible_cocycles(base, GroupAction(base, group, []),
                                    group, 13, 1)
    assert not fam.is_empty
    assert fam.contains({1: base.constant(1)}, base.monomial((13,)))
    spec, action = fam.build()
    assert compat_check(spec, action).ok
    assert cyclic_order_check(action, 1)


def test_solver_rejects_wrong_shapes():
    base = TowerSpec.base(F5, 5)
    group = FiniteGroup.cyclic(5)
    trivial = GroupAction(base, group, [])
    with pytest.raises(ShapeError):
        # rank 2 needs a bottom subgroup of order 25
        solve_compatible_cocycles(base, trivial, group, 13, 2)
    with pytest.raises(ShapeError):
        # no monomial of degree 5 * 4 = 20... (pole 4 < m0) degree 4*5
        solve_compatible_cocycles(base, trivial, group, -1, 1)


def test_solver_empty_for_disallowed_second_jump():
    base = TowerSpec.base(F5, 25)
    P1 = additive_from_span([F5.one])
    pre = base.extend(1, 5, P1, base.monomial((1,)))
    g25 = FiniteGroup.cyclic(25)
    act = GroupAction(pre, g25,
                      [{j: base.constant(j % 5) for j in range(25)}])
    fam = solve_compatible_cocycles(pre, act, g25, 13, 1)
    assert fam.is_empty  # 13 is not congruent to 1 mod 5


def test_json_round_trips():
    spec, action = as_tower()
    assert TowerSpec.from_json(spec.to_json()) == spec
    rebuilt = GroupAction.from_json(spec, action.to_json())
    assert all(rebuilt.cocycle(1, j) == action.cocycle(1, j)
               for j in range(5))
    x = spec.monomial((2, 3), 4) + spec.one()
    assert TowerElement.from_json(spec, x.to_json()) == x

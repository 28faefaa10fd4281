import os
import random

import pytest

from hkgtower.errors import (FractionalValuation, IllegalSubstitution,
                             NotNormalized, RootNotInField, WildRoot)
from hkgtower.field import field_make
from hkgtower.series import LaurentSeries

F5 = field_make(5)
F25 = field_make(5, 2)
F7 = field_make(7)


def rand_series(field, rng, val_range=(-5, 5), prec=24, nonzero=False):
    val = rng.randint(*val_range)
    coeffs = {val + i: field.random_element(rng) for i in range(prec - val)}
    s = LaurentSeries.from_terms(field, coeffs, prec)
    if nonzero and s.is_zero:
        return rand_series(field, rng, val_range, prec, nonzero)
    return s


def test_constructor_normalizes_valuation():
    s = LaurentSeries.from_terms(F5, {3: F5.zero, 4: F5(2)}, 10)
    assert s.val == 4


def test_geometric_series_inverse():
    # 1/(1 - t) = 1 + t + t^2 + ... (classical closed form as oracle)
    one_minus_t = LaurentSeries.one(F5, 16) - LaurentSeries.t(F5, 16)
    inv = one_minus_t.inverse()
    expected = LaurentSeries.from_terms(F5, {i: F5.one for i in range(16)}, 16)
    assert inv == expected


def test_mul_against_long_division_oracle():
    rng = random.Random(10)
    for _ in range(30):
        a = rand_series(F5, rng, nonzero=True)
        b = rand_series(F5, rng, nonzero=True)
        q = a * b
        # dividing the product back must recover the factor
        assert q * b.inverse() == a.truncate(min(a.prec, (q * b.inverse()).prec))


def test_precision_propagation_add_mul():
    a = LaurentSeries.from_terms(F5, {0: F5.one}, 5)
    b = LaurentSeries.from_terms(F5, {2: F5(3)}, 9)
    assert (a + b).prec == 5
    # mul: prec = min(Na + vb, Nb + va)
    assert (a * b).prec == min(5 + 2, 9 + 0)


def test_associativity_and_distributivity():
    rng = random.Random(11)
    for _ in range(20):
        a = rand_series(F25, rng)
        b = rand_series(F25, rng)
        c = rand_series(F25, rng)
        lhs = (a * b) * c
        rhs = a * (b * c)
        assert lhs == rhs
        assert a * (b + c) == a * b + a * c


def test_compose_simple_oracles():
    t = LaurentSeries.t(F5, 12)
    g = t + t * t
    assert (t * t).compose(g) == g * g
    # t^-1 o (t + t^2) = t^-1 (1+t)^-1 = t^-1 - 1 + t - t^2 + ...
    inv = LaurentSeries.monomial(F5, F5.one, -1, 12).compose(g)
    expected = LaurentSeries.from_terms(
        F5, {i: F5((-1) ** (i + 1)) for i in range(-1, 10)}, 10)
    assert inv == expected


def test_compose_requires_positive_valuation():
    t = LaurentSeries.t(F5, 8)
    with pytest.raises(IllegalSubstitution):
        t.compose(LaurentSeries.one(F5, 8))


def test_reversion_round_trip():
    rng = random.Random(12)
    for field in (F5, F25, F7):
        for _ in range(10):
            coeffs = {1: field.one}
            coeffs.update({i: field.random_element(rng) for i in range(2, 20)})
            g = LaurentSeries.from_terms(field, coeffs, 20)
            r = g.reversion()
            t = LaurentSeries.t(field, r.prec)
            assert g.compose(r) == t
            assert r.compose(g) == t


def test_reversion_requires_normalization():
    with pytest.raises(NotNormalized):
        (LaurentSeries.t(F5, 8) * 2).reversion()


def test_pow_frac_hand_checked():
    # (1 + t^2)^(-1/2) over F_5: binomial series with exact coefficients
    a = LaurentSeries.one(F5, 12) + LaurentSeries.monomial(F5, F5.one, 2, 12)
    h = a.pow_frac(-1, 2)
    expected = LaurentSeries.from_terms(
        F5, {0: F5(1), 2: F5(2), 4: F5(1), 10: F5(2)}, 12)
    assert h == expected
    assert h * h * a == LaurentSeries.one(F5, h.prec)


def test_pow_frac_consistency_random():
    rng = random.Random(13)
    for field, m in ((F5, 3), (F7, 4), (F25, 6)):
        for _ in range(10):
            coeffs = {0: field.one}
            coeffs.update({i: field.random_element(rng) for i in range(1, 16)})
            a = LaurentSeries.from_terms(field, coeffs, 16)
            h = a.pow_frac(1, m)
            assert h ** m == a.truncate(h.prec)


def test_pow_frac_wild_and_fractional():
    a = LaurentSeries.one(F5, 8)
    with pytest.raises(WildRoot):
        a.pow_frac(1, 5)
    t = LaurentSeries.t(F5, 8)
    with pytest.raises(FractionalValuation):
        t.pow_frac(1, 2)


def test_pow_frac_root_not_in_field():
    # leading coefficient 2 has no square root in F_5 (squares are 0,1,4)
    a = LaurentSeries.constant(F5, F5(2), 8)
    with pytest.raises(RootNotInField):
        a.pow_frac(1, 2)


def test_json_round_trip():
    rng = random.Random(14)
    s = rand_series(F25, rng)
    assert LaurentSeries.from_json(s.to_json()) == s


def test_kernel_implementations_agree():
    # force the pure-python kernels in a subprocess and compare a composition
    import json
    import subprocess
    import sys
    prog = (
        "import json\n"
        "from hkgtower.field import field_make\n"
        "from hkgtower.series import LaurentSeries\n"
        "import hkgtower.kernels as K\n"
        "F = field_make(5, 2)\n"
        "import random\n"
        "rng = random.Random(99)\n"
        "coeffs = {1: F.one}\n"
        "coeffs.update({i: F.random_element(rng) for i in range(2, 64)})\n"
        "g = LaurentSeries.from_terms(F, coeffs, 64)\n"
        "f = LaurentSeries.from_terms(F, {i: F.random_element(rng) "
        "for i in range(-3, 40)}, 40)\n"
        "print(json.dumps([K.IMPL, f.compose(g).to_json()]))\n"
    )
    outs = []
    for pure in ("0", "1"):
        env = dict(os.environ, HKGTOWER_PURE=pure)
        res = subprocess.run([sys.executable, "-c", prog], env=env,
                             capture_output=True, text=True, check=True)
        outs.append(json.loads(res.stdout))
    impls = {outs[0][0], outs[1][0]}
    assert outs[0][1] == outs[1][1]
    # when the compiled kernel is available the two runs use different code
    if "cython" in impls:
        assert impls == {"cython", "python"}

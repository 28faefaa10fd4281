import pytest

from hkgtower.covers import (DEFAULT_COVER_PRECISION, ASCoverLocal,
                             expand_as_cover, verify_action_transport)
from hkgtower.errors import WildExponent
from hkgtower.field import field_make
from hkgtower.series import LaurentSeries

F5 = field_make(5)
F7 = field_make(7)


def test_expansion_leading_terms():
    cover = expand_as_cover(F5, 13, 256)
    x = cover.x_series
    assert x.val == -5
    coeffs = {e: int(c.coeffs[0]) for e, c in x.terms()}
    # x = t^{-5} (1 - t^{52})^{1/13} = t^{-5} + 3 t^{47} + ...
    assert coeffs[-5] == 1 and coeffs[47] == 3
    assert all(c == 0 for e, c in coeffs.items() if -5 < e < 47)


def test_defining_relation_residual_zero():
    for field, m in ((F5, 13), (F7, 9)):
        cover = expand_as_cover(field, m, 200)
        assert (cover.y_series ** field.p - cover.y_series
                - cover.x_series ** m).is_zero
        assert cover.y_series == LaurentSeries.monomial(
            field, field.one, -m, 200)


def test_wild_exponent_rejected():
    with pytest.raises(WildExponent):
        expand_as_cover(F5, 10)
    with pytest.raises(WildExponent):
        expand_as_cover(F5, 1)


def test_transport_passes():
    for field, m in ((F5, 13), (F7, 9)):
        cover = expand_as_cover(field, m, DEFAULT_COVER_PRECISION)
        for c in range(1, field.p):
            report = verify_action_transport(cover, c)
            assert report.ok and report.y_exact and report.x_fixed
            assert report.break_value == m


def test_transport_trivial_for_zero():
    cover = expand_as_cover(F5, 13, 128)
    report = verify_action_transport(cover, 0)
    assert report.ok and report.break_value is None


def test_transport_detects_corrupted_expansion():
    cover = expand_as_cover(F5, 13, 256)
    bad_x = cover.x_series + LaurentSeries.monomial(F5, F5.one, 3, 256)
    bad = ASCoverLocal(5, 13, 256, bad_x, cover.y_series)
    report = verify_action_transport(bad, 1)
    assert not report.ok and not report.x_fixed
    assert report.x_residual_val is not None
    assert report.y_exact and report.break_is_m  # only x is broken


def test_json_shape():
    cover = expand_as_cover(F5, 13, 64)
    obj = cover.to_json()
    assert obj["p"] == 5 and obj["m"] == 13 and obj["precision"] == 64
    assert LaurentSeries.from_json(obj["x"]) == cover.x_series

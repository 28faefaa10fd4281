"""Local analysis of single-step Artin-Schreier covers y^p - y = x^m at the
wildly ramified point: Laurent expansions of x and y in the canonical
uniformizer t = y^{-1/m}, and the consistency checks tying the function-side
group action to composition with the explicit Nottingham elements.
"""

from dataclasses import dataclass

from .errors import WildExponent
from .nottingham import build_phi, ramification_break
from .series import LaurentSeries

DEFAULT_COVER_PRECISION = 512


@dataclass(frozen=True)
class ASCoverLocal:
    """Expansions at the ramified point of the cover y^p - y = x^m."""
    p: int
    m: int
    precision: int
    x_series: LaurentSeries
    y_series: LaurentSeries

    @property
    def field(self):
        return self.y_series.field

    def to_json(self):
        return {"p": self.p, "m": self.m, "precision": self.precision,
                "x": self.x_series.to_json(), "y": self.y_series.to_json()}


def expand_as_cover(field, m, precision=DEFAULT_COVER_PRECISION):
    """Expand x and y in t = y^{-1/m}: y = t^{-m} and
    x = t^{-p} (1 - t^{(p-1)m})^{1/m}, from x^m = y^p - y.
    """
    p = field.p
    if m % p == 0 or m <= 1:
        raise WildExponent(f"m = {m} must exceed 1 and be prime to p")
    y = LaurentSeries.monomial(field, field.one, -m, precision)
    # y^p - y = t^{-pm} (1 - t^{(p-1)m})
    rhs = y ** p - y
    x = rhs.pow_frac(1, m)
    residual = y ** p - y - x ** m
    if not residual.is_zero:
        raise AssertionError(
            "defining relation fails at working precision")  # pragma: no cover
    return ASCoverLocal(p, m, precision, x, y)


@dataclass
class TransportReport:
    ok: bool
    y_exact: bool          # y o Phi_c == y + c
    x_fixed: bool          # x o Phi_c == x to precision
    break_is_m: bool
    break_value: int | None
    x_residual_val: int | None

    def to_json(self):
        return {"ok": self.ok, "y_exact": self.y_exact,
                "x_fixed": self.x_fixed, "break_is_m": self.break_is_m,
                "break_value": self.break_value,
                "x_residual_val": self.x_residual_val}


def verify_action_transport(cover, c):
    """Check that composing the expansions with Phi_c realizes the cover's
    Galois action: y o Phi_c = y + c, x o Phi_c = x, and the ramification
    break of Phi_c equals m."""
    field = cover.field
    c = field(c)
    if c.is_zero:
        return TransportReport(True, True, True, True, None, None)
    phi = build_phi(field, c, cover.m, cover.precision)
    y_new = cover.y_series.compose(phi.series)
    y_exact = y_new == cover.y_series + c
    x_new = cover.x_series.compose(phi.series)
    diff = x_new - cover.x_series
    x_fixed = diff.is_zero
    x_residual_val = None if diff.is_zero else diff.val
    brk = ramification_break(phi)
    break_is_m = brk == cover.m
    return TransportReport(y_exact and x_fixed and break_is_m,
                           y_exact, x_fixed, break_is_m, brk,
                           x_residual_val)

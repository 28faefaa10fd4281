"""Normalized automorphisms t -> t + a_2 t^2 + ... of k[[t]] under
substitution, the explicit element family t(1 + C t^m)^{-1/m}, order and
ramification-break computation, conjugation and canonical uniformizers.
"""

from dataclasses import dataclass

from .errors import (FieldMismatch, NoBreak, NotAUniformizer, NotNormalized,
                     WildExponent)
from .field import FieldElement
from .series import LaurentSeries

DEFAULT_PRECISION = 64


class NottinghamElement:
    """Group element sigma given by the series sigma(t), val 1, lead 1."""

    __slots__ = ("series",)

    def __init__(self, series):
        if (series.is_zero or series.val != 1
                or series.leading_coeff() != series.field.one):
            raise NotNormalized("Nottingham element needs sigma(t) = t + O(t^2)")
        self.series = series

    @property
    def field(self):
        return self.series.field

    @property
    def prec(self):
        return self.series.prec

    @classmethod
    def identity(cls, field, prec=DEFAULT_PRECISION):
        return cls(LaurentSeries.t(field, prec))

    def __mul__(self, other):
        """(sigma ∘ tau)(t) = sigma(tau(t))."""
        if not isinstance(other, NottinghamElement):
            return NotImplemented
        if other.field is not self.field:
            raise FieldMismatch("elements over different fields")
        return NottinghamElement(self.series.compose(other.series))

    def inverse(self):
        return NottinghamElement(self.series.reversion())

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = NottinghamElement.identity(self.field, self.prec)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def is_identity(self):
        """Identity at the element's working precision."""
        return self.series == LaurentSeries.t(self.field, self.series.prec)

    def __eq__(self, other):
        if not isinstance(other, NottinghamElement):
            return NotImplemented
        return self.series == other.series

    def __repr__(self):
        return f"Nottingham{self.series!r}"

    def to_json(self):
        return self.series.to_json()

    @classmethod
    def from_json(cls, obj):
        return cls(LaurentSeries.from_json(obj))


def nott_mul(sigma, tau):
    return sigma * tau


def build_phi(field, cbar, m, prec=DEFAULT_PRECISION):
    """The element t -> t (1 + cbar * t^m)^{-1/m}.

    cbar may be a field element / int (a constant cocycle value) or a
    LaurentSeries of valuation > -m.
    """
    if m % field.p == 0 or m <= 0:
        raise WildExponent(f"exponent m = {m} must be positive and prime to p")
    if isinstance(cbar, (int, FieldElement)):
        cbar = LaurentSeries.constant(field, field(cbar), prec)
    if not cbar.is_zero and cbar.val <= -m:
        raise NotNormalized(f"cocycle series valuation must exceed -{m}")
    if cbar.is_zero:
        return NottinghamElement.identity(field, prec)
    work = prec + m + 1
    t = LaurentSeries.t(field, work)
    inner = LaurentSeries.one(field, work) + cbar * (t ** m)
    series = t * inner.pow_frac(-1, m)
    return NottinghamElement(series.truncate(min(series.prec, prec)))


@dataclass
class OrderResult:
    """Result of order detection, qualified by the working precision."""
    order: int | None
    h: int | None
    precision: int
    certified: bool

    @property
    def undetermined(self):
        return self.order is None or not self.certified


def nott_order(sigma, max_h=8):
    """Smallest p^h with sigma^{p^h} = t mod t^N, precision-qualified.

    The result is certified only when the previous power's deviation sits
    comfortably below the truncation order (p*(break+1) < N), so that the
    next power could not hide a deviation beyond t^N.
    """
    field = sigma.field
    n = sigma.prec
    cur = sigma
    h = 0
    prev_break = None
    while h <= max_h:
        if cur.is_identity():
            if h == 0:
                return OrderResult(1, 0, n, True)
            certified = prev_break is not None and field.p * (prev_break + 1) < n
            return OrderResult(field.p ** h, h, n, certified)
        try:
            prev_break = ramification_break(cur)
        except NoBreak:
            prev_break = None
        cur = cur ** field.p
        h += 1
    return OrderResult(None, None, n, False)


def ramification_break(sigma):
    """v(sigma(t) - t) - 1: the largest i with sigma in G_i."""
    diff = sigma.series - LaurentSeries.t(sigma.field, sigma.prec)
    if diff.is_zero:
        raise NoBreak(f"identity at precision {sigma.prec}")
    return diff.val - 1


def filtration_jumps(elements):
    """Distinct breaks b_1 < ... < b_mu of a finite subgroup, with |G_{b_i}|.

    ``elements`` must list the whole group (identity included); closure
    under composition is checked at the common precision.
    """
    from .errors import NotAGroup
    if not elements:
        raise NotAGroup("empty element list")
    prec = min(e.prec for e in elements)
    for a in elements:
        for b in elements:
            prod = a * b
            if not any(prod == c for c in elements):
                raise NotAGroup(f"product {a!r} * {b!r} not in the list")
    breaks = []
    for e in elements:
        try:
            breaks.append(ramification_break(e))
        except NoBreak:
            pass  # identity
    jumps = []
    for b in sorted(set(breaks)):
        order = 1 + sum(1 for x in breaks if x >= b)  # identity included
        jumps.append((b, order))
    return jumps


def conjugate(sigma, phi):
    """phi ∘ sigma ∘ phi^{-1} for a uniformizer change phi (val 1, unit lead)."""
    if phi.is_zero or phi.val != 1:
        raise NotAUniformizer("conjugating series must have valuation 1")
    if phi.field is not sigma.field:
        raise FieldMismatch("conjugator over a different field")
    phi_inv = phi._comp_inverse()
    series = phi.compose(sigma.series).compose(phi_inv)
    if series.leading_coeff() == sigma.field.one:
        return NottinghamElement(series)
    return series  # non-normalized: returned as a bare series, tagged by type


def canonical_uniformizer(f, m):
    """t = f^{-1/m} for a function f with val(f) = -m, gcd(m, p) = 1."""
    if f.is_zero or f.val != -m:
        raise NotAUniformizer(f"series must have valuation -{m}")
    return f.pow_frac(-1, m)

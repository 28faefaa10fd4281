"""Additive (F_p-linear) polynomials P(X) = sum a_i X^{p^i}: Moore
determinants, the span-product construction, polymorphic evaluation, and the
induced map on cocycles.
"""

from .errors import CarrierMismatch, DegreeOverflow, DependentSpan
from .field import FieldElement


class AdditivePolynomial:
    """Monic-by-default additive polynomial over a finite field.

    ``coeffs[i]`` is the coefficient of X^{p^i}; the degree is p^n with
    n = len(coeffs) - 1.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        coeffs = tuple(field(c) for c in coeffs)
        if not coeffs or coeffs[-1].is_zero:
            raise ValueError("leading coefficient must be nonzero")
        self.field = field
        self.coeffs = coeffs

    @property
    def p(self):
        return self.field.p

    @property
    def n(self):
        return len(self.coeffs) - 1

    @property
    def is_monic(self):
        return self.coeffs[-1] == self.field.one

    def __eq__(self, other):
        if not isinstance(other, AdditivePolynomial):
            return NotImplemented
        return self.field is other.field and self.coeffs == other.coeffs

    def __call__(self, x):
        return additive_eval(self, x)

    def scaled(self, lam):
        """Coefficientwise multiple lam * P."""
        lam = self.field(lam)
        return AdditivePolynomial(self.field, [lam * c for c in self.coeffs])

    def __repr__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero:
                continue
            parts.append(f"({c})*X^{self.p ** i}")
        return " + ".join(reversed(parts))

    def to_json(self):
        return {"p": self.p, "k": self.field.k,
                "coeffs": [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj):
        from .field import field_make
        field = field_make(obj["p"], obj["k"])
        return cls(field, [field(c) for c in obj["coeffs"]])


def moore_det(w):
    """Determinant of the n x n matrix with entry (i, j) = w_j^(p^i).

    Zero exactly when the entries are F_p-linearly dependent.
    """
    if not w:
        raise ValueError("need at least one element")
    field = w[0].field
    n = len(w)
    p = field.p
    rows = [[x ** (p ** i) for x in w] for i in range(n)]
    return _det(field, rows)


def _det(field, rows):
    n = len(rows)
    rows = [list(r) for r in rows]
    det = field.one
    for col in range(n):
        piv = None
        for r in range(col, n):
            if not rows[r][col].is_zero:
                piv = r
                break
        if piv is None:
            return field.zero
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det = det * rows[col][col]
        inv = rows[col][col].inverse()
        for r in range(col + 1, n):
            factor = rows[r][col] * inv
            if factor.is_zero:
                continue
            for c in range(col, n):
                rows[r][c] = rows[r][c] - factor * rows[col][c]
    return det


def _span(field, w):
    """All p^n elements of the F_p-span of w, or raise DependentSpan."""
    p = field.p
    span = [field.zero]
    for x in w:
        new = []
        for j in range(p):
            scaled = field(j) * x
            new.extend(a + scaled for a in span)
        span = new
    if len(set(span)) != len(span):
        raise DependentSpan(f"{len(w)} elements span fewer than "
                            f"{p ** len(w)} points")
    return span


def additive_from_span(w):
    """P(X) = prod over the F_p-span W of the w_j of (X - a)."""
    if not w:
        raise ValueError("need at least one element")
    field = w[0].field
    span = _span(field, w)
    # ordinary dense polynomial product, low->high coefficients
    poly = [field.one]
    for a in span:
        shifted = [field.zero] + poly
        scaled = [(-a) * c for c in poly] + [field.zero]
        poly = [u + v for u, v in zip(shifted, scaled)]
    p = field.p
    n = len(w)
    coeffs = []
    powers = {p ** i: i for i in range(n + 1)}
    for deg, c in enumerate(poly):
        if deg in powers:
            coeffs.append(c)
        elif not c.is_zero:
            raise AssertionError(
                f"non-p-power term X^{deg} in span product")  # pragma: no cover
    return AdditivePolynomial(field, coeffs)


def additive_from_moore(w):
    """P(X) = Delta(w_1,...,w_n,X) / Delta(w_1,...,w_n), expanded along the
    symbolic column (X, X^p, ..., X^{p^n})."""
    if not w:
        raise ValueError("need at least one element")
    field = w[0].field
    n = len(w)
    p = field.p
    delta = moore_det(w)
    if delta.is_zero:
        raise DependentSpan("Moore determinant vanishes")
    inv = delta.inverse()
    big = [[x ** (p ** i) for x in w] for i in range(n + 1)]
    coeffs = []
    for i in range(n + 1):
        minor = [big[r] for r in range(n + 1) if r != i]
        sign = field.one if (i + n) % 2 == 0 else -field.one
        coeffs.append(sign * _det(field, minor) * inv)
    return AdditivePolynomial(field, coeffs)


def additive_eval(poly, x):
    """Evaluate P at x by iterated p-th powers; x may live in the base field,
    a Laurent-series ring, or a tower ring over the same field."""
    field = poly.field
    if isinstance(x, FieldElement) and x.field is not field:
        raise CarrierMismatch("element over a different field")
    carrier_field = getattr(x, "field", None)
    if carrier_field is not None and carrier_field is not field:
        raise CarrierMismatch("carrier over a different field")
    p = field.p
    result = None
    frob = x
    for i, c in enumerate(poly.coeffs):
        if i > 0:
            frob = frob ** p
        if c.is_zero:
            continue
        term = frob * c
        result = term if result is None else result + term
    return result


def _degree_of(value):
    """Pole degree used for module-bound checks, by carrier type."""
    if isinstance(value, FieldElement):
        return 0
    deg = getattr(value, "degree", None)
    if callable(deg):
        return deg()
    if hasattr(value, "val"):  # Laurent series: pole order at t = 0
        return 0 if value.is_zero else max(0, -value.val)
    raise CarrierMismatch(f"cannot measure degree of {type(value).__name__}")


def additive_apply_cocycle(poly, cocycle, degree_bound=None):
    """The cocycle sigma -> P(C(sigma)).

    ``cocycle`` is any mapping-like object with a ``values`` dict and a
    ``with_values`` constructor (or a plain dict).  When a degree bound is
    supplied (explicitly or by the cocycle's module), images must stay below
    it.
    """
    if isinstance(cocycle, dict):
        values = cocycle
    else:
        values = cocycle.values
        if callable(values):
            values = dict(values())
    if degree_bound is None:
        degree_bound = getattr(cocycle, "degree_bound", None)
    out = {}
    for sigma, v in values.items():
        img = additive_eval(poly, v)
        if degree_bound is not None and _degree_of(img) >= degree_bound:
            raise DegreeOverflow(
                f"P(C(sigma)) has degree {_degree_of(img)} >= bound "
                f"{degree_bound} at sigma = {sigma}")
        out[sigma] = img
    if hasattr(cocycle, "with_values"):
        return cocycle.with_values(out)
    return out

"""Truncated Laurent series over F_q: exact ring arithmetic, composition,
compositional inverse and prime-to-p fractional powers.

A series carries an explicit valuation ``val`` and truncation order
``prec``: the coefficients of t^val .. t^(prec-1) are known exactly and
the tail is O(t^prec).  Every operation propagates ``prec`` to the
provable bound, so downstream checks can refuse under-precise inputs.
Fractional powers are computed by Newton iteration on h^den = f^num,
which only ever divides by den (a unit mod p) -- no p-adic binomials.
"""

import numpy as np

from . import kernels
from .errors import (DivByZero, FieldMismatch, FractionalValuation,
                     IllegalSubstitution, NotNormalized, RootNotInField,
                     WildRoot)
from .field import FieldElement, field_make


def _as_row(elt, field):
    return np.array([elt.coeffs], dtype=np.int64)


def _scalar_mul(arr, elt, field):
    """Multiply every coefficient of arr by the field element elt."""
    if arr.shape[0] == 0 or elt.is_zero:
        return np.zeros_like(arr)
    if field.k == 1:
        return (arr * elt.coeffs[0]) % field.p
    return kernels.mul(arr, _as_row(elt, field), arr.shape[0], field.p, field.red)


def _inv_unit(u, rlen, field):
    """Inverse of a unit power series (u[0] invertible), rlen coefficients."""
    c = FieldElement(field, u[:1][0]) if u.shape[0] else field.zero
    cinv = c.inverse()
    un = _scalar_mul(u[:rlen], cinv, field)  # normalized, un[0] = 1
    b = np.zeros((1, field.k), dtype=np.int64)
    b[0] = field.one.coeffs
    n = 1
    while n < rlen:
        n = min(2 * n, rlen)
        t = kernels.mul(kernels.mul(b, un[:n], n, field.p, field.red),
                        b, n, field.p, field.red)
        nb = np.zeros((n, field.k), dtype=np.int64)
        nb[: b.shape[0]] = 2 * b
        nb[: t.shape[0]] -= t
        b = nb % field.p
    return _scalar_mul(b, cinv, field)


def _pow_arr(u, e, rlen, field):
    """u^e truncated to rlen coefficients; e may be negative for units."""
    if e < 0:
        return _pow_arr(_inv_unit(u, rlen, field), -e, rlen, field)
    result = np.zeros((1, field.k), dtype=np.int64)
    result[0] = field.one.coeffs
    base = u[:rlen]
    while e:
        if e & 1:
            result = kernels.mul(result, base, rlen, field.p, field.red)
        e >>= 1
        if e:
            base = kernels.mul(base, base, rlen, field.p, field.red)
    return result


def _root_unit(a, den, rlen, field):
    """The unique h with h^den = a and h[0] = 1, for a[0] = 1, p ∤ den."""
    minv = field.from_int(den).inverse()
    h = np.zeros((1, field.k), dtype=np.int64)
    h[0] = field.one.coeffs
    n = 1
    while n < rlen:
        n = min(2 * n, rlen)
        him = _pow_arr(_inv_unit(h, n, field), den, n, field)
        e = kernels.mul(a[:n], him, n, field.p, field.red)
        e[0] = (e[0] - field.one.coeffs) % field.p
        corr = _scalar_mul(kernels.mul(h, e, n, field.p, field.red), minv, field)
        nh = np.zeros((n, field.k), dtype=np.int64)
        nh[: h.shape[0]] = h
        nh[: corr.shape[0]] += corr
        h = nh % field.p
    return h


class LaurentSeries:
    """Truncated Laurent series; immutable after construction."""

    __slots__ = ("field", "val", "prec", "arr")

    def __init__(self, field, val, coeffs, prec=None):
        self.field = field
        if isinstance(coeffs, np.ndarray):
            arr = coeffs.astype(np.int64) % field.p
            arr = arr.reshape(-1, field.k)
        else:
            rows = []
            for c in coeffs:
                if isinstance(c, FieldElement):
                    rows.append(c.coeffs)
                elif isinstance(c, int):
                    rows.append((c,) + (0,) * (field.k - 1))
                else:
                    rows.append(tuple(c))
            arr = np.array(rows, dtype=np.int64).reshape(-1, field.k) % field.p
        if prec is None:
            prec = val + arr.shape[0]
        if prec < val + arr.shape[0]:
            arr = arr[: prec - val]
        elif prec > val + arr.shape[0]:
            pad = np.zeros((prec - val - arr.shape[0], field.k), dtype=np.int64)
            arr = np.concatenate([arr, pad]) if arr.size else pad
        # normalize: strip leading zero coefficients
        nz = np.nonzero(arr.any(axis=1))[0]
        if len(nz) == 0:
            self.val = prec
            self.prec = prec
            self.arr = np.zeros((0, field.k), dtype=np.int64)
        else:
            lead = nz[0]
            self.val = val + int(lead)
            self.prec = prec
            self.arr = np.ascontiguousarray(arr[lead:])

    # -- constructors

    @classmethod
    def zero(cls, field, prec):
        return cls(field, prec, [], prec=prec)

    @classmethod
    def one(cls, field, prec):
        return cls(field, 0, [1], prec=prec)

    @classmethod
    def t(cls, field, prec):
        return cls(field, 1, [1], prec=prec)

    @classmethod
    def constant(cls, field, c, prec):
        return cls(field, 0, [field(c)], prec=prec)

    @classmethod
    def monomial(cls, field, c, exp, prec):
        return cls(field, exp, [field(c)], prec=prec)

    @classmethod
    def from_terms(cls, field, terms, prec):
        if not terms:
            return cls.zero(field, prec)
        v = min(terms)
        rows = [field.zero] * (max(max(terms) + 1, prec) - v)
        for e, c in terms.items():
            rows[e - v] = field(c)
        return cls(field, v, rows, prec=prec)

    # -- basic queries

    @property
    def is_zero(self):
        return self.arr.shape[0] == 0

    def coeff(self, i):
        """Coefficient of t^i; raises if i is beyond the known precision."""
        if i >= self.prec:
            raise ValueError(f"coefficient of t^{i} unknown at precision {self.prec}")
        if i < self.val:
            return self.field.zero
        return FieldElement(self.field, self.arr[i - self.val])

    def leading_coeff(self):
        if self.is_zero:
            raise DivByZero("zero series has no leading coefficient")
        return FieldElement(self.field, self.arr[0])

    def terms(self):
        for i in range(self.arr.shape[0]):
            if self.arr[i].any():
                yield self.val + i, FieldElement(self.field, self.arr[i])

    def truncate(self, prec):
        if prec > self.prec:
            raise ValueError("cannot increase precision by truncation")
        if self.is_zero or prec <= self.val:
            return LaurentSeries.zero(self.field, prec)
        return LaurentSeries(self.field, self.val, self.arr[: prec - self.val],
                             prec=prec)

    def _check(self, other):
        if not isinstance(other, LaurentSeries):
            raise TypeError(f"expected LaurentSeries, got {type(other).__name__}")
        if other.field is not self.field:
            raise FieldMismatch("series over different fields")

    def __eq__(self, other):
        """Agreement of all jointly-known coefficients."""
        if not isinstance(other, LaurentSeries) or other.field is not self.field:
            return NotImplemented
        prec = min(self.prec, other.prec)
        a, b = self.truncate(prec), other.truncate(prec)
        return a.val == b.val and np.array_equal(a.arr, b.arr)

    def __hash__(self):
        raise TypeError("LaurentSeries is not hashable")

    def __repr__(self):
        parts = []
        for e, c in list(self.terms())[:8]:
            cs = c.coeffs[0] if self.field.k == 1 else list(c.coeffs)
            parts.append(f"{cs}*t^{e}")
        body = " + ".join(parts) if parts else "0"
        return f"<{body} + O(t^{self.prec})>"

    # -- ring arithmetic

    def __add__(self, other):
        if isinstance(other, (int, FieldElement)):
            other = LaurentSeries.constant(self.field, self.field(other),
                                           max(self.prec, 1))
        self._check(other)
        prec = min(self.prec, other.prec)
        if self.is_zero and other.is_zero:
            return LaurentSeries.zero(self.field, prec)
        v = min(s.val for s in (self, other) if not s.is_zero)
        if prec <= v:
            return LaurentSeries.zero(self.field, prec)
        out = np.zeros((prec - v, self.field.k), dtype=np.int64)
        for s in (self, other):
            if not s.is_zero:
                n = max(0, min(s.arr.shape[0], prec - s.val))
                out[s.val - v: s.val - v + n] += s.arr[:n]
        return LaurentSeries(self.field, v, out % self.field.p, prec=prec)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.field, self.val, (-self.arr) % self.field.p,
                             prec=self.prec)

    def __sub__(self, other):
        if isinstance(other, (int, FieldElement)):
            other = LaurentSeries.constant(self.field, self.field(other),
                                           max(self.prec, 1))
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            c = self.field(other)
            if c.is_zero:
                return LaurentSeries.zero(self.field, self.prec)
            return LaurentSeries(self.field, self.val,
                                 _scalar_mul(self.arr, c, self.field),
                                 prec=self.prec)
        self._check(other)
        va = self.val if not self.is_zero else self.prec
        vb = other.val if not other.is_zero else other.prec
        prec = min(self.prec + vb, other.prec + va)
        if self.is_zero or other.is_zero:
            return LaurentSeries.zero(self.field, prec)
        rel = prec - va - vb
        arr = kernels.mul(self.arr, other.arr, rel, self.field.p, self.field.red)
        return LaurentSeries(self.field, va + vb, arr, prec=prec)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero:
            raise DivByZero("division by zero series")
        r = self.prec - self.val
        arr = _inv_unit(self.arr, r, self.field)
        return LaurentSeries(self.field, -self.val, arr, prec=-self.val + r)

    def __truediv__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self * self.field(other).inverse()
        self._check(other)
        return self * other.inverse()

    def __pow__(self, e):
        if not isinstance(e, int):
            raise TypeError("exponent must be an integer")
        if self.is_zero:
            if e <= 0:
                raise DivByZero("zero series to a non-positive power")
            return LaurentSeries.zero(self.field, self.prec)
        r = self.prec - self.val
        if e == 0:
            return LaurentSeries.one(self.field, r)
        if e < 0:
            return self.inverse() ** (-e)
        arr = _pow_arr(self.arr, e, r, self.field)
        return LaurentSeries(self.field, self.val * e, arr, prec=self.val * e + r)

    # -- composition and inversion

    def compose(self, g):
        """(self ∘ g)(t) = self(g(t)); requires val(g) >= 1."""
        self._check(g)
        if g.is_zero:
            if g.prec < 1:
                raise IllegalSubstitution("substituted series must have valuation >= 1")
            if self.is_zero:
                return LaurentSeries.zero(self.field, self.prec * 1)
            if self.val < 0:
                raise IllegalSubstitution("cannot substitute 0 into a Laurent series")
            return LaurentSeries.constant(self.field, self.coeff(0), g.prec)
        vg, ng = g.val, g.prec
        if vg < 1:
            raise IllegalSubstitution("substituted series must have valuation >= 1")
        if self.is_zero:
            return LaurentSeries.zero(self.field, self.prec * vg)
        vf, nf = self.val, self.prec
        nout = min(nf * vg, ng + (vf - 1) * vg)
        base = vf * vg
        if nout <= base:
            return LaurentSeries.zero(self.field, nout)
        rel = nout - base
        # g as a power series from exponent 0, truncated/padded to rel coeffs
        garr = np.zeros((rel, self.field.k), dtype=np.int64)
        n = min(ng - vg, rel - vg) if rel > vg else 0
        if n > 0:
            garr[vg: vg + n] = g.arr[:n]
        ucomp = kernels.compose(self.arr, garr, rel, self.field.p, self.field.red)
        wpow = _pow_arr(g.arr, vf, rel, self.field)
        arr = kernels.mul(wpow, ucomp, rel, self.field.p, self.field.red)
        return LaurentSeries(self.field, base, arr, prec=nout)

    def reversion(self):
        """g with self∘g = g∘self = t; requires val 1 and leading coeff 1."""
        if self.is_zero or self.val != 1 or self.leading_coeff() != self.field.one:
            raise NotNormalized("reversion requires val 1 and leading coefficient 1")
        return self._comp_inverse()

    def _comp_inverse(self):
        """Compositional inverse for any val-1 series with unit lead."""
        if self.is_zero or self.val != 1:
            raise NotNormalized("compositional inverse requires valuation 1")
        field, p = self.field, self.field.p
        n = self.prec
        farr = np.zeros((n, field.k), dtype=np.int64)
        farr[1:] = self.arr[: n - 1]
        a = self.leading_coeff()
        resid = np.zeros((n, field.k), dtype=np.int64)
        resid[1] = field.one.coeffs
        g = np.zeros((n, field.k), dtype=np.int64)
        fpow = farr  # self^j, starting at j = 1; valuation j, lead a^j
        ainv_pow = field.one
        for j in range(1, n):
            ainv_pow = ainv_pow * a.inverse()
            b = FieldElement(field, resid[j]) * ainv_pow
            g[j] = b.coeffs
            if not b.is_zero:
                resid = (resid - _scalar_mul(fpow, b, field)) % p
            if j < n - 1:
                fpow = kernels.mul(fpow, farr, n, p, field.red)
        return LaurentSeries(field, 1, g[1:], prec=n)

    def pow_frac(self, num, den):
        """The canonical h with h^den = self^num (see RootNotInField rules)."""
        if den == 0:
            raise WildRoot("zero denominator")
        if den < 0:
            num, den = -num, -den
        if den % self.field.p == 0:
            raise WildRoot(f"denominator {den} divisible by p = {self.field.p}")
        if self.is_zero:
            if num <= 0:
                raise DivByZero("fractional power of the zero series")
            return LaurentSeries.zero(self.field, self.prec)
        if (self.val * num) % den != 0:
            raise FractionalValuation(
                f"valuation {self.val}*{num} not divisible by {den}")
        vout = self.val * num // den
        c = self.leading_coeff()
        root = self.field.nth_root(c ** num, den)
        if root is None:
            raise RootNotInField(
                f"leading coefficient has no {den}-th root in F_{self.field.q}")
        r = self.prec - self.val
        u = _scalar_mul(self.arr, c.inverse(), self.field)  # u[0] = 1
        a = _pow_arr(u, num, r, self.field)
        h = _root_unit(a, den, r, self.field)
        arr = _scalar_mul(h, root, self.field)
        return LaurentSeries(self.field, vout, arr, prec=vout + r)

    # -- serialization

    def to_json(self):
        return {
            "p": self.field.p,
            "k": self.field.k,
            "val": int(self.val),
            "prec": int(self.prec),
            "coeffs": [[int(x) for x in row] for row in self.arr],
        }

    @classmethod
    def from_json(cls, obj):
        field = field_make(obj["p"], obj["k"])
        arr = np.array(obj["coeffs"], dtype=np.int64).reshape(-1, field.k)
        return cls(field, obj["val"], arr, prec=obj["prec"])


# -- spec-level operation wrappers


def series_arith(a, b, op):
    """Ring operation dispatch: op in {add, sub, mul, div}."""
    ops = {"add": lambda: a + b, "sub": lambda: a - b,
           "mul": lambda: a * b, "div": lambda: a / b}
    if op not in ops:
        raise ValueError(f"unknown op {op!r}")
    return ops[op]()


def compose(f, g):
    return f.compose(g)


def reversion(f):
    return f.reversion()


def pow_frac(f, num, den):
    return f.pow_frac(num, den)

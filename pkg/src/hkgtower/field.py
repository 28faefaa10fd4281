"""Exact arithmetic in F_q, q = p^k with p >= 5 prime.

Elements are coordinate vectors in the polynomial basis of
F_p[x]/(modulus).  The modulus is the canonical (lexicographically
smallest, coefficients compared low-degree-first) monic irreducible of
degree k, so two fields with equal (p, k) are interchangeable.
"""

from itertools import product

import numpy as np

from .errors import InvalidField, FieldMismatch


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# -- polynomials over F_p: lists of ints, low degree first, no trailing zeros


def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _ptrim(out)


def _pmod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        a = _ptrim(a)
        if len(a) - 1 < dm:
            break
        c = (a[-1] * inv) % p
        shift = len(a) - 1 - dm
        for i, y in enumerate(m):
            a[shift + i] = (a[shift + i] - c * y) % p
        a = _ptrim(a)
    return a


def _ppowmod(a, e, m, p):
    result = [1]
    base = _pmod(a, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a = _pmod(a, b, p)
        a, b = b, a
    return a


def _psub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _ptrim([(x - y) % p for x, y in zip(a, b)])


def _is_irreducible(f, p):
    """Rabin test for a monic polynomial over F_p."""
    k = len(f) - 1
    if k == 1:
        return True
    x = [0, 1]
    xq = _ppowmod(x, p ** k, f, p)
    if _psub(xq, x, p):
        return False
    for r in {d for d in range(2, k + 1) if _is_prime(d) and k % d == 0}:
        xq = _ppowmod(x, p ** (k // r), f, p)
        g = _pgcd(f, _psub(xq, x, p), p)
        if len(g) - 1 > 0:
            return False
    return True


def _canonical_modulus(p, k):
    if k == 1:
        return (0, 1)
    for lower in product(range(p), repeat=k):
        f = list(lower) + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise InvalidField(f"no irreducible of degree {k} over F_{p}")  # unreachable


class FieldElement:
    """Element of F_q as a length-k coordinate tuple."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = tuple(c % field.p for c in coeffs)
        if len(self.coeffs) != field.k:
            raise InvalidField("coordinate vector has wrong length")

    @property
    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def _rhs(self, other):
        if isinstance(other, int):
            return self.field.from_int(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field is not self.field:
            raise FieldMismatch("elements from different fields")
        return other

    def __add__(self, other):
        other = self._rhs(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field,
                            [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._rhs(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._rhs(other)
        if other is NotImplemented:
            return other
        f = self.field
        if f.k == 1:
            return FieldElement(f, (self.coeffs[0] * other.coeffs[0],))
        conv = [0] * (2 * f.k - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    conv[i + j] += a * b
        out = [c % f.p for c in conv[:f.k]]
        for w in range(f.k, 2 * f.k - 1):
            if conv[w]:
                row = f.red[w - f.k]
                for j in range(f.k):
                    out[j] = (out[j] + conv[w] * row[j]) % f.p
        return FieldElement(f, out)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero:
            from .errors import DivByZero
            raise DivByZero("inverse of zero field element")
        return self ** (self.field.q - 2)

    def __truediv__(self, other):
        other = self._rhs(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.from_int(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __lt__(self, other):
        # fixed total order used for canonical root selection
        return self.coeffs < self._rhs(other).coeffs

    def __repr__(self):
        return f"Fq({self.field.p}^{self.field.k}; {[int(c) for c in self.coeffs]})"

    def to_json(self):
        return [int(c) for c in self.coeffs]


class Field:
    """Descriptor of F_{p^k} with its canonical modulus.  Use field_make()."""

    def __init__(self, p, k, _token=None):
        if _token is not _TOKEN:
            raise InvalidField("use field_make(p, k)")
        self.p = p
        self.k = k
        self.q = p ** k
        self.modulus = _canonical_modulus(p, k)
        # red[w - k] = coordinates of x^w mod modulus, for k <= w <= 2k-2
        red = []
        cur = [(-c) % p for c in self.modulus[:k]]  # x^k
        for _ in range(k - 1):
            red.append(list(cur))
            cur = _pmod([0] + cur, list(self.modulus), p)
            cur = cur + [0] * (k - len(cur))
        self.red = np.array(red, dtype=np.int64).reshape(max(k - 1, 0), k)
        self.zero = FieldElement(self, (0,) * k)
        self.one = FieldElement(self, (1,) + (0,) * (k - 1))

    def __call__(self, value):
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise FieldMismatch("element from another field")
            return value
        if isinstance(value, int):
            return self.from_int(value)
        return FieldElement(self, list(value))

    def from_int(self, n):
        return FieldElement(self, (n,) + (0,) * (self.k - 1))

    def gen(self):
        """Image of x, a generator of the polynomial basis (k >= 2)."""
        if self.k == 1:
            return self.one
        return FieldElement(self, (0, 1) + (0,) * (self.k - 2))

    def elements(self):
        """All q elements in the fixed total (lexicographic) order."""
        for coeffs in product(range(self.p), repeat=self.k):
            yield FieldElement(self, coeffs)

    def nth_root(self, x, n):
        """Canonical (smallest in the total order) y with y^n = x, or None."""
        best = None
        for y in self.elements():
            if y ** n == x:
                best = y if best is None else min(best, y)
        return best

    def random_element(self, rng, nonzero=False):
        while True:
            e = FieldElement(self, [rng.randrange(self.p) for _ in range(self.k)])
            if not (nonzero and e.is_zero):
                return e

    def __repr__(self):
        return f"F_{self.p}^{self.k}"

    def to_json(self):
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}


_TOKEN = object()
_CACHE = {}


def field_make(p, k=1):
    """The canonical field descriptor for F_{p^k}; cached and deterministic."""
    if not isinstance(p, int) or not isinstance(k, int):
        raise InvalidField("p and k must be integers")
    if not _is_prime(p) or p < 5:
        raise InvalidField(f"p must be a prime >= 5, got {p}")
    if k < 1:
        raise InvalidField(f"extension degree must be >= 1, got {k}")
    key = (p, k)
    if key not in _CACHE:
        _CACHE[key] = Field(p, k, _token=_TOKEN)
    return _CACHE[key]

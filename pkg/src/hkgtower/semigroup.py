"""Numerical (Weierstrass) semigroups and the bounded monomial modules
spanned by tower generators.
"""

from dataclasses import dataclass, field as dc_field
from math import gcd

from .errors import InfiniteGaps, NoTameElement


class NumericalSemigroup:
    """Semigroup generated by positive integers with gcd 1."""

    def __init__(self, generators, p=None):
        gens = sorted(set(int(g) for g in generators))
        if not gens or gens[0] <= 0:
            raise ValueError("generators must be positive integers")
        self.generators = tuple(gens)
        self.p = p
        g = 0
        for x in gens:
            g = gcd(g, x)
        self._gcd = g

    # Apery set of the smallest generator: ap[r] = least element = r mod g0
    def _apery(self):
        if self._gcd != 1:
            raise InfiniteGaps(f"gcd of generators is {self._gcd}")
        g0 = self.generators[0]
        ap = [None] * g0
        ap[0] = 0
        changed = True
        while changed:
            changed = False
            for r in range(g0):
                if ap[r] is None:
                    continue
                for g in self.generators[1:]:
                    x = ap[r] + g
                    rr = x % g0
                    if ap[rr] is None or x < ap[rr]:
                        ap[rr] = x
                        changed = True
        return ap

    def membership(self, x):
        """(x in S, witness) where witness is one exponent vector."""
        if x < 0:
            return False, None
        if x == 0:
            return True, tuple(0 for _ in self.generators)
        gens = self.generators

        def search(rem, i):
            if rem == 0:
                return ()
            if i >= len(gens):
                return None
            g = gens[len(gens) - 1 - i]
            for a in range(rem // g, -1, -1):
                tail = search(rem - a * g, i + 1)
                if tail is not None:
                    return tail + (a,)
            return None

        w = search(x, 0)
        if w is None:
            return False, None
        return True, w

    def gaps(self):
        """All nonnegative integers not in the semigroup."""
        ap = self._apery()
        g0 = self.generators[0]
        out = []
        for r in range(g0):
            x = r
            while x < ap[r]:
                out.append(x)
                x += g0
        return sorted(out)

    def elements_up_to(self, bound):
        """Sorted semigroup elements < bound."""
        ap = self._apery()
        g0 = self.generators[0]
        out = []
        for r in range(g0):
            x = ap[r]
            while x < bound:
                out.append(x)
                x += g0
        return sorted(out)

    def __contains__(self, x):
        return self.membership(x)[0]

    def first_prime_to_p(self):
        """(m, r): the least element m of S with p ∤ m, and its index m = m_r."""
        if self.p is None:
            raise ValueError("semigroup has no residue characteristic attached")
        if all(g % self.p == 0 for g in self.generators):
            raise NoTameElement("all generators divisible by p")
        bound = min(g for g in self.generators if g % self.p != 0) + 1
        elems = self.elements_up_to(bound)
        for i, m in enumerate(elems):
            if m % self.p != 0:
                return m, i
        raise NoTameElement("unreachable")  # pragma: no cover

    def is_minimal_generator(self, g):
        others = [x for x in self.generators if x != g]
        if not others:
            return True
        sub = NumericalSemigroup(others, self.p)
        if sub._gcd != 1:
            # sieve by hand: g in <others> iff representable
            return not _representable(g, others)
        return g not in sub

    def to_json(self):
        return {"p": self.p, "generators": list(self.generators)}


def _representable(x, gens):
    reach = [False] * (x + 1)
    reach[0] = True
    for i in range(1, x + 1):
        for g in gens:
            if g <= i and reach[i - g]:
                reach[i] = True
                break
    return reach[x]


def sg_membership(s, x):
    return s.membership(x)


def sg_gaps(s):
    return s.gaps()


def sg_first_prime_to_p(s):
    return s.first_prime_to_p()


@dataclass(frozen=True)
class MonomialBasis:
    """Monomials f0^a0 .. fs^as with a_i < p^{n_i} (i >= 1) and degree < bound.

    Degrees are computed against the pole orders ``poles``; the list is
    sorted by degree and all degrees are pairwise distinct for minimally
    generated pole data.
    """

    p: int
    poles: tuple
    n: tuple
    bound: int
    s: int
    monomials: tuple = dc_field(default=())  # ((exps, degree), ...)

    @property
    def dim(self):
        return len(self.monomials)

    def degrees(self):
        return [d for _, d in self.monomials]

    def index_of(self, exps):
        for i, (e, _) in enumerate(self.monomials):
            if e == tuple(exps):
                return i
        raise KeyError(exps)

    def to_json(self):
        return {"p": self.p, "poles": list(self.poles), "n": list(self.n),
                "bound": self.bound, "s": self.s,
                "monomials": [{"exps": list(e), "degree": d}
                              for e, d in self.monomials]}


def module_basis(p, poles, n, bound):
    """Enumerate the bounded monomial module for generators with the given
    pole orders; ``n[i-1]`` bounds the exponent of generator i (a_i < p^n_i),
    the exponent of generator 0 is bounded only by the degree constraint.
    """
    poles = tuple(int(x) for x in poles)
    n = tuple(int(x) for x in n)
    s = 0
    for i, m in enumerate(poles):
        if m < bound:
            s = i
    monos = []

    def rec(i, exps, deg):
        if i < 0:
            monos.append((tuple(reversed(exps)), deg))
            return
        if i == 0:
            a = 0
            while deg + a * poles[0] < bound:
                rec(i - 1, exps + [a], deg + a * poles[0])
                a += 1
        else:
            for a in range(p ** n[i - 1]):
                d = deg + a * poles[i]
                if d >= bound:
                    break
                rec(i - 1, exps + [a], d)

    top = len(poles) - 1
    rec(top, [], 0)
    monos.sort(key=lambda md: (md[1], md[0]))
    return MonomialBasis(p, poles, n, bound, s, tuple(monos))

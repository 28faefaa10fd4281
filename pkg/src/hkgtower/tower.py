"""Artin-Schreier tower arithmetic: tower specifications and elements with
reduction by the defining relations, group actions given by cocycle tables,
the compatibility equation P_i(C_i(sigma)) = (sigma - 1) D_i, generator
rescaling, representation-filtration jumps, and the F_p-linear solver that
synthesizes compatible cocycle/relation data for a new tower step.
"""

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import modp
from .additive import AdditivePolynomial, additive_eval, additive_from_span
from .errors import (BadOrder, CarrierMismatch, FieldMismatch, NotCyclic,
                     ShapeError, SpecMismatch)
from .field import FieldElement
from .semigroup import NumericalSemigroup, module_basis


def _trim(exps):
    exps = tuple(exps)
    while exps and exps[-1] == 0:
        exps = exps[:-1]
    return exps


def _add_exps(a, b):
    n = max(len(a), len(b))
    a = a + (0,) * (n - len(a))
    b = b + (0,) * (n - len(b))
    return tuple(x + y for x, y in zip(a, b))


@dataclass(frozen=True)
class Relation:
    """One tower step: P(f_i) = D with P additive of degree p^{n_i}."""
    P: AdditivePolynomial
    D: "TowerElement"


class TowerSpec:
    """Generators f_0, ..., f_s with pole orders ``poles`` and, for each
    i >= 1, the relation P_i(f_i) = D_i with D_i supported on f_0..f_{i-1}.
    """

    __slots__ = ("field", "n", "poles", "relations")

    def __init__(self, field, n, poles, relations):
        self.field = field
        self.n = tuple(int(x) for x in n)
        self.poles = tuple(int(x) for x in poles)
        self.relations = tuple(relations)
        if len(self.poles) != len(self.n) + 1:
            raise ShapeError("need one pole order per generator")
        if len(self.relations) != len(self.n):
            raise ShapeError("need one relation per step")

    @classmethod
    def base(cls, field, m0):
        """Rational bottom: the single generator f_0 of pole order m0."""
        return cls(field, (), (int(m0),), ())

    def extend(self, n_i, pole, P, D):
        """Append generator f_{s+1} with relation P(f_{s+1}) = D."""
        if P.field is not self.field:
            raise FieldMismatch("relation polynomial over a different field")
        if P.n != n_i or not P.is_monic:
            raise ShapeError(f"P must be monic of degree p^{n_i}")
        if D.max_gen() > self.s:
            raise ShapeError("D must be supported on existing generators")
        if D.degree() != self.field.p ** n_i * pole:
            raise ShapeError(
                f"deg D = {D.degree()} but the relation needs "
                f"{self.field.p ** n_i} * {pole}")
        new = TowerSpec(self.field, self.n + (int(n_i),),
                        self.poles + (int(pole),),
                        self.relations + (Relation(P, D),))
        return new

    @property
    def s(self):
        return len(self.n)

    @property
    def jumps(self):
        """Prime-to-p parts of the pole orders of f_1..f_s."""
        out = []
        for m in self.poles[1:]:
            while m % self.field.p == 0:
                m //= self.field.p
            out.append(m)
        return tuple(out)

    def validate(self):
        """Full-tower invariants: the top pole must be prime to p."""
        if self.s and self.poles[-1] % self.field.p == 0:
            raise ShapeError("top pole order must be prime to p")
        return True

    def semigroup(self):
        return NumericalSemigroup(self.poles, self.field.p)

    def basis(self, bound):
        return module_basis(self.field.p, self.poles, self.n, bound)

    def prefix(self, steps):
        """The sub-tower with generators f_0..f_steps."""
        return TowerSpec(self.field, self.n[:steps], self.poles[:steps + 1],
                         self.relations[:steps])

    def __eq__(self, other):
        if not isinstance(other, TowerSpec):
            return NotImplemented
        return (self.field is other.field and self.n == other.n
                and self.poles == other.poles
                and all(a.P == b.P and a.D.terms == b.D.terms
                        for a, b in zip(self.relations, other.relations)))

    def __repr__(self):
        return (f"TowerSpec(p={self.field.p}^{self.field.k}, "
                f"poles={self.poles}, n={self.n})")

    # -- element constructors

    def zero(self):
        return TowerElement(self, {})

    def one(self):
        return TowerElement(self, {(): self.field.one})

    def constant(self, c):
        c = self.field(c)
        return TowerElement(self, {(): c} if not c.is_zero else {})

    def gen(self, i):
        if not 0 <= i <= self.s:
            raise ShapeError(f"no generator {i}")
        return TowerElement(self, {_trim((0,) * i + (1,)): self.field.one})

    def monomial(self, exps, coeff=1):
        coeff = self.field(coeff)
        if coeff.is_zero:
            return self.zero()
        return TowerElement(self, {_trim(exps): coeff})

    def to_json(self):
        return {"field": self.field.to_json(), "s": self.s,
                "n": list(self.n), "poles": list(self.poles),
                "jumps": list(self.jumps),
                "relations": [{"P": r.P.to_json(), "D": r.D.to_json()}
                              for r in self.relations]}

    @classmethod
    def from_json(cls, obj):
        from .field import field_make
        field = field_make(obj["field"]["p"], obj["field"]["k"])
        spec = cls.base(field, obj["poles"][0])
        for i, rel in enumerate(obj["relations"]):
            P = AdditivePolynomial.from_json(rel["P"])
            D = TowerElement.from_json(spec, rel["D"])
            spec = spec.extend(obj["n"][i], obj["poles"][i + 1], P, D)
        return spec


class TowerElement:
    """Element of the tower ring in reduced form: a finite sum of monomials
    prod f_i^{a_i} with 0 <= a_i < p^{n_i} for i >= 1 and coefficients in the
    base field.  Exponent keys are stored with trailing zeros trimmed, so an
    element embeds unchanged into any extension of its spec.
    """

    __slots__ = ("spec", "terms")

    def __init__(self, spec, terms, reduce=True):
        clean = {}
        for exps, c in terms.items():
            if c.is_zero:
                continue
            clean[_trim(exps)] = c
        if reduce and any(self._overflow(spec, e) for e in clean):
            clean = _reduce_terms(spec, clean)
        self.spec = spec
        self.terms = clean

    @staticmethod
    def _overflow(spec, exps):
        p = spec.field.p
        return any(exps[i] >= p ** spec.n[i - 1]
                   for i in range(1, len(exps)))

    @property
    def field(self):
        return self.spec.field

    @property
    def is_zero(self):
        return not self.terms

    def max_gen(self):
        """Largest generator index appearing (-1 for constants)."""
        return max((len(e) - 1 for e in self.terms), default=-1)

    def degree(self):
        """Pole order: max over monomials of sum a_i * pole_i (0 for 0)."""
        if not self.terms:
            return 0
        return max(sum(a * m for a, m in zip(e, self.spec.poles))
                   for e in self.terms)

    def promote(self, spec):
        """The same element viewed in an extension of its spec."""
        if spec.poles[:len(self.spec.poles)] != self.spec.poles:
            raise SpecMismatch("not an extension of the element's spec")
        return TowerElement(spec, self.terms, reduce=False)

    def constant_part(self):
        return self.terms.get((), self.field.zero)

    def is_constant(self):
        return all(e == () for e in self.terms)

    def _coerce(self, other):
        if isinstance(other, TowerElement):
            if other.spec.poles != self.spec.poles:
                raise SpecMismatch("elements over different tower specs")
            return other
        if isinstance(other, (int, FieldElement)):
            return self.spec.constant(other)
        raise CarrierMismatch(f"cannot combine with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, self.field.zero) + c
        return TowerElement(self.spec, terms, reduce=False)

    __radd__ = __add__

    def __neg__(self):
        return TowerElement(self.spec, {e: -c for e, c in self.terms.items()},
                            reduce=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            c = self.field(other)
            return TowerElement(
                self.spec, {e: v * c for e, v in self.terms.items()},
                reduce=False)
        other = self._coerce(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exps(e1, e2)
                c = c1 * c2
                if e in terms:
                    terms[e] = terms[e] + c
                else:
                    terms[e] = c
        return TowerElement(self.spec, terms)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative tower powers are not defined")
        result = self.spec.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, FieldElement)):
            other = self.spec.constant(other)
        if not isinstance(other, TowerElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "Tower<0>"
        parts = []
        for e in sorted(self.terms, key=lambda ex: (len(ex), ex)):
            c = self.terms[e]
            mono = "*".join(f"f{i}^{a}" for i, a in enumerate(e) if a)
            parts.append(f"({c}){'*' + mono if mono else ''}")
        return "Tower<" + " + ".join(parts) + ">"

    def to_json(self):
        items = sorted(self.terms.items())
        return [{"exps": list(e), "coeff": c.to_json()} for e, c in items]

    @classmethod
    def from_json(cls, spec, obj):
        terms = {_trim(t["exps"]): spec.field(t["coeff"]) for t in obj}
        return cls(spec, terms)


def _reduce_terms(spec, terms):
    """Rewrite f_i^{p^{n_i}} -> D_i - sum_j c_j f_i^{p^j} to normal form."""
    p = spec.field.p
    acc = {}
    stack = list(terms.items())
    while stack:
        exps, coeff = stack.pop()
        if coeff.is_zero:
            continue
        hit = None
        for i in range(len(exps) - 1, 0, -1):
            if exps[i] >= p ** spec.n[i - 1]:
                hit = i
                break
        if hit is None:
            if exps in acc:
                acc[exps] = acc[exps] + coeff
            else:
                acc[exps] = coeff
            continue
        i = hit
        cap = p ** spec.n[i - 1]
        base = list(exps)
        base[i] -= cap
        rel = spec.relations[i - 1]
        for dexps, dc in rel.D.terms.items():
            stack.append((_add_exps(_trim(base), dexps), coeff * dc))
        for j in range(rel.P.n):
            cj = rel.P.coeffs[j]
            if cj.is_zero:
                continue
            lower = list(base)
            lower[i] += p ** j
            stack.append((_trim(lower), -cj * coeff))
    return {e: c for e, c in acc.items() if not c.is_zero}


def tower_mul(a, b):
    return a * b


# ---------------------------------------------------------------------------
# finite p-groups as explicit multiplication tables


class FiniteGroup:
    """Finite group on indices 0..order-1 with 0 the identity."""

    __slots__ = ("table", "generators", "_inv", "_orders")

    def __init__(self, table, generators):
        from .errors import NotAGroup
        self.table = [list(row) for row in table]
        n = len(self.table)
        for row in self.table:
            if len(row) != n or sorted(row) != list(range(n)):
                raise NotAGroup("multiplication table is not a Latin square")
        if any(self.table[0][j] != j or self.table[j][0] != j
               for j in range(n)):
            raise NotAGroup("index 0 is not the identity")
        self.generators = tuple(generators)
        self._inv = [None] * n
        for a in range(n):
            for b in range(n):
                if self.table[a][b] == 0:
                    self._inv[a] = b
        self._orders = None
        if sorted(self.closure(self.generators)) != list(range(n)):
            raise NotAGroup("distinguished generators do not generate")

    @classmethod
    def cyclic(cls, order):
        table = [[(a + b) % order for b in range(order)]
                 for a in range(order)]
        return cls(table, (1 % order,) if order > 1 else (0,))

    @classmethod
    def elementary_abelian(cls, p, rank):
        order = p ** rank
        digits = [[(i // p ** j) % p for j in range(rank)]
                  for i in range(order)]
        def idx(d):
            return sum(x * p ** j for j, x in enumerate(d))
        table = [[idx([(x + y) % p for x, y in zip(digits[a], digits[b])])
                  for b in range(order)] for a in range(order)]
        return cls(table, tuple(p ** j for j in range(rank)))

    @property
    def order(self):
        return len(self.table)

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self._inv[a]

    def power(self, a, e):
        e %= self.element_order(a)
        r = 0
        for _ in range(e):
            r = self.table[r][a]
        return r

    def element_order(self, a):
        x = a
        n = 1
        while x != 0:
            x = self.table[x][a]
            n += 1
        return n

    def closure(self, gens):
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def cyclic_generator(self):
        """An element of full order, or None."""
        for a in range(self.order):
            if self.element_order(a) == self.order:
                return a
        return None

    def to_json(self):
        return {"kind": "table", "table": self.table,
                "generators": list(self.generators)}

    @classmethod
    def from_json(cls, obj):
        kind = obj.get("kind", "table")
        if kind == "cyclic":
            return cls.cyclic(obj["order"])
        if kind == "elem_abelian":
            return cls.elementary_abelian(obj["p"], obj["rank"])
        return cls(obj["table"], obj["generators"])


# ---------------------------------------------------------------------------
# actions


class GroupAction:
    """Action of a finite group on a tower, given by cocycle tables:
    sigma(f_i) = f_i + C_i(sigma), with values supported on f_0..f_{i-1}.
    f_0 is fixed (an optional C_0 table is accepted and applied the same
    way when supplied).
    """

    __slots__ = ("spec", "group", "cocycles", "c0", "_gen_cache")

    def __init__(self, spec, group, cocycles, c0=None):
        self.spec = spec
        self.group = group
        cocycles = [dict(t) for t in cocycles]
        if len(cocycles) != spec.s:
            raise ShapeError("need one cocycle table per tower step")
        for i, table in enumerate(cocycles, start=1):
            for sigma, v in table.items():
                if v.max_gen() >= i:
                    raise ShapeError(
                        f"C_{i}({sigma}) involves generator {v.max_gen()}")
                if v.degree() >= spec.poles[i]:
                    raise ShapeError(
                        f"C_{i}({sigma}) has degree {v.degree()} >= "
                        f"{spec.poles[i]}")
            if not table.get(0, spec.zero()).is_zero:
                raise ShapeError(f"C_{i}(1) must vanish")
            if set(table) != set(range(group.order)):
                raise ShapeError(f"C_{i} must be defined on every element")
        self.cocycles = tuple(cocycles)
        self.c0 = dict(c0) if c0 else None
        self._gen_cache = {}

    def cocycle(self, i, sigma):
        """C_i(sigma) as an element of the full spec; C_0 defaults to 0."""
        if i == 0:
            if self.c0 is None:
                return self.spec.zero()
            return self.c0[sigma].promote(self.spec)
        return self.cocycles[i - 1][sigma].promote(self.spec)

    def with_values(self, i, table):
        """A copy with the step-i cocycle table replaced."""
        cocycles = list(self.cocycles)
        cocycles[i - 1] = table
        return GroupAction(self.spec, self.group, cocycles, self.c0)

    @classmethod
    def from_generators(cls, spec, group, gen_cocycles, c0=None):
        """Extend cocycle values given on the distinguished generators to the
        whole group by C(sigma*g) = C(sigma) + sigma*C(g), checking
        consistency across different factorizations.
        """
        tables = []
        partial = cls(spec, group,
                      [{s: spec.zero() for s in range(group.order)}
                       for _ in range(spec.s)], c0)
        for i in range(1, spec.s + 1):
            table = {0: spec.zero()}
            frontier = [0]
            while frontier:
                nxt = []
                for sigma in frontier:
                    for g in group.generators:
                        tau = group.mul(sigma, g)
                        val = (table[sigma]
                               + partial.apply(sigma, gen_cocycles[g][i - 1]))
                        if tau in table:
                            if table[tau] != val:
                                raise ShapeError(
                                    f"generator values do not define a "
                                    f"cocycle at step {i} (element {tau})")
                        else:
                            table[tau] = val
                            nxt.append(tau)
                frontier = nxt
            tables.append(table)
            partial = partial.with_values(i, table)
        return partial

    def apply(self, sigma, x):
        """sigma(x) for a tower element x, term by term."""
        if x.spec.poles != self.spec.poles:
            x = x.promote(self.spec)
        if sigma == 0:
            return x
        out = self.spec.zero()
        for exps, c in x.terms.items():
            term = self.spec.constant(c)
            for i, a in enumerate(exps):
                if a == 0:
                    continue
                key = (sigma, i)
                img = self._gen_cache.get(key)
                if img is None:
                    img = self.spec.gen(i) + self.cocycle(i, sigma)
                    self._gen_cache[key] = img
                term = term * img ** a
            out = out + term
        return out

    def to_json(self):
        return {"group": self.group.to_json(),
                "cocycles": [
                    {str(s): v.to_json() for s, v in sorted(t.items())}
                    for t in self.cocycles]}

    @classmethod
    def from_json(cls, spec, obj):
        group = FiniteGroup.from_json(obj["group"])
        cocycles = [{int(s): TowerElement.from_json(spec, v)
                     for s, v in t.items()} for t in obj["cocycles"]]
        return cls(spec, group, cocycles)


def action_apply(action, sigma, x):
    return action.apply(sigma, x)


# ---------------------------------------------------------------------------
# compatibility


@dataclass
class CompatReport:
    ok: bool
    failures: list = dc_field(default_factory=list)
    restrictions: list = dc_field(default_factory=list)

    def to_json(self):
        return {
            "ok": self.ok,
            "failures": [
                {"step": i, "sigma": s, "lhs": lhs.to_json(),
                 "rhs": rhs.to_json()} for i, s, lhs, rhs in self.failures],
            "restrictions": self.restrictions,
        }


def bottom_subgroup(action, i):
    """Elements acting trivially on f_0..f_{i-1} (the Galois group of the
    step-i extension over its base)."""
    out = []
    for sigma in range(action.group.order):
        if all(action.cocycle(j, sigma).is_zero for j in range(i)):
            out.append(sigma)
    return out


def compat_check(spec, action):
    """Verify P_i(C_i(sigma)) = sigma(D_i) - D_i for every step and every
    group element, plus the restriction data: on the subgroup fixing the
    lower steps the values C_i are constants forming an F_p-space of
    dimension n_i on which P_i vanishes.
    """
    if action.spec.poles != spec.poles:
        raise SpecMismatch("action bound to a different spec")
    p = spec.field.p
    report = CompatReport(ok=True)
    for i in range(1, spec.s + 1):
        rel = spec.relations[i - 1]
        D = rel.D.promote(spec)
        for sigma in range(action.group.order):
            lhs = additive_eval(rel.P, action.cocycle(i, sigma))
            rhs = action.apply(sigma, D) - D
            if lhs != rhs:
                report.ok = False
                report.failures.append((i, sigma, lhs, rhs))
        bottom = bottom_subgroup(action, i)
        values = [action.cocycle(i, sigma) for sigma in bottom]
        constants_ok = all(v.is_constant() for v in values)
        roots_ok = constants_ok and all(
            additive_eval(rel.P, v.constant_part()).is_zero for v in values)
        span_dim = None
        if constants_ok:
            # the constants form the image of a homomorphism from the
            # subgroup fixing the lower steps; that image is the F_p-space W
            consts = {v.constant_part() for v in values}
            size = len(consts)
            span_dim = 0
            while p ** span_dim < size:
                span_dim += 1
            additively_closed = all(a + b in consts
                                    for a in consts for b in consts)
            span_ok = (p ** span_dim == size and additively_closed
                       and span_dim == spec.n[i - 1]
                       and len(bottom) % size == 0)
        else:
            span_ok = False
        entry = {"step": i, "subgroup_order": len(bottom),
                 "constants_ok": constants_ok, "span_dim": span_dim,
                 "span_ok": span_ok, "roots_ok": roots_ok}
        report.restrictions.append(entry)
        if not (constants_ok and span_ok and roots_ok):
            report.ok = False
    return report


# ---------------------------------------------------------------------------
# rescaling


def rescale_generator(spec, action, i, lam, a=None):
    """Replace f_i by lam*f_i + a (a supported on f_0..f_{i-1}, deg < pole_i).

    Returns (spec', action') with the transformed relation and cocycles:
    C'_i(sigma) = lam*C_i(sigma) + (sigma-1)a, P'_i(X) with coefficient j
    scaled by lam^{p^{n_i} - p^j}, D'_i = P'_i(lam*f_i + a); data above step
    i is rewritten through f_i = lam^{-1}(f'_i - a).
    """
    field = spec.field
    lam = field(lam)
    if lam.is_zero:
        raise ValueError("lambda must be nonzero")
    if not 1 <= i <= spec.s:
        raise ShapeError(f"no step {i}")
    prefix = spec.prefix(i - 1)
    if a is None:
        a = prefix.zero()
    else:
        a = TowerElement(prefix, a.terms)
    if a.max_gen() >= i or a.degree() >= spec.poles[i]:
        raise ShapeError("shift must be supported below step i with "
                         "degree < pole_i")
    p = field.p
    n_i = spec.n[i - 1]
    rel = spec.relations[i - 1]
    # new additive polynomial: coefficients of lam^{p^n} P(X/lam)
    new_coeffs = [rel.P.coeffs[j] * lam ** (p ** n_i - p ** j)
                  for j in range(n_i + 1)]
    new_P = AdditivePolynomial(field, new_coeffs)
    # D' = P'(lam f_i + a), reduced in the old tower; lands below step i
    old_upto_i = spec.prefix(i)
    shifted = old_upto_i.gen(i) * lam + a.promote(old_upto_i)
    new_D = additive_eval(new_P, shifted)
    if new_D.max_gen() >= i:
        raise ShapeError("rescaled relation element does not descend")
    new_D = TowerElement(prefix, new_D.terms)
    new_spec = prefix.extend(n_i, spec.poles[i], new_P, new_D)

    def subst(elem, target_spec):
        """Rewrite an element through f_i = lam^{-1}(f'_i - a)."""
        lam_inv = lam.inverse()
        repl = (target_spec.gen(i) - a.promote(target_spec)) * lam_inv
        out = target_spec.zero()
        for exps, c in elem.terms.items():
            term = target_spec.constant(c)
            for nu, e in enumerate(exps):
                if e == 0:
                    continue
                base = repl if nu == i else target_spec.gen(nu)
                term = term * base ** e
            out = out + term
        return out

    # rebuild the upper steps of the spec
    for j in range(i + 1, spec.s + 1):
        relj = spec.relations[j - 1]
        Dj = subst(relj.D.promote(new_spec), new_spec)
        Dj = TowerElement(new_spec, Dj.terms)
        new_spec = new_spec.extend(spec.n[j - 1], spec.poles[j], relj.P, Dj)

    new_cocycles = []
    for j in range(1, spec.s + 1):
        table = {}
        for sigma in range(action.group.order):
            if j == i:
                v = (action.cocycle(i, sigma) * lam
                     + action.apply(sigma, a.promote(spec))
                     - a.promote(spec))
            else:
                v = subst(action.cocycle(j, sigma).promote(new_spec),
                          new_spec)
            table[sigma] = TowerElement(new_spec.prefix(j - 1), v.terms)
        new_cocycles.append(table)
    new_action = GroupAction(new_spec, action.group, new_cocycles, action.c0)
    return new_spec, new_action


# ---------------------------------------------------------------------------
# representation filtration


@dataclass
class JumpReport:
    jumps: list          # (index c, semigroup element m_{c+1}, |ker before|, |ker after|)
    faithful_at: int | None
    shape_ok: bool

    def to_json(self):
        return {"jumps": [{"index": c, "m": m, "ker_before": kb,
                           "ker_after": ka} for c, m, kb, ka in self.jumps],
                "faithful_at": self.faithful_at, "shape_ok": self.shape_ok}


def representation_jumps(spec, action):
    """Scan the modules L(m_j P) in increasing semigroup order and record the
    indices where the kernel of the action strictly drops; checks that the
    drop positions sit exactly at the pole orders of f_1..f_s.
    """
    sg = spec.semigroup()
    bound = spec.field.p ** (spec.n[-1] if spec.n else 0) * spec.poles[-1] + 1
    elems = sg.elements_up_to(bound + 1)
    kernel = set(range(action.group.order))
    jumps = []
    faithful_at = None
    seen_monos = set()
    for j, m in enumerate(elems, start=1):
        mb = spec.basis(m + 1)
        new_monos = [e for e, _ in mb.monomials if e not in seen_monos]
        seen_monos.update(new_monos)
        moved = set()
        for sigma in list(kernel):
            if sigma == 0:
                continue
            for exps in new_monos:
                x = spec.monomial(exps)
                if action.apply(sigma, x) != x:
                    moved.add(sigma)
                    break
        if moved:
            before = len(kernel)
            kernel -= moved
            jumps.append((j - 1, m, before, len(kernel)))
        if len(kernel) == 1 and faithful_at is None:
            faithful_at = j - 1
            break
    jump_ms = sorted(m for _, m, _, _ in jumps)
    expected = sorted(spec.poles[1:1 + spec.s])
    # only steps on which the action is nontrivial produce drops
    active = sorted(
        spec.poles[i] for i in range(1, spec.s + 1)
        if any(not action.cocycle(i, s).is_zero
               for s in range(action.group.order)))
    shape_ok = jump_ms == active
    return JumpReport(jumps, faithful_at, shape_ok)


# ---------------------------------------------------------------------------
# cyclic order certification


def cyclic_order_check(action, h):
    """For a cyclic group of order p^h with distinguished generator sigma,
    verify (1 + sigma + ... + sigma^{p^nu - 1}) C_s(sigma) != 0 for all
    0 <= nu < h, cross-checked against the table value C_s(sigma^{p^nu}).
    """
    group = action.group
    p = action.spec.field.p
    if group.order != p ** h:
        raise BadOrder(f"group order {group.order} != p^{h}")
    sigma = group.generators[0]
    if group.element_order(sigma) != group.order:
        raise NotCyclic("distinguished generator does not have full order")
    s = action.spec.s
    base = action.cocycle(s, sigma)
    for nu in range(h):
        total = action.spec.zero()
        elem = 0
        for _ in range(p ** nu):
            total = total + action.apply(elem, base)
            elem = group.mul(elem, sigma)
        table_val = action.cocycle(s, group.power(sigma, p ** nu))
        if total != table_val:
            raise ShapeError("cocycle table inconsistent with the norm sum")
        if total.is_zero:
            return False
    return True


# ---------------------------------------------------------------------------
# vectorization over F_p (shared with the cohomology layer)


class ModuleVectorizer:
    """F_p-coordinates on the bounded monomial module of a tower spec.

    Index layout: basis monomial b, field coordinate a -> b*k + a.
    """

    def __init__(self, spec, bound):
        self.spec = spec
        self.bound = bound
        self.basis = spec.basis(bound)
        self.k = spec.field.k
        self.dim = self.basis.dim * self.k
        self._index = {_trim(e): i
                       for i, (e, _) in enumerate(self.basis.monomials)}

    def to_vec(self, x):
        from .errors import DegreeOverflow
        if x.spec.poles[:len(self.spec.poles)] != self.spec.poles:
            raise SpecMismatch("element over a different tower")
        vec = np.zeros(self.dim, dtype=np.int64)
        for exps, c in x.terms.items():
            idx = self._index.get(exps)
            if idx is None:
                raise DegreeOverflow(
                    f"monomial {exps} outside the bound-{self.bound} module")
            vec[idx * self.k:(idx + 1) * self.k] = c.coeffs
        return vec

    def from_vec(self, vec):
        field = self.spec.field
        terms = {}
        for idx, (exps, _) in enumerate(self.basis.monomials):
            c = field(tuple(int(v) % field.p
                            for v in vec[idx * self.k:(idx + 1) * self.k]))
            if not c.is_zero:
                terms[_trim(exps)] = c
        return TowerElement(self.spec, terms, reduce=False)

    def unit(self, idx):
        vec = np.zeros(self.dim, dtype=np.int64)
        vec[idx] = 1
        return vec

    def matrix_of(self, action, sigma):
        """Exact matrix of sigma on the module, columns = basis images."""
        cols = []
        for idx in range(self.dim):
            img = action.apply(sigma, self.from_vec(self.unit(idx)))
            cols.append(self.to_vec(img))
        return np.array(cols, dtype=np.int64).T % self.spec.field.p


# ---------------------------------------------------------------------------
# the synthesizer


@dataclass
class SolutionFamily:
    """Affine family of (C_i on generators, D_i) solving the compatibility
    system for a new tower step; empty when ``particular`` is None.
    """
    spec_prefix: TowerSpec
    action_prefix: GroupAction
    pole: int
    n_i: int
    P: AdditivePolynomial
    w_basis: list
    vmod: ModuleVectorizer
    dmod: ModuleVectorizer
    gen_maps: dict            # generator -> matrix picking C(g) from unknowns
    elem_maps: dict           # every sigma -> matrix (for building actions)
    particular: object        # vector or None
    nullspace: list

    @property
    def is_empty(self):
        return self.particular is None

    @property
    def dimension(self):
        return None if self.is_empty else len(self.nullspace)

    def _vector(self, coeffs=None):
        p = self.spec_prefix.field.p
        u = np.array(self.particular, dtype=np.int64)
        if coeffs:
            for c, v in zip(coeffs, self.nullspace):
                u = (u + int(c) % p * np.array(v, dtype=np.int64)) % p
        return u % p

    def cocycle_values(self, coeffs=None):
        """C_i(sigma) for every group element, from one family member."""
        u = self._vector(coeffs)
        return {sigma: self.vmod.from_vec(mat.dot(u) % self.spec_prefix.field.p)
                for sigma, mat in self.elem_maps.items()}

    def d_value(self, coeffs=None):
        u = self._vector(coeffs)
        return self.dmod.from_vec(u[-self.dmod.dim:])

    def contains(self, cocycle_gen_values, d_elem):
        """Is there a family member with these generator values and this D?"""
        if self.is_empty:
            return False
        p = self.spec_prefix.field.p
        target = np.zeros(self.vmod.dim * len(self.gen_maps) + self.dmod.dim,
                          dtype=np.int64)
        for slot, g in enumerate(sorted(self.gen_maps)):
            target[slot * self.vmod.dim:(slot + 1) * self.vmod.dim] = \
                self.vmod.to_vec(cocycle_gen_values[g])
        target[-self.dmod.dim:] = self.dmod.to_vec(d_elem)
        diff = (target - np.array(self.particular, dtype=np.int64)) % p
        if not self.nullspace:
            return not diff.any()
        mat = np.array(self.nullspace, dtype=np.int64)
        return (modp.rank(mat, p)
                == modp.rank(np.vstack([mat, diff]), p))

    def build(self, coeffs=None, require_full_pole=True, max_tries=200):
        """Materialize one member as (extended spec, extended action).

        When ``require_full_pole`` holds, searches family members until D
        has exact degree p^{n_i} * pole (needed for a valid next step).
        """
        if self.is_empty:
            raise ShapeError("empty solution family")
        p = self.spec_prefix.field.p
        goal = p ** self.n_i * self.pole
        trial_list = [coeffs] if coeffs is not None else [None]
        if coeffs is None and require_full_pole and self.nullspace:
            # target one nullspace direction that feeds the top-degree
            # coordinates of the D block
            k = self.dmod.k
            top = [i * k + a
                   for i, (_, d) in enumerate(self.dmod.basis.monomials)
                   if d == goal for a in range(k)]
            offset = len(self._vector()) - self.dmod.dim
            for j, w in enumerate(self.nullspace):
                if any(w[offset + t] % p for t in top):
                    unit = [0] * len(self.nullspace)
                    unit[j] = 1
                    trial_list.append(tuple(unit))
        for trial in trial_list:
            D = self.d_value(trial)
            if not require_full_pole or D.degree() == goal:
                new_spec = self.spec_prefix.extend(self.n_i, self.pole,
                                                   self.P, D)
                values = self.cocycle_values(trial)
                cocycles = [
                    {s: self.action_prefix.cocycle(j, s)
                     for s in range(self.action_prefix.group.order)}
                    for j in range(1, self.spec_prefix.s + 1)]
                cocycles.append({s: TowerElement(self.spec_prefix, v.terms)
                                 for s, v in values.items()})
                new_action = GroupAction(new_spec, self.action_prefix.group,
                                         cocycles, self.action_prefix.c0)
                return new_spec, new_action
        raise ShapeError("no family member attains the full pole order")


def solve_compatible_cocycles(spec_prefix, action_prefix, group, pole, n_i):
    """Solve for (C_i, D_i) extending the tower by one step of pole order
    ``pole`` and rank ``n_i``, given the action of ``group`` on the prefix.

    The bottom constants are normalized to the canonical F_p-basis
    1, theta, ..., theta^{n_i-1} (requires n_i <= k), which fixes the
    additive polynomial P_i; everything else is F_p-linear.
    """
    field = spec_prefix.field
    p = field.p
    if group is not action_prefix.group:
        raise ShapeError("prefix action must be an action of the same group")
    if n_i > field.k:
        raise ShapeError(
            f"rank {n_i} needs at least F_{p}^{n_i} constants; field has "
            f"degree {field.k}")
    if pole <= 0:
        raise ShapeError("pole order must be positive")
    goal_deg = p ** n_i * pole
    if not any(d == goal_deg
               for d in spec_prefix.basis(goal_deg + 1).degrees()):
        raise ShapeError(
            f"no prefix monomial of degree {goal_deg}: the relation "
            f"element cannot have the required pole")
    # bottom subgroup and its generators
    bottom = bottom_subgroup(action_prefix, spec_prefix.s + 1)
    if len(bottom) != p ** n_i:
        raise ShapeError(
            f"subgroup acting trivially on the prefix has order "
            f"{len(bottom)}, need p^{n_i}")
    h_gens = []
    span = {0}
    for h in bottom:
        if h in span:
            continue
        h_gens.append(h)
        span = set(group.closure(h_gens))
    if len(h_gens) != n_i or span != set(bottom):
        raise ShapeError("bottom subgroup is not elementary abelian of "
                         f"rank {n_i}")
    for h in bottom:
        if h != 0 and group.element_order(h) != p:
            raise ShapeError("bottom subgroup is not elementary abelian")
    theta = field.gen()
    w_basis = [theta ** j for j in range(n_i)]
    P = additive_from_span(w_basis)

    vmod = ModuleVectorizer(spec_prefix, pole)
    dmod = ModuleVectorizer(spec_prefix, goal_deg + 1)
    dv, dd = vmod.dim, dmod.dim
    gens = sorted(set(group.generators))
    nunk = dv * len(gens) + dd

    # module matrices for every sigma (built along the Cayley graph)
    vmats = {0: np.eye(dv, dtype=np.int64)}
    dmats = {0: np.eye(dd, dtype=np.int64)}
    gen_vmat = {g: vmod.matrix_of(action_prefix, g) for g in gens}
    gen_dmat = {g: dmod.matrix_of(action_prefix, g) for g in gens}

    # symbolic cocycle maps L_sigma with C(sigma) = L_sigma . u
    selectors = {}
    for slot, g in enumerate(gens):
        sel = np.zeros((dv, nunk), dtype=np.int64)
        sel[:, slot * dv:(slot + 1) * dv] = np.eye(dv, dtype=np.int64)
        selectors[g] = sel
    elem_maps = {0: np.zeros((dv, nunk), dtype=np.int64)}
    rows = []
    rhs = []
    frontier = [0]
    while frontier:
        nxt = []
        for sigma in frontier:
            for g in gens:
                tau = group.mul(sigma, g)
                cand = (elem_maps[sigma]
                        + vmats[sigma].dot(selectors[g])) % p
                if tau in elem_maps:
                    diff = (elem_maps[tau] - cand) % p
                    for r in diff:
                        if r.any():
                            rows.append(r)
                            rhs.append(0)
                else:
                    elem_maps[tau] = cand
                    vmats[tau] = vmats[sigma].dot(gen_vmat[g]) % p
                    dmats[tau] = dmats[sigma].dot(gen_dmat[g]) % p
                    nxt.append(tau)
        frontier = nxt
    # normalization: C(h_j) = theta^{j-1}
    for j, h in enumerate(h_gens):
        w_vec = vmod.to_vec(spec_prefix.constant(w_basis[j]))
        for r, b in zip(elem_maps[h], w_vec):
            rows.append(r)
            rhs.append(int(b))
    # compatibility on generators: F_P . C(g) = (M_g - I) d
    fp_mat = np.zeros((dd, dv), dtype=np.int64)
    for idx in range(dv):
        img = additive_eval(P, vmod.from_vec(vmod.unit(idx)))
        fp_mat[:, idx] = dmod.to_vec(img)
    eye_d = np.eye(dd, dtype=np.int64)
    for g in gens:
        lhs_map = fp_mat.dot(elem_maps[g]) % p
        lhs_map[:, -dd:] = (lhs_map[:, -dd:] - (gen_dmat[g] - eye_d)) % p
        for r in lhs_map:
            if r.any():
                rows.append(r)
                rhs.append(0)
    if rows:
        amat = np.array(rows, dtype=np.int64) % p
        bvec = np.array(rhs, dtype=np.int64) % p
        sol = modp.solve_affine(amat, bvec, p)
    else:
        sol = (np.zeros(nunk, dtype=np.int64),
               [np.eye(nunk, dtype=np.int64)[i] for i in range(nunk)])
    if sol is None:
        particular, nullspace = None, []
    else:
        particular, nullspace = sol
    gen_maps = {g: elem_maps[g] for g in gens}
    return SolutionFamily(spec_prefix, action_prefix, pole, n_i, P, w_basis,
                          vmod, dmod, gen_maps, elem_maps, particular,
                          list(nullspace))

"""Cocycles and coboundaries on bounded tower modules, and H^1 of cyclic
p-groups via the norm map: H^1(Z/p^i, A) = ker N / (sigma - 1)A with
N = 1 + sigma + ... + sigma^{p^i - 1}.
"""

from dataclasses import dataclass

import numpy as np

from . import modp
from .additive import additive_apply_cocycle
from .errors import BadOrder, NotCoboundary, SpecMismatch
from .tower import ModuleVectorizer


class LinearizedModule:
    """A bounded monomial module of a tower together with the exact F_p
    matrices of a group action on it."""

    def __init__(self, spec, action, bound):
        if action.spec.poles[:len(spec.poles)] != spec.poles:
            raise SpecMismatch("action does not restrict to this spec")
        self.spec = spec
        self.action = action
        self.group = action.group
        self.vec = ModuleVectorizer(spec, bound)
        self._mats = {}

    @property
    def bound(self):
        return self.vec.bound

    @property
    def dim(self):
        return self.vec.dim

    @property
    def p(self):
        return self.spec.field.p

    def matrix(self, sigma):
        m = self._mats.get(sigma)
        if m is None:
            m = self.vec.matrix_of(self.action, sigma)
            self._mats[sigma] = m
        return m

    def is_unipotent(self, sigma):
        mat = self.matrix(sigma)
        order = [d for _, d in self.vec.basis.monomials for _ in
                 range(self.vec.k)]
        for i in range(self.dim):
            for j in range(self.dim):
                if mat[i, j]:
                    if order[i] > order[j]:
                        return False
                    if i == j and mat[i, j] != 1:
                        return False
        return True


class MatrixModule:
    """A bare F_p-module with a cyclic action given by one generator matrix;
    element index j acts as the j-th power.  Useful for comparing h1_cyclic
    against matrix-level oracles."""

    def __init__(self, p, gen_matrix):
        self.p = p
        self._gen = np.array(gen_matrix, dtype=np.int64) % p
        self.dim = self._gen.shape[0]
        self._mats = {0: np.eye(self.dim, dtype=np.int64)}

    def matrix(self, j):
        m = self._mats.get(j)
        if m is None:
            m = self.matrix(j - 1).dot(self._gen) % self.p
            self._mats[j] = m
        return m


@dataclass(frozen=True)
class Cocycle:
    """Map sigma -> module element with C(1) = 0 and the twisted additivity
    C(sigma tau) = C(sigma) + sigma C(tau)."""

    module: LinearizedModule
    values: dict  # sigma -> TowerElement

    @property
    def degree_bound(self):
        return self.module.bound

    def with_values(self, values):
        return Cocycle(self.module, dict(values))

    def value_vec(self, sigma):
        return self.module.vec.to_vec(self.values[sigma])

    def __eq__(self, other):
        if not isinstance(other, Cocycle):
            return NotImplemented
        return all(self.values[s] == other.values[s]
                   for s in range(self.module.group.order))

    def to_json(self):
        return {str(s): v.to_json() for s, v in sorted(self.values.items())}


def cocycle_from_action(module, step):
    """The step-i cocycle table of the module's action, as a Cocycle."""
    values = {s: module.action.cocycle(step, s)
              for s in range(module.group.order)}
    return Cocycle(module, values)


def coboundary(module, b):
    """The coboundary sigma -> (sigma - 1) b."""
    values = {s: module.action.apply(s, b) - b
              for s in range(module.group.order)}
    return Cocycle(module, values)


def cocycle_check(module, cocycle):
    """(True, None) or (False, witness) with the first failing pair."""
    group = module.group
    if not cocycle.values[0].is_zero:
        return False, {"pair": (0, 0), "reason": "C(1) != 0"}
    for a in range(group.order):
        for b in range(group.order):
            lhs = cocycle.values[group.mul(a, b)]
            rhs = cocycle.values[a] + module.action.apply(a,
                                                         cocycle.values[b])
            if lhs != rhs:
                return False, {"pair": (a, b), "lhs": lhs, "rhs": rhs}
    return True, None


def coboundary_test(module, cocycle):
    """A module element b with (sigma - 1) b = C(sigma) for all sigma, or
    raise NotCoboundary.  The witness is the canonical echelon solution of
    the stacked generator system."""
    p = module.p
    eye = np.eye(module.dim, dtype=np.int64)
    rows = []
    rhs = []
    for g in module.group.generators:
        rows.append((module.matrix(g) - eye) % p)
        rhs.append(cocycle.value_vec(g) % p)
    a = np.vstack(rows)
    b = np.concatenate(rhs)
    sol = modp.solve_affine(a, b, p)
    if sol is None:
        raise NotCoboundary("no module element has this coboundary")
    return module.vec.from_vec(sol[0])


def h1_cyclic(module, sigma, order):
    """Dimensions {dim_ker_norm, dim_image, dim_h1, dim_module} for the
    cyclic group generated by sigma acting with the given p-power order.

    When sigma^{order/p} acts trivially the norm vanishes identically and
    dim H^1 = dim A - rank(sigma - 1) (the coinvariants); this consequence
    is verified, not assumed.
    """
    p = module.p
    n = order
    m = n
    while m > 1 and m % p == 0:
        m //= p
    if m != 1:
        raise BadOrder(f"order {order} is not a power of p")
    mat = module.matrix(sigma)
    acc = np.eye(module.dim, dtype=np.int64)
    norm = np.zeros((module.dim, module.dim), dtype=np.int64)
    for _ in range(n):
        norm = (norm + acc) % p
        acc = acc.dot(mat) % p
    if not np.array_equal(acc, np.eye(module.dim, dtype=np.int64)):
        raise BadOrder(f"sigma does not have order dividing {order}")
    eye = np.eye(module.dim, dtype=np.int64)
    rank_norm = modp.rank(norm, p)
    rank_im = modp.rank((mat - eye) % p, p)
    dim_ker = module.dim - rank_norm
    result = {
        "dim_module": module.dim,
        "dim_ker_norm": dim_ker,
        "dim_image": rank_im,
        "dim_h1": dim_ker - rank_im,
    }
    # the vanishing-norm consequence under the trivial-bottom hypothesis
    sub = eye
    for _ in range(n // p):
        sub = sub.dot(mat) % p
    if n == 1 or np.array_equal(sub, eye):
        result["norm_vanishes"] = not norm.any()
        result["coinvariants_formula_ok"] = (
            result["norm_vanishes"]
            and result["dim_h1"] == module.dim - rank_im)
    return result


def kernel_of_additive_map(target_module, poly, candidates):
    """Annotate each candidate cocycle with whether P maps it to a
    coboundary in the target module, and the witness b (= D) if so."""
    out = []
    for cand in candidates:
        images = additive_apply_cocycle(
            poly, dict(cand.values), degree_bound=target_module.bound)
        image = Cocycle(target_module, images)
        try:
            witness = coboundary_test(target_module, image)
            out.append((cand, True, witness))
        except NotCoboundary:
            out.append((cand, False, None))
    return out

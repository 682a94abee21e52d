"""PGL(2,q) acting on the projective line, plus generic permutation groups.

Points of the projective line are indexed ``0..q``: index ``x < q`` is the
field element ``x`` (homogeneous coordinates ``[1 : x]``) and index ``q``
is infinity ``[0 : 1]``.

The action is a *right* action on row vectors::

    [x : y] ^ g = [x : y] @ [[a, b], [c, d]] = [x a + y c : x b + y d]

so ``p ^ (g h) == (p ^ g) ^ h`` and products compose left to right.  With
this convention ``u = [[1, 1], [0, 1]]`` is the translation ``x -> x + 1``
and ``d_x = [[x, 0], [0, 1]]`` fixes exactly ``0`` and ``infinity``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import IndeterminateCrossRatio, InternalInconsistency, SizeLimitExceeded
from .finite_field import GF

MAX_GROUP_ORDER = 20000

IDENTITY, UNIPOTENT, SPLIT, NONSPLIT = "identity", "unipotent", "split", "nonsplit"
_KIND_RANK = {IDENTITY: 0, UNIPOTENT: 1, SPLIT: 2, NONSPLIT: 3}


@dataclass(frozen=True)
class ClassLabel:
    """Conjugacy class of PGL(2,q).

    ``exp`` is 0 for identity/unipotent.  For split classes it is the
    exponent (w.r.t. the field generator) of the eigenvalue ratio, for
    non-split classes the coset exponent of an eigenvalue in
    GF(q^2)*/GF(q)*; both reduced "up to inversion" to ``min(e, order - e)``.
    """

    kind: str
    exp: int = 0

    def sort_key(self):
        return (_KIND_RANK[self.kind], self.exp)

    def __str__(self):
        if self.kind == IDENTITY:
            return "1"
        if self.kind == UNIPOTENT:
            return "u"
        return f"{'d' if self.kind == SPLIT else 'v'}[{self.exp}]"


def canonical_exponent(e: int, order: int) -> int:
    e %= order
    return min(e, order - e)


# -- single elements -----------------------------------------------------------

def point_coords(q: int, pt: int) -> tuple[int, int]:
    return (0, 1) if pt == q else (1, pt)


def coords_to_point(F: GF, x: int, y: int) -> int:
    if x == 0:
        if y == 0:
            raise InternalInconsistency("zero vector is not a projective point")
        return F.q
    return F.div(y, x)


@dataclass(frozen=True)
class GroupElement:
    """A canonical 2x2 matrix: first nonzero entry of (a, b, c, d) is 1."""

    F: GF = field(repr=False, compare=False, hash=False)
    a: int
    b: int
    c: int
    d: int

    @classmethod
    def from_matrix(cls, F: GF, a, b, c, d) -> GroupElement:
        a, b, c, d = (int(v) for v in (a, b, c, d))
        if F.sub(F.mul(a, d), F.mul(b, c)) == 0:
            raise ValueError("singular matrix")
        lead = next(v for v in (a, b, c, d) if v)
        s = F.inv(lead)
        return cls(F, F.mul(a, s), F.mul(b, s), F.mul(c, s), F.mul(d, s))

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    @property
    def det(self) -> int:
        F = self.F
        return F.sub(F.mul(self.a, self.d), F.mul(self.b, self.c))

    @property
    def trace(self) -> int:
        return self.F.add(self.a, self.d)

    def __matmul__(self, other: GroupElement) -> GroupElement:
        F = self.F
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return GroupElement.from_matrix(
            F,
            F.add(F.mul(a, e), F.mul(b, g)), F.add(F.mul(a, f), F.mul(b, h)),
            F.add(F.mul(c, e), F.mul(d, g)), F.add(F.mul(c, f), F.mul(d, h)),
        )

    def inverse(self) -> GroupElement:
        F = self.F
        return GroupElement.from_matrix(F, self.d, F.neg(self.b), F.neg(self.c), self.a)

    def image_coords(self, x: int, y: int) -> tuple[int, int]:
        F = self.F
        return (F.add(F.mul(x, self.a), F.mul(y, self.c)), F.add(F.mul(x, self.b), F.mul(y, self.d)))


def apply(g: GroupElement, pt: int) -> int:
    """Image ``pt ^ g`` of a point index under the right action."""
    return coords_to_point(g.F, *g.image_coords(*point_coords(g.F.q, pt)))


def permutation(g: GroupElement) -> np.ndarray:
    return np.array([apply(g, p) for p in range(g.F.q + 1)], dtype=np.int64)


def fix_count(g: GroupElement) -> int:
    q = g.F.q
    n = sum(1 for p in range(q + 1) if apply(g, p) == p)
    if n not in (0, 1, 2, q + 1):
        raise InternalInconsistency(f"{g} fixes {n} points")
    return n


def _eigenvalue_at(g: GroupElement, pt: int) -> int:
    F = g.F
    x, y = point_coords(F.q, pt)
    X, Y = g.image_coords(x, y)
    return F.div(X, x) if x else F.div(Y, y)


def classify(g: GroupElement) -> ClassLabel:
    F = g.F
    q = F.q
    fixed = [p for p in range(q + 1) if apply(g, p) == p]
    n = len(fixed)
    if n == q + 1:
        return ClassLabel(IDENTITY)
    if n == 1:
        return ClassLabel(UNIPOTENT)
    if n == 2:
        l1, l2 = (_eigenvalue_at(g, p) for p in fixed)
        return ClassLabel(SPLIT, canonical_exponent(int(F.log[l1] - F.log[l2]), q - 1))
    if n == 0:
        r = F.ext.root_by_trace_norm[(g.trace, g.det)]
        return ClassLabel(NONSPLIT, canonical_exponent(F.ext.coset_log(r), q + 1))
    raise InternalInconsistency(f"{g} fixes {n} points")


def psl_member(g: GroupElement) -> bool:
    """True iff the determinant is a square; scaling changes det by a square."""
    return g.F.is_square(g.det)


def cross_ratio(F: GF, alpha: int, delta: int, gamma: int, beta: int) -> int:
    """``crr(alpha, delta, gamma, beta) = (a - g)(d - b) / ((a - b)(d - g))``.

    Arguments and result are point indices; the result is ``q`` (infinity)
    when only the denominator vanishes.  Each difference ``u - v`` is the
    determinant of homogeneous representatives, so infinity needs no
    special case: every point occurs once above and once below the bar
    and representative scalings cancel.
    """
    q = F.q

    def diff(u, v):
        xu, yu = point_coords(q, u)
        xv, yv = point_coords(q, v)
        return F.sub(F.mul(xv, yu), F.mul(xu, yv))

    num = F.mul(diff(alpha, gamma), diff(delta, beta))
    den = F.mul(diff(alpha, beta), diff(delta, gamma))
    if den == 0:
        if num == 0:
            raise IndeterminateCrossRatio(f"crr({alpha}, {delta}, {gamma}, {beta}) is 0/0")
        return q
    return F.div(num, den)


# -- permutation groups ----------------------------------------------------------

class PermutationGroup:
    """A finite permutation group stored as the full list of its elements.

    ``perms[i]`` is the image array of element ``i`` on ``range(degree)``.
    Products follow the right-action convention: ``compose(i, j)`` applies
    ``i`` first, then ``j``.
    """

    def __init__(self, perms: np.ndarray, name: str = "", parent_ids=None, psl_equals_pgl: bool = False):
        self.perms = np.ascontiguousarray(perms, dtype=np.int64)
        self.order, self.degree = self.perms.shape
        self.name = name
        self.parent_ids = None if parent_ids is None else np.asarray(parent_ids, dtype=np.int64)
        self.psl_equals_pgl = psl_equals_pgl
        ident = np.arange(self.degree)
        hits = np.flatnonzero((self.perms == ident).all(axis=1))
        if len(hits) != 1:
            raise InternalInconsistency(f"{name}: expected one identity, found {len(hits)}")
        self.identity = int(hits[0])

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"PermutationGroup({self.name!r}, order={self.order}, degree={self.degree})"

    @cached_property
    def _index(self) -> dict[bytes, int]:
        idx = {row.tobytes(): i for i, row in enumerate(self.perms)}
        if len(idx) != self.order:
            raise InternalInconsistency(f"{self.name}: duplicate permutations")
        return idx

    def index_of(self, perm) -> int:
        return self._index[np.asarray(perm, dtype=np.int64).tobytes()]

    def ids_of(self, perms: np.ndarray) -> np.ndarray:
        idx = self._index
        return np.array([idx[row.tobytes()] for row in np.ascontiguousarray(perms, dtype=np.int64)], dtype=np.int64)

    def compose(self, i: int, j: int) -> int:
        return self.index_of(self.perms[j][self.perms[i]])

    @cached_property
    def inverse_ids(self) -> np.ndarray:
        inv = np.empty_like(self.perms)
        rows = np.arange(self.order)[:, None]
        inv[rows, self.perms] = np.arange(self.degree)
        return self.ids_of(inv)

    def inverse(self, i: int) -> int:
        return int(self.inverse_ids[i])

    def left_translate(self, a: int, ids) -> np.ndarray:
        """Ids of ``a * s`` for ``s`` in ``ids`` (``a`` applied first)."""
        ids = np.asarray(ids, dtype=np.int64)
        return self.ids_of(self.perms[ids][:, self.perms[a]])

    @cached_property
    def fix_counts(self) -> np.ndarray:
        return (self.perms == np.arange(self.degree)).sum(axis=1)

    def is_closed(self, samples: int | None = None, seed: int = 0) -> bool:
        """Closure under products and inverses; exhaustive when ``samples`` is None."""
        idx = self._index
        if samples is None:
            pairs = ((i, j) for i in range(self.order) for j in range(self.order))
        else:
            rng = np.random.default_rng(seed)
            pairs = rng.integers(0, self.order, size=(samples, 2))
        for i, j in pairs:
            if self.perms[j][self.perms[i]].tobytes() not in idx:
                return False
        try:
            self.inverse_ids
        except KeyError:
            return False
        return True


class GroupTable(PermutationGroup):
    """All ``q(q^2 - 1)`` canonical matrices of PGL(2,q) with their permutations.

    Elements are ordered lexicographically by ``(a, b, c, d)`` in the field's
    enumeration order.
    """

    def __init__(self, F: GF, mats: np.ndarray | None = None, perms: np.ndarray | None = None,
                 max_order: int = MAX_GROUP_ORDER):
        q = F.q
        order = q * (q * q - 1)
        if order > max_order:
            raise SizeLimitExceeded(f"|PGL(2,{q})| = {order} > limit {max_order}")
        self.F, self.q = F, q
        self.mats = _enumerate_canonical(F) if mats is None else np.asarray(mats, dtype=np.int64)
        if len(self.mats) != order:
            raise InternalInconsistency(f"enumerated {len(self.mats)} elements, expected {order}")
        if perms is None:
            perms = _action(F, self.mats)
        super().__init__(perms, name=f"PGL(2,{q})")
        self._lookup = np.full(q**4, -1, dtype=np.int64)
        self._lookup[self._keys(self.mats)] = np.arange(order)
        self._by_triple = np.full((q + 1) ** 3, -1, dtype=np.int64)
        trip = self._triple_keys(self.perms)
        if len(np.unique(trip)) != order:
            raise InternalInconsistency("action is not sharply 3-transitive")
        self._by_triple[trip] = np.arange(order)

    def _keys(self, mats):
        q = self.q
        return ((mats[:, 0] * q + mats[:, 1]) * q + mats[:, 2]) * q + mats[:, 3]

    def _triple_keys(self, perms):
        n = self.q + 1
        return (perms[:, 0] * n + perms[:, 1]) * n + perms[:, self.q]

    def ids_of(self, perms):
        # an element is determined by the images of 0, 1 and infinity
        perms = np.asarray(perms, dtype=np.int64)
        ids = self._by_triple[self._triple_keys(perms)]
        if (ids < 0).any():
            raise KeyError("not an element of the group")
        return ids

    def index_of(self, perm) -> int:
        return int(self.ids_of(np.asarray(perm)[None, :])[0])

    def element(self, i: int) -> GroupElement:
        a, b, c, d = (int(v) for v in self.mats[i])
        return GroupElement(self.F, a, b, c, d)

    def id_of(self, g: GroupElement) -> int:
        g = GroupElement.from_matrix(self.F, *g.entries)
        return int(self._lookup[self._keys(np.array([g.entries]))[0]])

    def mul(self, i: int, j: int) -> int:
        return self.compose(i, j)

    @cached_property
    def labels(self) -> list[ClassLabel]:
        return [classify(self.element(i)) for i in range(self.order)]

    @cached_property
    def dets(self) -> np.ndarray:
        F, m = self.F, self.mats
        return F.sub_table[F.mul_table[m[:, 0], m[:, 3]], F.mul_table[m[:, 1], m[:, 2]]]

    @cached_property
    def psl_mask(self) -> np.ndarray:
        return self.F.square_mask[self.dets]

    @cached_property
    def derangement_ids(self) -> np.ndarray:
        return np.flatnonzero(self.fix_counts == 0)


def _enumerate_canonical(F: GF) -> np.ndarray:
    q = F.q
    grid = np.stack(np.meshgrid(*[np.arange(q)] * 4, indexing="ij"), axis=-1).reshape(-1, 4)
    a, b, c, d = grid.T
    det = F.sub_table[F.mul_table[a, d], F.mul_table[b, c]]
    nz = grid != 0
    first = np.argmax(nz, axis=1)
    lead = grid[np.arange(len(grid)), first]
    keep = (det != 0) & (lead == 1)
    return grid[keep]


def _action(F: GF, mats: np.ndarray) -> np.ndarray:
    q = F.q
    a, b, c, d = (mats[:, i][:, None] for i in range(4))
    x = np.zeros(q + 1, dtype=np.int64)
    y = np.zeros(q + 1, dtype=np.int64)
    x[:q], y[:q] = 1, np.arange(q)
    y[q] = 1
    X = F.add_table[F.mul_table[x[None, :], a], F.mul_table[y[None, :], c]]
    Y = F.add_table[F.mul_table[x[None, :], b], F.mul_table[y[None, :], d]]
    inv = F.inv_table
    return np.where(X == 0, q, F.mul_table[Y, inv[X]])


def enumerate_pgl(F: GF, max_order: int = MAX_GROUP_ORDER) -> GroupTable:
    return GroupTable(F, max_order=max_order)


def enumerate_psl(table: GroupTable) -> PermutationGroup:
    """The subgroup of square-determinant elements; all of PGL when q is even."""
    ids = np.flatnonzero(table.psl_mask)
    even = table.F.p == 2
    return PermutationGroup(table.perms[ids], name=f"PSL(2,{table.q})", parent_ids=ids, psl_equals_pgl=even)


def enumerate_agl1(F: GF) -> PermutationGroup:
    """Maps ``xi -> a xi + b`` (a != 0) on the q field elements, ordered by (a, b)."""
    q = F.q
    a = np.repeat(np.arange(1, q), q)
    b = np.tile(np.arange(q), q - 1)
    xi = np.arange(q)
    perms = F.add_table[F.mul_table[a[:, None], xi[None, :]], b[:, None]]
    return PermutationGroup(perms, name=f"AGL(1,{q})")

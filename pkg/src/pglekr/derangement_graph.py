"""Derangement graphs, exhaustive maximum independent sets, EKR certification."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import SizeLimitExceeded, StructureMismatch, TargetExceeded
from .finite_field import field_of_order
from .projective_group import MAX_GROUP_ORDER, GroupTable, PermutationGroup, enumerate_agl1, enumerate_pgl, enumerate_psl

DEFAULT_RECOLOR_EVERY = 1


@dataclass
class DerangementGraph:
    group: PermutationGroup
    adjacency: np.ndarray  # bool (n, n)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def valency(self) -> int:
        return int(self.adjacency[self.group.identity].sum())

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def edges(self):
        u, v = np.nonzero(np.triu(self.adjacency, 1))
        return list(zip(u.tolist(), v.tolist()))

    def edge_list_text(self) -> str:
        return "".join(f"{u} {v}\n" for u, v in self.edges())

    def is_independent(self, ids) -> bool:
        ids = np.asarray(list(ids), dtype=np.int64)
        return not self.adjacency[np.ix_(ids, ids)].any()


def build(group: PermutationGroup, max_order: int = MAX_GROUP_ORDER) -> DerangementGraph:
    """``g ~ h`` iff ``g^-1 h`` has no fixed point."""
    if group.order > max_order:
        raise SizeLimitExceeded(f"|G| = {group.order} > limit {max_order}")
    return DerangementGraph(group, _kernels.disagree_adjacency(group.perms))


@dataclass
class IndependentSetFamily:
    target: int
    sets: list[tuple[int, ...]]
    complete: bool
    rooted: list[tuple[int, ...]] = field(default_factory=list)


def enumerate_max_independent_sets(graph: DerangementGraph, target: int,
                                   recolor_every: int = DEFAULT_RECOLOR_EVERY) -> IndependentSetFamily:
    """Every independent set of size ``target``, and proof that none is larger.

    Only sets through the identity are searched: left translation is a
    graph automorphism, so ``s^-1 S`` contains the identity for any ``s``
    in ``S``.  The rooted family is then closed under all left translates.
    Raises TargetExceeded if an independent set of size ``target + 1``
    exists.
    """
    G = graph.group
    rooted, witness = _kernels.enumerate_rooted(graph.adjacency, G.identity, target, recolor_every)
    if witness is not None:
        raise TargetExceeded(witness)
    seen = set()
    for S in rooted:
        S = np.asarray(S, dtype=np.int64)
        for a in range(G.order):
            seen.add(tuple(sorted(G.left_translate(a, S).tolist())))
    return IndependentSetFamily(target, sorted(seen), True, rooted)


def naive_rooted_sets(graph: DerangementGraph, target: int) -> tuple[list[tuple[int, ...]], bool]:
    """Plain exhaustive enumeration of identity-rooted independent sets.

    Independent oracle for the branch and bound (no bounding, no
    colouring).  Returns ``(sets of size target, larger_exists)``.
    """
    adj = graph.adjacency
    root = graph.group.identity
    cand = [v for v in range(graph.n) if v != root and not adj[root, v]]
    found, larger = [], False

    def rec(chosen, rest):
        nonlocal larger
        if len(chosen) == target:
            found.append(tuple(sorted(chosen)))
            if rest:
                larger = True
            return
        for i, v in enumerate(rest):
            rec(chosen + [v], [w for w in rest[i + 1:] if not adj[v, w]])

    rec([root], cand)
    return sorted(found), larger


def is_stabilizer_coset(ids, group: PermutationGroup):
    """``(p, p')`` if the set equals ``{g : p^g = p'}``, else None."""
    ids = sorted(set(int(i) for i in ids))
    if not ids or len(ids) * group.degree != group.order:
        return None
    images = group.perms[ids]
    for p in range(group.degree):
        col = images[:, p]
        if (col == col[0]).all():
            return (p, int(col[0]))
    return None


def hoffman_certificate(ids, graph: DerangementGraph, tau) -> bool:
    """Exact check that ``v_S - (|S|/|G|) 1`` is a ``tau``-eigenvector.

    Scaled by ``|G|`` (and by 2 for half-integral ``tau``) so the test runs
    in integers.
    """
    tau = Fraction(tau)
    n = graph.n
    ids = np.asarray(sorted(ids), dtype=np.int64)
    # |entries| stay below 2 n^2 |tau|, far inside int64
    x = np.full(n, -len(ids), dtype=np.int64)
    x[ids] += n
    lhs = graph.adjacency.astype(np.int64) @ x * tau.denominator
    rhs = x * tau.numerator
    return bool((lhs == rhs).all())


def lambda_balance(ids, psl_mask: np.ndarray) -> bool:
    ids = list(ids)
    inside = int(psl_mask[ids].sum())
    return 2 * inside == len(ids)


@dataclass
class EkrReport:
    group: str
    q: int
    bound: Fraction
    independence_number: int | None  # None: no set of the target size exists
    num_maximum_sets: int
    expected_sets: int
    num_cosets: int
    witnesses: list[tuple[int, ...]]
    rooted_sets: int
    seconds: float
    extra: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return not self.witnesses and self.num_maximum_sets == self.expected_sets

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "q": self.q,
            "bound": str(self.bound),
            "independence_number": self.independence_number,
            "num_maximum_sets": self.num_maximum_sets,
            "expected_sets": self.expected_sets,
            "num_cosets": self.num_cosets,
            "witnesses": [list(w) for w in self.witnesses],
            "rooted_sets": self.rooted_sets,
            **self.extra,
        }


def _run_ekr(group: PermutationGroup, q: int, target: int, recolor_every: int):
    t0 = time.perf_counter()
    graph = build(group)
    family = enumerate_max_independent_sets(graph, target, recolor_every)
    cosets = [is_stabilizer_coset(S, group) for S in family.sets]
    witnesses = [S for S, c in zip(family.sets, cosets) if c is None]
    return graph, family, cosets, witnesses, time.perf_counter() - t0


def verify_ekr_pgl(q: int, table: GroupTable | None = None, max_q: int = 7,
                   recolor_every: int = DEFAULT_RECOLOR_EVERY, via_matrix: bool = True) -> EkrReport:
    """Exhaustively check that maximum intersecting sets of PGL(2,q) are cosets.

    Besides the coset test, every maximum set is checked against the
    Hoffman equality clause, the PSL balance (q odd) and, if
    ``via_matrix``, certified by the column-space argument on ``A-bar``.
    """
    if q > max_q:
        raise SizeLimitExceeded(f"exhaustive search capped at q <= {max_q}")
    table = table or enumerate_pgl(field_of_order(q))
    target = q * (q - 1)
    graph, family, cosets, witnesses, secs = _run_ekr(table, q, target, recolor_every)
    tau = Fraction(-q * (q - 1), 2)
    bound = hoffman_bound_for(graph, tau)
    extra = {
        "valency": graph.valency,
        "hoffman_certified": sum(hoffman_certificate(S, graph, tau) for S in family.sets),
    }
    if q % 2:
        extra["psl_balanced"] = sum(lambda_balance(S, table.psl_mask) for S in family.sets)
    if via_matrix:
        from .matrix_analysis import CosetCertifier

        cert = CosetCertifier(table)
        agree = 0
        for S, c in zip(family.sets, cosets):
            got = cert.certify(S)
            agree += got is not None and c is not None and got == c
        extra["matrix_certified"] = agree
    return EkrReport(table.name, q, bound, target if family.sets else None, len(family.sets), (q + 1) ** 2,
                     sum(c is not None for c in cosets), witnesses, len(family.rooted), secs, extra)


def hoffman_bound_for(graph: DerangementGraph, tau) -> Fraction:
    from .character_theory import hoffman_bound

    return hoffman_bound(graph.valency, tau, graph.n)


def verify_psl(q: int, table: GroupTable | None = None, max_q: int = 7,
               recolor_every: int = DEFAULT_RECOLOR_EVERY) -> EkrReport:
    """Evidence for the PSL(2,q) analogue: maximum size q(q-1)/2, all cosets.

    For even q, PSL(2,q) = PGL(2,q) and the PGL check is run instead.
    """
    table = table or enumerate_pgl(field_of_order(q))
    if q % 2 == 0:
        rep = verify_ekr_pgl(q, table, max_q, recolor_every)
        rep.extra["psl_equals_pgl"] = True
        return rep
    if q > max_q:
        raise SizeLimitExceeded(f"exhaustive search capped at q <= {max_q}")
    group = enumerate_psl(table)
    target = q * (q - 1) // 2
    graph, family, cosets, witnesses, secs = _run_ekr(group, q, target, recolor_every)
    rep = EkrReport(group.name, q, Fraction(target), target if family.sets else None, len(family.sets), (q + 1) ** 2,
                    sum(c is not None for c in cosets), witnesses, len(family.rooted), secs,
                    {"valency": graph.valency, "psl_equals_pgl": False, "status": "conjecture evidence"})
    return rep


@dataclass
class FrobeniusReport:
    q: int
    components: int
    component_sizes: list[int]
    all_cliques: bool
    max_set_size: int
    count_formula: int
    count_enumerated: int | None

    @property
    def holds(self) -> bool:
        ok = (self.components == self.q - 1 and self.all_cliques
              and self.component_sizes == [self.q] * (self.q - 1))
        return ok and (self.count_enumerated is None or self.count_enumerated == self.count_formula)

    def to_dict(self):
        return dict(self.__dict__, holds=self.holds)


def connected_components(adj: np.ndarray) -> list[list[int]]:
    n = adj.shape[0]
    seen = np.zeros(n, dtype=bool)
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in np.flatnonzero(adj[v] & ~seen):
                seen[w] = True
                stack.append(int(w))
        comps.append(sorted(comp))
    return comps


def verify_frobenius(q: int, enumerate_up_to: int = 4) -> FrobeniusReport:
    """AGL(1,q): derangement graph is q-1 disjoint copies of K_q.

    The derangements are the nontrivial translations, so each component
    is a coset of the translation subgroup.  Maximum independent sets take
    one vertex per clique, ``q^(q-1)`` of them; counted by exhaustive
    enumeration when ``q <= enumerate_up_to``.
    """
    group = enumerate_agl1(field_of_order(q))
    graph = build(group)
    comps = connected_components(graph.adjacency)
    cliques = all(
        graph.adjacency[np.ix_(c, c)].sum() == len(c) * (len(c) - 1) for c in comps
    )
    counted = None
    if q <= enumerate_up_to:
        counted = len(enumerate_max_independent_sets(graph, len(comps)).sets)
    rep = FrobeniusReport(q, len(comps), sorted(len(c) for c in comps), bool(cliques), len(comps),
                          q ** (q - 1), counted)
    if not rep.holds:
        raise StructureMismatch(str(rep.to_dict()))
    return rep

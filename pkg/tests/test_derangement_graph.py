from fractions import Fraction

import numpy as np
import pytest

from pglekr import derangement_graph as dg
from pglekr.errors import SizeLimitExceeded, TargetExceeded
from pglekr.finite_field import field_of_order
from pglekr.projective_group import PermutationGroup, enumerate_agl1, enumerate_psl


def graph_by_definition(G):
    """g ~ h iff g^-1 h has no fixed point, via explicit inverse and product."""
    n = G.order
    adj = np.zeros((n, n), dtype=bool)
    inv = G.inverse_ids
    for g in range(n):
        for h in range(n):
            adj[g, h] = G.fix_counts[G.compose(int(inv[g]), h)] == 0
    return adj


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_adjacency_by_definition(pgl, q):
    G = pgl(q)
    graph = dg.build(G)
    assert np.array_equal(graph.adjacency, graph_by_definition(G))


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8])
def test_graph_basics(pgl, q):
    G = pgl(q)
    graph = dg.build(G)
    A = graph.adjacency
    assert np.array_equal(A, A.T) and not A.diagonal().any()
    degree = int((G.fix_counts == 0).sum())
    assert set(graph.degrees.tolist()) == {degree}
    assert graph.valency == q * q * (q - 1) // 2
    rng = np.random.default_rng(0)
    for a, g, h in rng.integers(0, G.order, size=(1000, 3)):
        ag, ah = G.left_translate(int(a), [int(g), int(h)])
        assert A[ag, ah] == A[g, h]


def test_small_graphs(pgl):
    assert dg.build(pgl(2)).valency == 2
    assert dg.build(pgl(5)).valency == 50
    with pytest.raises(SizeLimitExceeded):
        dg.build(pgl(5), max_order=100)


def test_edge_list(pgl):
    graph = dg.build(pgl(3))
    lines = graph.edge_list_text().splitlines()
    pairs = [tuple(map(int, line.split())) for line in lines]
    assert len(pairs) == 24 * 9 // 2
    assert all(u < v for u, v in pairs) and pairs == sorted(pairs)


def naive_groups():
    F3, F4, F5 = (field_of_order(q) for q in (3, 4, 5))
    from pglekr.projective_group import enumerate_pgl

    p3, p4, p5 = enumerate_pgl(F3), enumerate_pgl(F4), enumerate_pgl(F5)
    return [
        ("PGL(2,3)", p3, 6), ("PGL(2,4)", p4, 12), ("PSL(2,5)", enumerate_psl(p5), 10),
        ("PSL(2,3)", enumerate_psl(p3), 3), ("AGL(1,4)", enumerate_agl1(F4), 3),
        ("AGL(1,5)", enumerate_agl1(F5), 4),
    ]


@pytest.mark.parametrize("name,G,target", naive_groups(), ids=lambda x: x if isinstance(x, str) else "")
@pytest.mark.parametrize("recolor_every", [1, 3, 8])
def test_branch_and_bound_matches_naive(name, G, target, recolor_every):
    graph = dg.build(G)
    naive, larger = dg.naive_rooted_sets(graph, target)
    assert not larger
    fam = dg.enumerate_max_independent_sets(graph, target, recolor_every)
    assert sorted(fam.rooted) == naive
    assert all(graph.is_independent(S) for S in fam.sets)
    assert len(set(fam.sets)) == len(fam.sets)


@pytest.mark.parametrize("q,count", [(3, 16), (4, 25)])
def test_pgl_family_counts(pgl, q, count):
    fam = dg.enumerate_max_independent_sets(dg.build(pgl(q)), q * (q - 1))
    assert len(fam.sets) == count and fam.complete


def test_agl_family_count():
    graph = dg.build(enumerate_agl1(field_of_order(3)))
    assert len(dg.enumerate_max_independent_sets(graph, 2).sets) == 9


def test_target_exceeded(pgl):
    graph = dg.build(pgl(4))
    with pytest.raises(TargetExceeded) as err:
        dg.enumerate_max_independent_sets(graph, 11)
    assert len(err.value.witness) == 12 and graph.is_independent(err.value.witness)


def test_stabilizer_coset(pgl):
    G = pgl(5)
    stab0 = np.flatnonzero(G.perms[:, 0] == 0)
    assert dg.is_stabilizer_coset(stab0, G) == (0, 0)
    h = 17
    # s then h: every element sends 0 to 0^h
    coset = np.array(sorted(G.compose(int(s), h) for s in stab0))
    assert dg.is_stabilizer_coset(coset, G) == (0, int(G.perms[h][0]))
    # h then s: every element sends the preimage of 0 under h to 0
    pre = int(np.flatnonzero(G.perms[h] == 0)[0])
    assert dg.is_stabilizer_coset(G.left_translate(h, stab0), G) == (pre, 0)
    outsider = next(i for i in range(G.order) if i not in set(coset.tolist()))
    broken = list(coset[1:]) + [outsider]
    assert dg.is_stabilizer_coset(broken, G) is None
    assert dg.is_stabilizer_coset(coset[1:], G) is None


def test_hoffman_certificate(pgl):
    for q, p in ((5, 0), (4, 4)):
        G = pgl(q)
        graph = dg.build(G)
        stab = np.flatnonzero(G.perms[:, p] == p)
        tau = Fraction(-q * (q - 1), 2)
        assert dg.hoffman_certificate(stab, graph, tau)
        assert not dg.hoffman_certificate(stab, graph, tau - 1)
        assert not dg.hoffman_certificate(stab[:-1], graph, tau)


def test_lambda_balance(pgl):
    for q, want in ((5, 10), (3, 3)):
        G = pgl(q)
        stab = np.flatnonzero(G.perms[:, 0] == 0)
        assert G.psl_mask[stab].sum() == want
        assert dg.lambda_balance(stab, G.psl_mask)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_verify_ekr(pgl, q):
    rep = dg.verify_ekr_pgl(q, pgl(q))
    n = (q + 1) ** 2
    assert rep.holds and rep.num_cosets == rep.num_maximum_sets == n
    assert rep.independence_number == q * (q - 1) and rep.bound == q * (q - 1)
    assert rep.extra["hoffman_certified"] == n and rep.extra["matrix_certified"] == n
    if q % 2:
        assert rep.extra["psl_balanced"] == n


@pytest.mark.slow
def test_verify_ekr_q7(pgl):
    rep = dg.verify_ekr_pgl(7, pgl(7))
    assert rep.holds and rep.num_maximum_sets == 64 and rep.extra["matrix_certified"] == 64


def test_verify_ekr_size_cap():
    with pytest.raises(SizeLimitExceeded):
        dg.verify_ekr_pgl(8)


def test_verify_psl(pgl):
    rep = dg.verify_psl(5, pgl(5))
    assert rep.holds and rep.num_cosets == 36 and rep.extra["status"] == "conjecture evidence"
    assert dg.verify_psl(4, pgl(4)).extra["psl_equals_pgl"]


def test_psl3_is_not_ekr(pgl):
    """PSL(2,3) acting on 4 points has maximum intersecting sets that are not cosets."""
    rep = dg.verify_psl(3, pgl(3))
    assert rep.independence_number == 3
    assert rep.num_maximum_sets == 64 and rep.num_cosets == 16
    assert not rep.holds and len(rep.witnesses) == 48


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8])
def test_frobenius(q):
    rep = dg.verify_frobenius(q)
    assert rep.holds and rep.components == q - 1
    if q <= 4:
        assert rep.count_enumerated == q ** (q - 1)


def test_frobenius_rejects_non_frobenius():
    # Sym(3) on 3 points: derangements are the two 3-cycles, components are triangles
    # of size 3 but there are only 2 of them, one fewer than the structure check expects
    perms = np.array([[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [2, 1, 0], [1, 0, 2]])
    G = PermutationGroup(perms, "S3")
    comps = dg.connected_components(dg.build(G).adjacency)
    assert sorted(map(len, comps)) == [3, 3]

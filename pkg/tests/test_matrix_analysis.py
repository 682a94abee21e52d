from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from pglekr import derangement_graph as dg
from pglekr import matrix_analysis as ma
from pglekr.errors import NonIndicator, Unsolvable


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 9), st.integers(1, 9), st.integers(0, 3), st.integers(0, 2**31))
def test_bareiss_rank_matches_sympy(rows, cols, spread, seed):
    rng = np.random.default_rng(seed)
    m = rng.integers(-spread, spread + 1, size=(rows, cols))
    if rows > 2 and seed % 3 == 0:
        m[-1] = m[0] - 2 * m[1]  # force a dependency
    assert ma.bareiss_rank(m) == sympy.Matrix(m.tolist()).rank()
    assert ma.rank_exact(m) == sympy.Matrix(m.tolist()).rank()


def test_inverse_exact():
    m = [[2, 1], [1, 1]]
    assert ma.inverse_exact(m) == [[1, -1], [-1, 2]]
    with pytest.raises(Exception):
        ma.inverse_exact([[1, 2], [2, 4]])


@pytest.mark.parametrize("q", [3, 4, 5, 7])
def test_A_shape_and_sums(pgl, q):
    t = pgl(q)
    A = ma.build_A(t)
    assert A.shape == (t.order, (q + 1) ** 2)
    assert set(A.entries.sum(axis=1).tolist()) == {q + 1}
    assert set(A.entries.sum(axis=0).tolist()) == {q * (q - 1)}
    bl = ma.blocks(A, t)
    assert bl["identity_row"][0, :q + 1].all()
    assert not bl["zero_upper"].any() and not bl["zero_left"].any()
    assert A.row_labels[0] == t.identity
    assert A.col_labels[:q + 1] == [(p, p) for p in range(q + 1)]


def test_A_dimensions_q3(pgl):
    assert ma.build_A(pgl(3)).shape == (24, 16)


@pytest.mark.parametrize("q", [3, 4, 5])
def test_gram_entries(pgl, q):
    t = pgl(q)
    A = ma.build_A(t)
    G = A.entries.T @ A.entries
    for i, (p1, q1) in enumerate(A.col_labels):
        for j, (p2, q2) in enumerate(A.col_labels):
            if (p1, q1) == (p2, q2):
                want = q * (q - 1)
            elif p1 != p2 and q1 != q2:
                want = q - 1
            else:
                want = 0
            assert G[i, j] == want
    rep = ma.gram_check(A, t)
    assert rep["eigenvalues"] == {"0": 2 * q, str(q * q - 1): q * q, str(t.order): 1}


@pytest.mark.parametrize("q", [3, 4, 5])
def test_ranks_against_sympy(pgl, q):
    t = pgl(q)
    A = ma.build_A(t)
    M = ma.build_M(t)
    assert ma.rank_exact(A) == sympy.Matrix(A.entries.tolist()).rank() == q * q + 1
    assert ma.rank_exact(M) == sympy.Matrix(M.entries.tolist()).rank() == q * (q - 1)


def test_rank_examples(pgl):
    t = pgl(5)
    assert ma.rank_exact(ma.build_A(t)) == 26
    assert ma.rank_exact(ma.build_M(t)) == 20


@pytest.mark.parametrize("q", [3, 4, 5, 7])
def test_kernel(pgl, q):
    t = pgl(q)
    rep = ma.kernel_check(ma.build_A(t), t)
    assert rep == {"vectors": 2 * q, "span_dim": 2 * q, "dim_kernel": 2 * q, "orthogonal": True, "ok": True}


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9])
def test_N_against_direct_counts(pgl, q):
    t = pgl(q)
    N = ma.build_N(t)
    rng = np.random.default_rng(q)
    labels = N.col_labels
    for i, j in rng.integers(0, len(labels), size=(300, 2)):
        (a, b), (c, d) = labels[i], labels[j]
        assert N.entries[i, j] == ma.direct_count(t, a, b, c, d)
    assert ma.verify_pair_counts(N, t)["mismatches"] == 0


def test_N_entry_examples(pgl):
    t5 = pgl(5)
    N5 = ma.build_N(t5)
    pos = {lab: i for i, lab in enumerate(N5.col_labels)}
    assert N5.entries[pos[(0, 1)], pos[(5, 3)]] == 3 == ma.direct_count(t5, 0, 1, 5, 3)
    assert N5.entries[pos[(0, 5)], pos[(5, 0)]] == 2
    t4 = pgl(4)
    N4 = ma.build_N(t4)
    pos4 = {lab: i for i, lab in enumerate(N4.col_labels)}
    assert N4.entries[pos4[(0, 4)], pos4[(4, 0)]] == 0


def test_N_formula_catches_error(pgl):
    t = pgl(5)
    N = ma.build_N(t)
    N.entries[3, 7] += 1
    with pytest.raises(AssertionError):
        ma.verify_pair_counts(N, t)


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8])
def test_N_properties(pgl, q):
    t = pgl(q)
    N = ma.build_N(t)
    E = N.entries
    assert np.array_equal(E, E.T)
    assert set(E.sum(axis=1).tolist()) == {q * (q * q - 1) // 2}
    assert set(np.diag(E).tolist()) == {q * (q - 1) // 2}
    assert ma.n_invariance(N, t)
    assert ma.bareiss_rank(E) == q * (q - 1)
    if q % 2 == 0:
        assert len(ma.distinct_eigenvalues(E)) == 4


@pytest.mark.parametrize("q", [4, 5, 7, 8])
def test_eigvec_positivity(pgl, q):
    t = pgl(q)
    rep = ma.eigvec_positivity(t, ma.build_N(t))
    assert all(v["s"] > 0 for v in rep.values())
    assert rep["lambda1"]["exact"] == str(q * (q * q - 1) // 2)
    if q % 2 == 0:
        for name, v in rep.items():
            if name.startswith("nu"):
                assert v["exact"] == str(q * (q - 1) // 2)
            if name.startswith("eta"):
                assert v["exact"] == str(q * (q + 1) // 2)
    else:
        assert "psi-1" in rep


def test_eigvec_examples_q4(pgl):
    rep = ma.eigvec_positivity(pgl(4), ma.build_N(pgl(4)))
    assert rep["nu[1]"]["exact"] == "6" and rep["eta[1]"]["exact"] == "10"


@pytest.mark.parametrize("q", [3, 4, 5, 7])
def test_reduced(pgl, q):
    t = pgl(q)
    A = ma.build_A(t)
    Abar, Mbar = ma.build_reduced(A, t)
    assert Abar.shape == (t.order, q * q + 1)
    assert Mbar.shape == (len(t.derangement_ids), q * (q - 1))
    deleted = set(ma.deleted_labels(q))
    assert not deleted & set(Abar.col_labels) and len(deleted) == 2 * q
    rep = ma.verify_reduced_ranks(A, Abar, Mbar, t)
    assert rep["rank_Abar"] == q * q + 1 and rep["rank_Mbar"] == q * (q - 1)
    assert rep["deleted_recovered"] == 2 * q and rep["vw_identity"]


def test_reduced_examples(pgl):
    A3 = ma.build_A(pgl(3))
    assert ma.build_reduced(A3, pgl(3))[0].shape == (24, 10)
    A5 = ma.build_A(pgl(5))
    assert ma.build_reduced(A5, pgl(5))[1].shape == (50, 20)
    assert ma.vw_identity(ma.build_A(pgl(4)), 4)


def test_least_squares_solver():
    E = np.array([[1, 0], [0, 1], [1, 1]])
    s = ma.ExactLeastSquares(E)
    assert s.solve([2, 3, 5]) == [Fraction(2), Fraction(3)]
    assert s.solve([1, 1, 1]) is None


def test_certify_stabilizers(pgl):
    t = pgl(5)
    cert = ma.CosetCertifier(t)
    for p in range(6):
        stab = np.flatnonzero(t.perms[:, p] == p)
        assert cert.certify_rooted(stab) == p
        assert cert.certify(stab) == (p, p)


def test_certify_translated(pgl):
    t = pgl(4)
    cert = ma.CosetCertifier(t)
    rng = np.random.default_rng(7)
    stab = np.flatnonzero(t.perms[:, 4] == 4)
    for h in rng.integers(0, t.order, size=10):
        coset = t.left_translate(int(h), stab)
        assert cert.certify(coset) == dg.is_stabilizer_coset(coset, t)


def test_certify_every_maximum_set_q7(pgl):
    t = pgl(7)
    fam = dg.enumerate_max_independent_sets(dg.build(t), 42)
    cert = ma.CosetCertifier(t)
    assert all(cert.certify(S) == dg.is_stabilizer_coset(S, t) for S in fam.sets)


def test_certify_rejects_non_cosets(pgl):
    t = pgl(4)
    cert = ma.CosetCertifier(t)
    stab = np.flatnonzero(t.perms[:, 0] == 0)
    other = next(i for i in range(t.order) if i not in set(stab.tolist()))
    broken = sorted(set(stab.tolist()[:-1]) | {other})
    with pytest.raises((Unsolvable, NonIndicator)):
        cert.certify(broken)
    # {g : 0^g in {0, 1}} is a_00 + a_01: in the column space, but w != 0
    union = np.flatnonzero(np.isin(t.perms[:, 0], [0, 1]))
    with pytest.raises(NonIndicator):
        cert.certify_rooted(union)


def test_g_x_exist(pgl):
    for q in (3, 4, 5, 7):
        t = pgl(q)
        for x in range(q + 1):
            g = ma.unipotent_fixing(t, x)
            assert t.perms[g][x] == x and t.fix_counts[g] == 1


def test_rank_suite(pgl):
    r = ma.rank_suite(pgl(4))
    assert (r["rank_A"], r["rank_M"], r["rank_N"], r["rank_Abar"], r["rank_Mbar"]) == (17, 12, 12, 17, 12)


def test_matrix_text(pgl):
    t = pgl(2)
    M = ma.build_M(t)
    text = M.to_text(lambda p: "inf" if p == 2 else str(p))
    lines = text.splitlines()
    assert lines[0] == "# M 2x6"
    assert lines[1].startswith("# columns: (0,1) (0,inf)")
    rows = [list(map(int, line.split(": ")[1].split())) for line in lines[2:]]
    assert np.array_equal(np.array(rows), M.entries)

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pglekr import _kernels as K

needs_numba = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba not installed")


@st.composite
def random_graphs(draw):
    n = draw(st.integers(1, 140))
    density = draw(st.floats(0.05, 0.9))
    seed = draw(st.integers(0, 2**31))
    rng = np.random.default_rng(seed)
    up = np.triu(rng.random((n, n)) < density, 1)
    return up | up.T


@settings(max_examples=50, deadline=None)
@given(random_graphs())
def test_pack_rows_matches_big_ints(adj):
    packed = K.pack_rows(adj)
    ints = K.rows_to_ints(adj)
    for row, value in zip(packed, ints):
        assert sum(int(w) << (64 * i) for i, w in enumerate(row)) == value


@needs_numba
@settings(max_examples=40, deadline=None)
@given(random_graphs(), st.integers(1, 6), st.integers(1, 4))
def test_enumeration_paths_agree(adj, target, k):
    a = K.enumerate_rooted_py(adj, 0, target, k)
    b = K.enumerate_rooted_nb(adj, 0, target, k)
    if a[1] is None:
        assert b == (a[0], None)
    else:
        # both report a larger set; witnesses may differ but must be independent
        assert b[1] is not None
        for w in (a[1], b[1]):
            assert len(w) == target + 1 and 0 in w
            assert not adj[np.ix_(w, w)].any()


@needs_numba
def test_capacity_growth():
    # four disjoint 5-cliques: 5^3 maximum sets through vertex 0, far above the start capacity
    block = np.ones((5, 5), dtype=bool)
    adj = np.kron(np.eye(4, dtype=bool), block) & ~np.eye(20, dtype=bool)
    sets, witness = K.enumerate_rooted_nb(adj, 0, 4, 1, capacity=10)
    assert witness is None and len(sets) == 125
    assert sets == K.enumerate_rooted_py(adj, 0, 4)[0]


@needs_numba
@settings(max_examples=30, deadline=None)
@given(st.integers(1, 40), st.integers(1, 9), st.integers(0, 2**31))
def test_adjacency_paths_agree(n, deg, seed):
    rng = np.random.default_rng(seed)
    perms = np.array([rng.permutation(deg) for _ in range(n)])
    assert np.array_equal(K.disagree_adjacency_py(perms, chunk=7), K.disagree_adjacency_nb(perms))


def test_env_flag_selects_fallback():
    code = "from pglekr import _kernels as K; print(K.USE_NUMBA)"
    env = dict(os.environ, PGLEKR_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"

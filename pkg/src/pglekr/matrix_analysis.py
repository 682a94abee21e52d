"""Incidence matrix A of PGL(2,q), its derangement block M, N = M^T M.

Row order of A: identity, then the derangements, then everything else
(each group in id order).  Column order: the q+1 diagonal pairs ``(p, p)``
first, then the ``q(q+1)`` ordered distinct pairs lexicographically.
``A[g, (p1, p2)] = 1`` iff ``p1 ^ g == p2``.  With these orders

    A = [[1, 0],
         [0, M],
         [B, C]]

All rank, kernel and solvability decisions are exact (fraction-free
elimination over the integers, or Fractions).  Floating point is used
only for the eigenvector relations of N, with an explicit tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .character_theory import ETA, LAMBDA1, NU, PSI_1, CharacterTable, build_table, class_index_array, snap_half_integer
from .errors import (
    FormulaMismatchAt,
    IdentityFails,
    InternalInconsistency,
    KernelVectorFails,
    MismatchAt,
    NonIndicator,
    NonPositive,
    NotAnEigenvector,
    RankMismatch,
    Unsolvable,
)
from .projective_group import GroupTable, cross_ratio

EIGEN_TOL = 1e-6


@dataclass
class LabeledIntMatrix:
    name: str
    entries: np.ndarray
    row_labels: list
    col_labels: list

    @property
    def shape(self):
        return self.entries.shape

    def columns(self, labels) -> np.ndarray:
        pos = {c: i for i, c in enumerate(self.col_labels)}
        return self.entries[:, [pos[c] for c in labels]]

    def to_text(self, point_name=str) -> str:
        """Plain integer grid with a header of column labels; rows prefixed by label."""
        def lab(c):
            return f"({point_name(c[0])},{point_name(c[1])})" if isinstance(c, tuple) else str(c)

        lines = [f"# {self.name} {self.shape[0]}x{self.shape[1]}",
                 "# columns: " + " ".join(lab(c) for c in self.col_labels)]
        for r, row in zip(self.row_labels, self.entries):
            lines.append(f"{r}: " + " ".join(str(int(v)) for v in row))
        return "\n".join(lines) + "\n"


def diagonal_pairs(q):
    return [(p, p) for p in range(q + 1)]


def distinct_pairs(q):
    return [(a, b) for a in range(q + 1) for b in range(q + 1) if a != b]


def lex_pairs(q):
    return [(a, b) for a in range(q + 1) for b in range(q + 1)]


def row_order(table: GroupTable) -> np.ndarray:
    ident = table.identity
    der = table.derangement_ids
    rest = [i for i in range(table.order) if i != ident and table.fix_counts[i] != 0]
    return np.array([ident, *der, *rest], dtype=np.int64)


def build_A(table: GroupTable) -> LabeledIntMatrix:
    q = table.q
    rows = row_order(table)
    cols = diagonal_pairs(q) + distinct_pairs(q)
    P = table.perms[rows]
    p1 = np.array([c[0] for c in cols])
    p2 = np.array([c[1] for c in cols])
    entries = (P[:, p1] == p2).astype(np.int64)
    return LabeledIntMatrix("A", entries, rows.tolist(), cols)


def blocks(A: LabeledIntMatrix, table: GroupTable) -> dict[str, np.ndarray]:
    q = table.q
    nd = len(table.derangement_ids)
    E = A.entries
    return {
        "identity_row": E[:1],
        "M": E[1:1 + nd, q + 1:],
        "B": E[1 + nd:, :q + 1],
        "C": E[1 + nd:, q + 1:],
        "zero_upper": E[:1, q + 1:],
        "zero_left": E[1:1 + nd, :q + 1],
    }


def build_M(table: GroupTable) -> LabeledIntMatrix:
    A = build_A(table)
    M = blocks(A, table)["M"]
    nd = len(table.derangement_ids)
    return LabeledIntMatrix("M", M, A.row_labels[1:1 + nd], A.col_labels[table.q + 1:])


# -- exact linear algebra ----------------------------------------------------------

def bareiss_rank(mat) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination on Python integers.

    Pivot: first nonzero entry of the current column at or below the
    current row.  Every division is checked to be exact.
    """
    M = np.array(mat, dtype=object)
    if M.size == 0:
        return 0
    rows, cols = M.shape
    r, prev = 0, 1
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c] != 0)
        if len(nz) == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        pv = M[r, c]
        sub = M[r + 1:, c:]
        num = pv * sub - np.outer(sub[:, 0], M[r, c:])
        if prev != 1:
            if np.any(num % prev != 0):
                raise InternalInconsistency("inexact Bareiss division")
            num = num // prev
        M[r + 1:, c:] = num
        prev = pv
        r += 1
    return r


def rank_exact(m) -> int:
    """Exact rank; tall matrices go through the Gram matrix (same rank over Q)."""
    E = m.entries if isinstance(m, LabeledIntMatrix) else np.asarray(m)
    E = np.asarray(E, dtype=np.int64)
    if E.shape[0] > E.shape[1]:
        E = E.T @ E
    return bareiss_rank(E)


def inverse_exact(mat) -> list[list[Fraction]]:
    """Gauss-Jordan inverse in Fractions; raises RankMismatch if singular."""
    n = len(mat)
    aug = [[Fraction(int(v)) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            raise RankMismatch("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv_p = 1 / aug[c][c]
        aug[c] = [v * inv_p for v in aug[c]]
        pivrow = aug[c]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], pivrow)]
    return [row[n:] for row in aug]


class ExactLeastSquares:
    """Exact solver for ``E x = b`` when ``E`` has full column rank.

    Solves the normal equations with a precomputed rational inverse of
    ``E^T E`` and then checks ``E x == b`` exactly; a failed check means
    ``b`` is outside the column space.
    """

    def __init__(self, E: np.ndarray):
        self.E = np.asarray(E, dtype=np.int64)
        gram = self.E.T @ self.E
        if bareiss_rank(gram) != self.E.shape[1]:
            raise RankMismatch("matrix does not have full column rank")
        K = inverse_exact(gram.tolist())
        self.den = math.lcm(*(v.denominator for row in K for v in row))
        self.K = np.array([[int(v * self.den) for v in row] for row in K], dtype=object)

    def solve(self, b) -> list[Fraction] | None:
        b = np.asarray(b, dtype=np.int64)
        y = (self.E.T @ b).astype(object)
        xs = self.K.dot(y)  # = den * x
        lhs = self.E.astype(object).dot(xs)
        if not np.all(lhs == b.astype(object) * self.den):
            return None
        return [Fraction(int(v), self.den) for v in xs]


# -- Structural checks on A --------------------------------------------------------

def gram_check(A: LabeledIntMatrix, table: GroupTable) -> dict:
    """``A^T A == q(q-1) I + (q-1) (J-I) (x) (J-I)`` in lexicographic column order.

    Also verifies the spectral decomposition exactly: the Kronecker
    products of the eigenvectors ``1`` and ``e_0 - e_i`` of ``J - I`` are
    eigenvectors of ``A^T A`` with eigenvalues ``|G|``, ``0`` (2q of them)
    and ``q^2 - 1`` (q^2 of them).
    """
    q = table.q
    n = q + 1
    Alex = A.columns(lex_pairs(q))
    G = Alex.T @ Alex
    JI = np.ones((n, n), dtype=np.int64) - np.eye(n, dtype=np.int64)
    expected = q * (q - 1) * np.eye(n * n, dtype=np.int64) + (q - 1) * np.kron(JI, JI)
    bad = np.argwhere(G != expected)
    if len(bad):
        i, j = bad[0]
        raise MismatchAt(A.col_labels[i], A.col_labels[j], int(expected[i, j]), int(G[i, j]))
    basis = [np.ones(n, dtype=np.int64)]
    for i in range(1, n):
        e = np.zeros(n, dtype=np.int64)
        e[0], e[i] = 1, -1
        basis.append(e)
    mult: dict[int, int] = {}
    vecs = []
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            v = np.kron(x, y)
            lam = (q * (q - 1) + (q - 1) * (q if i == 0 else -1) * (q if j == 0 else -1))
            if not np.array_equal(G @ v, lam * v):
                raise MismatchAt(("eigvec", i), ("eigvec", j), lam, "not an eigenvector")
            mult[lam] = mult.get(lam, 0) + 1
            vecs.append(v)
    if bareiss_rank(np.array(vecs)) != n * n:
        raise RankMismatch("eigenvector family is not a basis")
    expected_mult = {table.order: 1, q * q - 1: q * q, 0: 2 * q}
    if mult != expected_mult:
        raise MismatchAt("multiplicities", "", expected_mult, mult)
    return {"entrywise": True, "eigenvalues": {str(k): v for k, v in sorted(mult.items())}}


def kernel_vectors(q: int, base: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Spanning vectors of V1 and V2 (lexicographic pair coordinates, as in A's labels)."""
    n = q + 1
    V1, V2 = [], []
    for p in range(n):
        if p == base:
            continue
        v1 = np.zeros((n, n), dtype=np.int64)
        v1[p, :] += 1
        v1[base, :] -= 1
        v2 = np.zeros((n, n), dtype=np.int64)
        v2[:, p] += 1
        v2[:, base] -= 1
        V1.append(v1.ravel())
        V2.append(v2.ravel())
    return np.array(V1), np.array(V2)


def kernel_check(A: LabeledIntMatrix, table: GroupTable, rank_A: int | None = None) -> dict:
    q = table.q
    Alex = A.columns(lex_pairs(q))
    V1, V2 = kernel_vectors(q)
    stack = np.vstack([V1, V2])
    for i, v in enumerate(stack):
        if np.any(Alex @ v):
            raise KernelVectorFails(i)
    span = bareiss_rank(stack)
    orth = not np.any(V1 @ V2.T)
    rank_A = rank_exact(A) if rank_A is None else rank_A
    dim_ker = (q + 1) ** 2 - rank_A
    ok = span == 2 * q and dim_ker == 2 * q and orth
    return {"vectors": len(stack), "span_dim": span, "dim_kernel": dim_ker, "orthogonal": orth, "ok": ok}


# -- N and the cross-ratio formula -------------------------------------------------

def build_N(table: GroupTable, M: LabeledIntMatrix | None = None) -> LabeledIntMatrix:
    """``N = M^T M``: entry ((a,b),(c,d)) counts derangements with a->b and c->d."""
    M = M or build_M(table)
    return LabeledIntMatrix("N", M.entries.T @ M.entries, M.col_labels, M.col_labels)


def pair_count_value(F, alpha, beta, gamma, delta) -> int:
    """Claimed value of ``N[(alpha, beta), (gamma, delta)]`` from the cross-ratio."""
    q = F.q
    if alpha == gamma and beta == delta:
        return q * (q - 1) // 2
    if (alpha == gamma) != (beta == delta):
        return 0
    if q % 2 == 0:
        if alpha == delta and beta == gamma:
            return 0
        return q // 2
    c = cross_ratio(F, alpha, delta, gamma, beta)
    return (q - 1) // 2 if F.is_square(c) else (q + 1) // 2


def verify_pair_counts(N: LabeledIntMatrix, table: GroupTable) -> dict:
    F = table.F
    labels = N.col_labels
    E = N.entries
    mismatches = 0
    first = None
    for i, (a, b) in enumerate(labels):
        for j, (c, d) in enumerate(labels):
            want = pair_count_value(F, a, b, c, d)
            if E[i, j] != want:
                mismatches += 1
                if first is None:
                    first = ((a, b), (c, d), want, int(E[i, j]))
    if first:
        raise FormulaMismatchAt(*first)
    return {"entries": len(labels) ** 2, "mismatches": mismatches}


def direct_count(table: GroupTable, a, b, c, d) -> int:
    """Derangements mapping a to b and c to d, counted straight from permutations."""
    P = table.perms[table.derangement_ids]
    return int(((P[:, a] == b) & (P[:, c] == d)).sum())


def pair_permutation(table: GroupTable, labels) -> np.ndarray:
    """For each g, the index permutation of ``labels`` induced by ``(a,b) -> (a^g, b^g)``."""
    q = table.q
    pos = np.full((q + 1, q + 1), -1, dtype=np.int64)
    for i, (a, b) in enumerate(labels):
        pos[a, b] = i
    a = np.array([x for x, _ in labels])
    b = np.array([y for _, y in labels])
    return pos[table.perms[:, a], table.perms[:, b]]


def n_invariance(N: LabeledIntMatrix, table: GroupTable) -> bool:
    E = N.entries
    for perm in pair_permutation(table, N.col_labels):
        if not np.array_equal(E[np.ix_(perm, perm)], E):
            return False
    return True


def distinct_eigenvalues(mat, tol=1e-6) -> list[float]:
    ev = np.sort(np.linalg.eigvalsh(np.asarray(mat, dtype=float)))
    out = [ev[0]]
    for x in ev[1:]:
        if x - out[-1] > tol:
            out.append(x)
    return [float(x) for x in out]


def eigvec_positivity(table: GroupTable, N: LabeledIntMatrix, ct: CharacterTable | None = None,
                      tol: float = EIGEN_TOL) -> dict:
    """Check ``N v_chi = s_chi v_chi`` and ``s_chi > 0`` for the constituents of
    the pair permutation character other than psi_1.

    ``v_chi = sum_g chi(g^-1) e_(0^g, inf^g)``; ``s_chi`` is read off the
    ``(0, inf)`` coordinate.
    """
    q = table.q
    ct = ct or build_table(q, table)
    cls = class_index_array(table, ct)
    inv_cls = cls[table.inverse_ids]
    pos = {lab: i for i, lab in enumerate(N.col_labels)}
    idx = np.array([pos[(int(P[0]), int(P[q]))] for P in table.perms])
    base = pos[(0, q)]
    E = N.entries.astype(float)
    out = {}
    for ci, chi in enumerate(ct.characters):
        if chi.kind not in (LAMBDA1, PSI_1, ETA, NU):
            continue
        v = np.zeros(len(pos), dtype=complex)
        np.add.at(v, idx, ct.values[ci, inv_cls])
        Nv = E @ v
        s = Nv[base] / v[base]
        resid = float(np.linalg.norm(Nv - s * v) / max(np.linalg.norm(Nv), 1.0))
        if resid > tol or abs(s.imag) > tol:
            raise NotAnEigenvector(f"{chi}: residual {resid:.3g}")
        if s.real <= 0:
            raise NonPositive(f"{chi}: s = {s.real}")
        entry = {"s": round(float(s.real), 9), "residual": resid, "positive": True}
        if chi.kind == LAMBDA1:
            entry["exact"] = str(snap_half_integer(s.real))
            entry["expected"] = str(Fraction(q * (q * q - 1), 2))
        elif q % 2 == 0 and chi.kind in (ETA, NU):
            entry["exact"] = str(snap_half_integer(s.real))
            want = q * (q + 1) // 2 if chi.kind == ETA else q * (q - 1) // 2
            entry["expected"] = str(want)
        if "expected" in entry and entry["exact"] != entry["expected"]:
            raise NotAnEigenvector(f"{chi}: s = {entry['exact']}, expected {entry['expected']}")
        out[str(chi)] = entry
    return out


# -- reduced matrices and the coset certificate -----------------------------------

def deleted_labels(q: int):
    inf = q
    return [(inf, t) for t in range(q)] + [(t, inf) for t in range(q)]


def build_reduced(A: LabeledIntMatrix, table: GroupTable) -> tuple[LabeledIntMatrix, LabeledIntMatrix]:
    """Drop the 2q columns ``(inf, t)`` and ``(t, inf)``; return ``(A-bar, M-bar)``."""
    q = table.q
    drop = set(deleted_labels(q))
    keep = [c for c in A.col_labels if c not in drop]
    Abar = LabeledIntMatrix("A-bar", A.columns(keep), A.row_labels, keep)
    nd = len(table.derangement_ids)
    mkeep = keep[q + 1:]
    Mbar = LabeledIntMatrix("M-bar", Abar.entries[1:1 + nd, q + 1:], A.row_labels[1:1 + nd], mkeep)
    return Abar, Mbar


def vw_identity(A: LabeledIntMatrix, q: int) -> bool:
    """``(q-1) a_{0,inf} == v - w`` with v, w built from columns of A-bar."""
    inf = q

    def col(x, y):
        return A.columns([(x, y)])[:, 0]

    v = sum(col(x, y) for x in range(q + 1) if x not in (0, inf) for y in range(q + 1) if y != inf)
    w = (q - 2) * sum(col(0, x) for x in range(q + 1) if x != inf) + col(inf, inf)
    return bool(np.array_equal((q - 1) * col(0, inf), v - w))


def verify_reduced_ranks(A: LabeledIntMatrix, Abar: LabeledIntMatrix, Mbar: LabeledIntMatrix, table: GroupTable,
                  rank_A: int | None = None) -> dict:
    q = table.q
    rA = rank_exact(A) if rank_A is None else rank_A
    rAbar = rank_exact(Abar)
    rMbar = rank_exact(Mbar)
    if Abar.shape[1] != q * q + 1 or Mbar.shape[1] != q * (q - 1):
        raise RankMismatch(f"unexpected shapes {Abar.shape}, {Mbar.shape}")
    if not (rAbar == rA == q * q + 1 and rMbar == q * (q - 1)):
        raise RankMismatch(f"rank(A)={rA}, rank(A-bar)={rAbar}, rank(M-bar)={rMbar}")
    if not vw_identity(A, q):
        raise IdentityFails("(q-1) a_{0,inf} != v - w")
    solver = ExactLeastSquares(Abar.entries)
    recovered = sum(solver.solve(A.columns([c])[:, 0]) is not None for c in deleted_labels(q))
    if recovered != 2 * q:
        raise RankMismatch(f"only {recovered} of {2 * q} deleted columns lie in the column space")
    return {"rank_A": rA, "rank_Abar": rAbar, "rank_Mbar": rMbar, "Mbar_columns": Mbar.shape[1],
            "vw_identity": True, "deleted_recovered": recovered}


def unipotent_fixing(table: GroupTable, x: int) -> int:
    """Smallest id fixing ``x`` and moving every other point."""
    P = table.perms
    hits = np.flatnonzero((table.fix_counts == 1) & (P[:, x] == x))
    if len(hits) == 0:
        raise InternalInconsistency(f"no element fixes only {x}")
    return int(hits[0])


@dataclass
class CosetCertifier:
    """Runs the column-space argument: a maximum independent set through the
    identity is the stabilizer of the point picked out by ``A-bar x = v_S``."""

    table: GroupTable
    A: LabeledIntMatrix = field(init=False)
    Abar: LabeledIntMatrix = field(init=False)

    def __post_init__(self):
        t = self.table
        self.A = build_A(t)
        self.Abar, _ = build_reduced(self.A, t)
        self.solver = ExactLeastSquares(self.Abar.entries)
        self.row_pos = np.empty(t.order, dtype=np.int64)
        self.row_pos[np.asarray(self.A.row_labels)] = np.arange(t.order)
        self.g_x = [unipotent_fixing(t, x) for x in range(t.q + 1)]

    def certify_rooted(self, ids) -> int:
        """Point ``p`` with ``ids == Stab(p)``; ``ids`` must contain the identity."""
        t = self.table
        q = t.q
        ids = np.asarray(sorted(ids), dtype=np.int64)
        if t.identity not in ids:
            raise ValueError("set must contain the identity")
        vS = np.zeros(t.order, dtype=np.int64)
        vS[self.row_pos[ids]] = 1
        x = self.solver.solve(vS)
        if x is None:
            raise Unsolvable(f"characteristic vector of {ids.tolist()} is outside the column space of A-bar")
        v, w = x[:q + 1], x[q + 1:]
        if sum(v) != 1:
            raise NonIndicator(f"1^T v = {sum(v)}")
        if any(w):
            raise NonIndicator("w != 0 although M-bar has full column rank")
        for p, g in enumerate(self.g_x):
            if v[p] != vS[self.row_pos[g]]:
                raise NonIndicator(f"v[{p}] = {v[p]} differs from the g_x row")
        if any(c not in (0, 1) for c in v):
            raise NonIndicator(f"v = {v}")
        p = next(i for i, c in enumerate(v) if c == 1)
        stab = np.flatnonzero(t.perms[:, p] == p)
        if not np.array_equal(stab, ids):
            raise NonIndicator(f"certified point {p} but the set is not Stab({p})")
        return p

    def certify(self, ids):
        """``(r, p)`` with ``ids == {g : r^g = p}``, translating to the identity first."""
        t = self.table
        ids = np.asarray(sorted(ids), dtype=np.int64)
        s = int(ids[0])
        rooted = t.left_translate(t.inverse(s), ids)
        p = self.certify_rooted(rooted)
        # ids = s * Stab(p) = {g : r^g = p} with r^s = p
        r = int(np.flatnonzero(t.perms[s] == p)[0])
        return (r, p)


def certify_coset_via_A(ids, table: GroupTable, certifier: CosetCertifier | None = None):
    return (certifier or CosetCertifier(table)).certify(ids)


# -- full suite ---------------------------------------------------------------------

def rank_suite(table: GroupTable) -> dict:
    """Every exact rank claim at one q; raises on the first failure."""
    q = table.q
    A = build_A(table)
    bl = blocks(A, table)
    if not bl["identity_row"][0, :q + 1].all() or bl["zero_upper"].any() or bl["zero_left"].any():
        raise InternalInconsistency("block shape of A broken")
    rA = rank_exact(A)
    rG = bareiss_rank(A.entries.T @ A.entries)
    gram = gram_check(A, table)
    ker = kernel_check(A, table, rA)
    M = build_M(table)
    N = build_N(table, M)
    rM = rank_exact(M)
    rN = bareiss_rank(N.entries)
    Abar, Mbar = build_reduced(A, table)
    reduced = verify_reduced_ranks(A, Abar, Mbar, table, rA)
    out = {
        "q": q,
        "A_shape": list(A.shape),
        "rank_A": rA,
        "rank_AtA": rG,
        "rank_M": rM,
        "rank_N": rN,
        "kernel": ker,
        "gram": gram,
        **{k: v for k, v in reduced.items() if k != "rank_A"},
    }
    if not (rA == rG == q * q + 1 and rM == rN == q * (q - 1) and ker["ok"]):
        raise RankMismatch(str(out))
    return out

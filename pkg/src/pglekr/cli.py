"""``pglekr`` command line: run verifications and write reproducible reports.

    pglekr verify [ekr spectrum psl frobenius matrices | all] --q 3,5 --format md
    pglekr spectrum --q 11 --format json
    pglekr table --q 5
    pglekr edges --q 3 --group psl
    pglekr matrix --q 3 --which M

Exit codes: 0 every check passed, 1 some check failed, 2 bad configuration.
Reports are canonical JSON (sorted keys); the markdown view is rendered
from the same dictionary.  Wall-clock times appear only with ``--timings``.
"""

from __future__ import annotations

import argparse
import json
import sys
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from . import character_theory as ct_mod
from . import derangement_graph as dg
from . import matrix_analysis as ma
from .cache import TableCache
from .errors import PglEkrError, SizeLimitExceeded
from .finite_field import field_of_order, prime_power
from .projective_group import MAX_GROUP_ORDER, enumerate_agl1, enumerate_psl

SCHEMA_VERSION = 1
CHECKS = ("spectrum", "ekr", "psl", "frobenius", "matrices")
DEFAULT_SWEEP = {
    "spectrum": (2, 3, 4, 5, 7, 8, 9, 11, 13),
    "ekr": (2, 3, 4, 5, 7),
    "psl": (5, 7),
    "frobenius": (3, 4, 5, 7, 8),
    "matrices": (2, 3, 4, 5, 7, 8, 9),
}
MAX_SEARCH_Q = 7
ADJ_SPECTRUM_MAX_Q = 5


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    checks: list[str]
    q: list[int] | None = None
    tolerance: float = ma.EIGEN_TOL
    ortho_tolerance: float = ct_mod.ORTHO_TOL
    threads: int = 1
    max_group_order: int = MAX_GROUP_ORDER
    recolor_every: int = dg.DEFAULT_RECOLOR_EVERY
    fmt: str = "json"
    out: str | None = None
    use_cache: bool = True
    timings: bool = False

    def validate(self):
        for c in self.checks:
            if c not in CHECKS:
                raise ConfigError(f"unknown check {c!r}; choose from {', '.join(CHECKS)} or all")
        if self.tolerance <= 0 or self.ortho_tolerance <= 0:
            raise ConfigError("tolerances must be positive")
        if self.threads < 1 or self.recolor_every < 1:
            raise ConfigError("--threads and --recolor-every must be at least 1")
        for q in self.q or []:
            try:
                prime_power(q)
            except PglEkrError as exc:
                raise ConfigError(f"q = {q}: {exc}") from exc

    def sweep(self, check: str) -> list[int]:
        return sorted(self.q) if self.q else list(DEFAULT_SWEEP[check])

    def echo(self) -> dict:
        """The part of the config that determines report contents."""
        return {
            "checks": self.checks,
            "q": {c: self.sweep(c) for c in self.checks},
            "tolerance": self.tolerance,
            "ortho_tolerance": self.ortho_tolerance,
            "max_group_order": self.max_group_order,
            "recolor_every": self.recolor_every,
        }


# -- shared state ----------------------------------------------------------------------

class Context:
    """Per-run group tables, built once per q even when checks run in parallel."""

    def __init__(self, cfg: RunConfig, cache: TableCache):
        self.cfg = cfg
        self.cache = cache
        self._tables = {}
        self._locks: dict[int, threading.Lock] = {}
        self._guard = threading.Lock()

    def pgl(self, q: int):
        with self._guard:
            lock = self._locks.setdefault(q, threading.Lock())
        with lock:
            if q not in self._tables:
                self._tables[q] = self.cache.pgl(field_of_order(q), self.cfg.max_group_order)
            return self._tables[q]


def _entry(name, q, claim, expected, observed, passed=None):
    if passed is None:
        passed = expected == observed
    return {"name": name, "q": q, "claim": claim, "expected": expected, "observed": observed, "passed": bool(passed)}


def _fail(name, q, claim, expected, exc):
    return _entry(name, q, claim, expected, {"error": f"{type(exc).__name__}: {exc}"}, False)


def _frac_dict(d):
    return {str(k): v for k, v in sorted(d.items(), key=lambda kv: -kv[0])}


# -- checks --------------------------------------------------------------------------

def check_spectrum(ctx: Context, q: int) -> list[dict]:
    out = []
    table = ctx.pgl(q)
    claim = "derangement-graph eigenvalues from character sums match the closed form"
    expected = _frac_dict(ct_mod.spectrum_closed_form(q))
    ct = ct_mod.build_table(q, table)
    try:
        observed = _frac_dict(ct_mod.spectrum_dict(ct_mod.spectrum(q, ct)))
        total = sum(observed.values())
        out.append(_entry("spectrum", q, claim, expected, observed,
                          observed == expected and total == table.order))
    except PglEkrError as exc:
        out.append(_fail("spectrum", q, claim, expected, exc))

    claim = "character table satisfies both orthogonality relations and sum of squared degrees = |G|"
    expected = {"within_tolerance": True, "sum_degree_squares": table.order, "square_table": True}
    try:
        rep = ct_mod.verify_orthogonality(ct, ctx.cfg.ortho_tolerance)
        observed = {"within_tolerance": True, "sum_degree_squares": rep["sum_degree_squares"],
                    "square_table": rep["square_table"]}
        out.append(_entry("character_orthogonality", q, claim, expected, observed))
    except PglEkrError as exc:
        out.append(_fail("character_orthogonality", q, claim, expected, exc))

    if q <= ADJ_SPECTRUM_MAX_Q:
        claim = "numeric adjacency eigenvalues match the closed-form multiset"
        closed = sorted(float(ev) for ev, m in ct_mod.spectrum_closed_form(q).items() for _ in range(m))
        graph = dg.build(table, ctx.cfg.max_group_order)
        numeric = np.linalg.eigvalsh(graph.adjacency.astype(float))
        dev = float(np.abs(np.sort(numeric) - np.array(closed)).max())
        out.append(_entry("adjacency_spectrum", q, claim, {"within_tolerance": True},
                          {"within_tolerance": dev <= ctx.cfg.tolerance}))
    return out


def check_ekr(ctx: Context, q: int) -> list[dict]:
    if q > MAX_SEARCH_Q:
        raise SizeLimitExceeded(f"exhaustive search is capped at q <= {MAX_SEARCH_Q}")
    table = ctx.pgl(q)
    n_sets = (q + 1) ** 2
    claim = "maximum intersecting sets of PGL(2,q) have size q(q-1) and are exactly the point-stabilizer cosets"
    expected = {"independence_number": q * (q - 1), "num_maximum_sets": n_sets, "num_cosets": n_sets, "witnesses": []}
    try:
        rep = dg.verify_ekr_pgl(q, table, MAX_SEARCH_Q, ctx.cfg.recolor_every, via_matrix=True)
    except PglEkrError as exc:
        return [_fail("ekr_pgl", q, claim, expected, exc)]
    observed = {"independence_number": rep.independence_number, "num_maximum_sets": rep.num_maximum_sets,
                "num_cosets": rep.num_cosets, "witnesses": [list(w) for w in rep.witnesses]}
    out = [
        _entry("ekr_pgl", q, claim, expected, observed),
        _entry("hoffman_bound", q, "ratio bound with valency and least eigenvalue -q(q-1)/2 equals q(q-1)",
               str(q * (q - 1)), str(rep.bound)),
        _entry("hoffman_equality", q, "every maximum set gives an eigenvector for the least eigenvalue",
               n_sets, rep.extra["hoffman_certified"]),
        _entry("coset_certificate_matrix", q,
               "column-space argument on the reduced incidence matrix certifies every maximum set",
               n_sets, rep.extra["matrix_certified"]),
    ]
    if q % 2:
        out.append(_entry("psl_balance", q, "every maximum set meets PSL(2,q) in exactly half its elements",
                          n_sets, rep.extra["psl_balanced"]))
    return out


def check_psl(ctx: Context, q: int) -> list[dict]:
    if q > MAX_SEARCH_Q:
        raise SizeLimitExceeded(f"exhaustive search is capped at q <= {MAX_SEARCH_Q}")
    table = ctx.pgl(q)
    n_sets = (q + 1) ** 2
    size = q * (q - 1) // (2 if q % 2 else 1)
    claim = "conjecture evidence: maximum intersecting sets of PSL(2,q) have size q(q-1)/2 and are point-stabilizer cosets"
    expected = {"independence_number": size, "num_maximum_sets": n_sets, "num_cosets": n_sets, "witnesses": []}
    try:
        rep = dg.verify_psl(q, table, MAX_SEARCH_Q, ctx.cfg.recolor_every)
    except PglEkrError as exc:
        return [_fail("psl_ekr", q, claim, expected, exc)]
    observed = {"independence_number": rep.independence_number, "num_maximum_sets": rep.num_maximum_sets,
                "num_cosets": rep.num_cosets, "witnesses": [list(w) for w in rep.witnesses]}
    e = _entry("psl_ekr", q, claim, expected, observed)
    e["status"] = "evidence, not proof"
    e["psl_equals_pgl"] = bool(rep.extra.get("psl_equals_pgl", False))
    return [e]


def check_frobenius(ctx: Context, q: int) -> list[dict]:
    claim = "AGL(1,q) derangement graph is q-1 disjoint q-cliques with q^(q-1) maximum independent sets"
    expected = {"components": q - 1, "component_size": q, "all_cliques": True, "max_set_size": q - 1,
                "max_set_count": q ** (q - 1)}
    try:
        rep = dg.verify_frobenius(q)
    except PglEkrError as exc:
        return [_fail("frobenius_structure", q, claim, expected, exc)]
    sizes = set(rep.component_sizes)
    observed = {"components": rep.components, "component_size": sizes.pop() if len(sizes) == 1 else sorted(sizes),
                "all_cliques": rep.all_cliques, "max_set_size": rep.max_set_size,
                "max_set_count": rep.count_enumerated if rep.count_enumerated is not None else rep.count_formula}
    e = _entry("frobenius_structure", q, claim, expected, observed)
    e["count_method"] = "enumeration" if rep.count_enumerated is not None else "one-per-clique formula"
    return [e]


def check_matrices(ctx: Context, q: int) -> list[dict]:
    table = ctx.pgl(q)
    out = []
    order = table.order
    ranks_expected = {"rank_A": q * q + 1, "rank_AtA": q * q + 1, "rank_M": q * (q - 1), "rank_N": q * (q - 1),
                      "dim_kernel_A": 2 * q, "kernel_span": 2 * q, "kernel_parts_orthogonal": True,
                      "rank_Abar": q * q + 1, "rank_Mbar": q * (q - 1), "Mbar_columns": q * (q - 1),
                      "deleted_columns_recovered": 2 * q, "vw_identity": True}
    claim = "exact ranks of A, M, N, the reduced matrices, and the kernel of A"
    try:
        r = ma.rank_suite(table)
        observed = {"rank_A": r["rank_A"], "rank_AtA": r["rank_AtA"], "rank_M": r["rank_M"], "rank_N": r["rank_N"],
                    "dim_kernel_A": r["kernel"]["dim_kernel"], "kernel_span": r["kernel"]["span_dim"],
                    "kernel_parts_orthogonal": r["kernel"]["orthogonal"], "rank_Abar": r["rank_Abar"],
                    "rank_Mbar": r["rank_Mbar"], "Mbar_columns": r["Mbar_columns"],
                    "deleted_columns_recovered": r["deleted_recovered"], "vw_identity": r["vw_identity"]}
        out.append(_entry("incidence_ranks", q, claim, ranks_expected, observed))
        out.append(_entry("gram_closed_form", q, "A^T A = q(q-1) I + (q-1)(J-I) (x) (J-I) with its eigenvalues",
                          {"entrywise": True, "eigenvalues": {str(order): 1, str(q * q - 1): q * q, "0": 2 * q}},
                          {"entrywise": r["gram"]["entrywise"],
                           "eigenvalues": {str(k): v for k, v in r["gram"]["eigenvalues"].items()}}))
    except PglEkrError as exc:
        out.append(_fail("incidence_ranks", q, claim, ranks_expected, exc))

    N = ma.build_N(table)
    claim = "derangement counts N[(a,b),(c,d)] follow the cross-ratio case formula"
    try:
        rep = ma.verify_pair_counts(N, table)
        out.append(_entry("pair_count_formula", q, claim, {"mismatches": 0, "entries": rep["entries"]},
                          {"mismatches": rep["mismatches"], "entries": rep["entries"]}))
    except PglEkrError as exc:
        out.append(_fail("pair_count_formula", q, claim, {"mismatches": 0}, exc))

    E = N.entries
    n_props_expected = {"symmetric": True, "row_sum": q * (q * q - 1) // 2, "group_invariant": True}
    n_props = {"symmetric": bool(np.array_equal(E, E.T)),
               "row_sum": sorted(set(E.sum(axis=1).tolist()))[0] if len(set(E.sum(axis=1).tolist())) == 1
               else sorted(set(E.sum(axis=1).tolist())),
               "group_invariant": ma.n_invariance(N, table)}
    if q % 2 == 0 and q >= 4:
        # at q = 2 the eta and lambda1 eigenvalues coincide and there is no nu
        n_props_expected["distinct_eigenvalues"] = 4
        n_props["distinct_eigenvalues"] = len(ma.distinct_eigenvalues(E, ctx.cfg.tolerance))
    out.append(_entry("pair_count_matrix", q, "N is symmetric, G-invariant, with constant row sums",
                      n_props_expected, n_props))

    claim = "the pair-permutation constituents other than psi1 give eigenvectors of N with positive eigenvalues"
    try:
        pos = ma.eigvec_positivity(table, N, tol=ctx.cfg.tolerance)
        observed = {k: {"s": v.get("exact", f"{v['s']:.6f}"), "positive": v["positive"]} for k, v in pos.items()}
        expected = {k: {"s": v.get("expected", observed[k]["s"]), "positive": True} for k, v in pos.items()}
        out.append(_entry("eigenvector_positivity", q, claim, expected, observed))
    except PglEkrError as exc:
        out.append(_fail("eigenvector_positivity", q, claim, {"positive": True}, exc))
    return out


RUNNERS = {"spectrum": check_spectrum, "ekr": check_ekr, "psl": check_psl,
           "frobenius": check_frobenius, "matrices": check_matrices}


# -- reports ---------------------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.floating):
        return float(x)
    return x


def conventions(qs) -> dict:
    fields = {}
    for q in sorted(set(qs)):
        F = field_of_order(q)
        fields[str(q)] = {"modulus": list(F.modulus), "generator": int(F.gen),
                          "quadratic_modulus": list(F.ext.modulus)}
    return {
        "action": "right action on row vectors, [x:y] -> [x:y] g; point q is infinity",
        "order_two_coset_exponent": "(q+1)/2",
        "fields": fields,
    }


def run_checks(cfg: RunConfig, cache: TableCache | None = None) -> dict:
    cfg.validate()
    cache = cache or TableCache.from_env(disabled=not cfg.use_cache)
    ctx = Context(cfg, cache)
    jobs = [(c, q) for c in cfg.checks for q in cfg.sweep(c)]
    for c, q in jobs:
        if c in ("ekr", "psl") and q > MAX_SEARCH_Q:
            raise ConfigError(f"{c}: exhaustive search is capped at q <= {MAX_SEARCH_Q}")
        if q * (q * q - 1) > cfg.max_group_order:
            raise ConfigError(f"q = {q}: |PGL(2,q)| exceeds --max-group-order {cfg.max_group_order}")

    def run(job):
        c, q = job
        t0 = time.perf_counter()
        entries = RUNNERS[c](ctx, q)
        dt = time.perf_counter() - t0
        for e in entries:
            e["check"] = c
            if cfg.timings:
                e["runtime_s"] = round(dt, 3)
        return entries

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            batches = list(pool.map(run, jobs))
    else:
        batches = [run(j) for j in jobs]
    results = [_jsonable(e) for b in batches for e in b]
    passed = sum(e["passed"] for e in results)
    report = {
        "version": __version__,
        "schema": SCHEMA_VERSION,
        "config": _jsonable(cfg.echo()),
        "conventions": conventions(q for _, q in jobs),
        "results": results,
        "summary": {"total": len(results), "passed": passed, "failed": len(results) - passed,
                    "all_passed": passed == len(results)},
    }
    if cfg.timings:
        report["cache"] = {"hits": cache.hits, "misses": cache.misses, "rebuilt": cache.rebuilt}
    return report


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _md_value(v) -> str:
    return json.dumps(v, sort_keys=True, separators=(",", ":")).replace("|", "\\|")


def to_markdown(report: dict) -> str:
    s = report["summary"]
    lines = [f"# pglekr verification report (version {report['version']}, schema {report['schema']})", ""]
    lines.append(f"**{s['passed']} / {s['total']} checks passed**" + ("" if s["all_passed"] else f", {s['failed']} failed"))
    lines += ["", "## Configuration", "", "```json", json.dumps(report["config"], sort_keys=True, indent=2), "```", ""]
    lines += ["## Results", "", "| check | q | claim | expected | observed | result |", "|---|---|---|---|---|---|"]
    for e in report["results"]:
        res = "PASS" if e["passed"] else "**FAIL**"
        lines.append(f"| {e['name']} | {e['q']} | {e['claim']} | `{_md_value(e['expected'])}` | "
                     f"`{_md_value(e['observed'])}` | {res} |")
    lines += ["", "## Conventions", "", "```json", json.dumps(report["conventions"], sort_keys=True, indent=2), "```", ""]
    return "\n".join(lines)


def spectrum_report(qs, cfg: RunConfig) -> dict:
    out = []
    for q in qs:
        ct = ct_mod.build_table(q)
        entries = ct_mod.spectrum(q, ct)
        closed = ct_mod.spectrum_closed_form(q)
        valency = q * q * (q - 1) // 2
        tau = min(e.eigenvalue for e in entries)
        out.append({
            "q": q,
            "group_order": ct.group_order,
            "valency": valency,
            "least_eigenvalue": str(tau),
            "ratio_bound": str(ct_mod.hoffman_bound(valency, tau, ct.group_order)),
            "entries": [{"eigenvalue": str(e.eigenvalue), "multiplicity": e.multiplicity,
                         "characters": e.characters, "dimensions": e.dimensions} for e in entries],
            "matches_closed_form": ct_mod.spectrum_dict(entries) == closed,
        })
    return {"version": __version__, "schema": SCHEMA_VERSION, "spectra": out,
            "summary": {"all_passed": all(s["matches_closed_form"] for s in out)}}


def spectrum_markdown(rep: dict) -> str:
    lines = [f"# Derangement graph spectra (version {rep['version']})", ""]
    for s in rep["spectra"]:
        lines += [f"## q = {s['q']}  (|G| = {s['group_order']}, valency {s['valency']}, "
                  f"ratio bound {s['ratio_bound']})", "",
                  "| eigenvalue | multiplicity | characters |", "|---|---|---|"]
        for e in s["entries"]:
            lines.append(f"| {e['eigenvalue']} | {e['multiplicity']} | {', '.join(e['characters'])} |")
        lines.append("")
    return "\n".join(lines)


# -- argument parsing --------------------------------------------------------------

def parse_q_list(values) -> list[int] | None:
    if not values:
        return None
    out = []
    for v in values:
        for part in str(v).split(","):
            part = part.strip()
            if not part:
                continue
            try:
                out.append(int(part))
            except ValueError as exc:
                raise ConfigError(f"q must be an integer, got {part!r}") from exc
    return sorted(set(out))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", action="append", help="field orders, comma separated (repeatable)")
    common.add_argument("--format", choices=("json", "md"), default="json")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--max-group-order", type=int, default=MAX_GROUP_ORDER)
    common.add_argument("--no-cache", action="store_true", help=f"ignore ${'EKR_CACHE_DIR'} for this run")
    common.add_argument("--tolerance", type=float, default=ma.EIGEN_TOL,
                        help="tolerance for numeric eigen-relations (default 1e-6)")

    p = argparse.ArgumentParser(prog="pglekr", description="EKR verification toolkit for PGL(2,q).")
    p.add_argument("--version", action="version", version=f"pglekr {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run verification checks and write a report")
    v.add_argument("checks_pos", nargs="*", metavar="CHECK", help="spectrum ekr psl frobenius matrices all")
    v.add_argument("--checks", help="comma separated list of checks")
    v.add_argument("--recolor-every", type=int, default=dg.DEFAULT_RECOLOR_EVERY,
                   help="full recolouring period of the branch and bound")
    v.add_argument("--timings", action="store_true", help="include runtimes (reports stop being byte-stable)")

    sub.add_parser("spectrum", parents=[common], help="eigenvalues and multiplicities from character sums")
    sub.add_parser("table", parents=[common], help="export character tables as JSON")
    e = sub.add_parser("edges", parents=[common], help="edge list of a derangement graph")
    e.add_argument("--group", choices=("pgl", "psl", "agl"), default="pgl")
    m = sub.add_parser("matrix", parents=[common], help="export an incidence matrix as text")
    m.add_argument("--which", choices=("A", "M", "N", "Abar", "Mbar"), default="A")
    return p


def _checks_from(args) -> list[str]:
    names = list(args.checks_pos or [])
    if args.checks:
        names += [c.strip() for c in args.checks.split(",") if c.strip()]
    if not names or "all" in names:
        return list(CHECKS)
    seen = []
    for c in names:
        if c not in seen:
            seen.append(c)
    return seen


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _require_q(qs, command):
    if not qs:
        raise ConfigError(f"{command} needs --q")
    return qs


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        qs = parse_q_list(args.q)
        cfg = RunConfig(checks=_checks_from(args) if args.command == "verify" else [],
                        q=qs, tolerance=args.tolerance, threads=args.threads,
                        max_group_order=args.max_group_order, fmt=args.format, out=args.out,
                        use_cache=not args.no_cache,
                        recolor_every=getattr(args, "recolor_every", dg.DEFAULT_RECOLOR_EVERY),
                        timings=getattr(args, "timings", False))
        cfg.validate()
        if args.command == "verify":
            report = run_checks(cfg)
            _emit(to_json(report) if cfg.fmt == "json" else to_markdown(report), cfg.out)
            return 0 if report["summary"]["all_passed"] else 1
        qs = _require_q(qs, args.command)
        for q in qs:
            if q * (q * q - 1) > cfg.max_group_order:
                raise ConfigError(f"q = {q}: |PGL(2,q)| exceeds --max-group-order {cfg.max_group_order}")
        if args.command == "spectrum":
            rep = spectrum_report(qs, cfg)
            _emit(to_json(rep) if cfg.fmt == "json" else spectrum_markdown(rep), cfg.out)
            return 0 if rep["summary"]["all_passed"] else 1
        if args.command == "table":
            doc = {"version": __version__, "tables": [ct_mod.build_table(q).to_dict() for q in qs]}
            _emit(to_json(_jsonable(doc)), cfg.out)
            return 0
        cache = TableCache.from_env(disabled=not cfg.use_cache)
        chunks = []
        for q in qs:
            table = cache.pgl(field_of_order(q), cfg.max_group_order)
            if args.command == "edges":
                group = {"pgl": lambda: table, "psl": lambda: enumerate_psl(table),
                         "agl": lambda: enumerate_agl1(table.F)}[args.group]()
                chunks.append(dg.build(group, cfg.max_group_order).edge_list_text())
            else:
                chunks.append(_matrix_text(table, args.which))
        _emit("".join(chunks), cfg.out)
        return 0
    except (ConfigError, SizeLimitExceeded) as exc:
        print(f"pglekr: error: {exc}", file=sys.stderr)
        return 2


def _matrix_text(table, which: str) -> str:
    q = table.q

    def name(p):
        return "inf" if p == q else str(p)

    A = ma.build_A(table)
    if which == "A":
        mat = A
    elif which == "M":
        mat = ma.build_M(table)
    elif which == "N":
        mat = ma.build_N(table)
    else:
        Abar, Mbar = ma.build_reduced(A, table)
        mat = Abar if which == "Abar" else Mbar
    return mat.to_text(name)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Acceptance criteria 1 to 11, each with its instance counts and time limit.

Every criterion records one PASS/FAIL line; the lines are printed in the
terminal summary (see ``conftest.pytest_terminal_summary``) and also when
this file is run as a script.
"""

from __future__ import annotations

import random
import time

import pytest

from conftest import WORKED, brute_perm, oracle_count, oracle_xsat
from zhcount.diagram import ZhDiagram, contract
from zhcount.encode import cnf_to_zh
from zhcount.evalzh import eval_via_counting, fragment_of, lower_fragment, zhpi_to_3sat
from zhcount.formula import CnfFormula, count_auto, count_sat, profile
from zhcount.identities import check_identity, identities
from zhcount.instances import random_cnf, random_digraph, random_matrix, random_monotone_2cnf, random_xsat, random_zh
from zhcount.perm import (
    GADGET_CONDITIONS,
    build_permanent_graph,
    completion_sums,
    cycle_cover_sum,
    gadget_search,
    permanent_naive,
    permanent_ryser,
)
from zhcount.reduce import (
    crossings,
    degree3,
    fib,
    find_fib_zero,
    monotonize,
    pipeline,
    planarize,
    to_2sat_exact,
    to_2sat_fixed,
    to_2sat_pow2p1,
    verify_cert,
)
from zhcount.zw import SimpleGraph, count_perfect_matchings, twosat_to_xsat, verify_pm_cert, xsat_count, xsat_to_cnf, xsat_to_perfect_matchings

RESULTS: dict[int, str] = {}


class Criterion:
    """Times a block, records the verdict and fails if over the limit."""

    def __init__(self, number: int, title: str, limit: float | None):
        self.number, self.title, self.limit = number, title, limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        dt = time.perf_counter() - self.t0
        late = self.limit is not None and dt > self.limit
        ok = exc_type is None and not late
        why = "" if ok else (f" ({exc_type.__name__}: {exc})" if exc_type else f" (over {self.limit:.0f} s)")
        RESULTS[self.number] = f"criterion {self.number:2d} {'PASS' if ok else 'FAIL'}  {self.title}  [{dt:.1f} s]{why}"
        if late and exc_type is None:
            pytest.fail(f"criterion {self.number} took {dt:.1f} s, limit {self.limit} s")
        return False


def formulas(seed: int, count: int, max_n: int, max_m: int, max_size: int = 3, min_n: int = 1):
    rng = random.Random(seed)
    for i in range(count):
        n = rng.randint(min_n, max_n)
        m = rng.randint(0, max_m)
        yield random_cnf(1000 * seed + i, n, m, min(max_size, n))


def residue_ok(f: CnfFormula, g: CnfFormula, m: int, scalar: int = 1) -> bool:
    return oracle_count(f) % m == (scalar * count_auto(g, m)) % m


# ------------------------------------------------------------------ 1, 2


def test_criterion_01_encoding():
    with Criterion(1, "contract(cnf_to_zh(f)) = #f on 100 formulas", 60):
        for f in formulas(1, 100, 8, 12, 4):
            assert contract(cnf_to_zh(f)) == oracle_count(f), f


def test_criterion_02_worked_example():
    with Criterion(2, "worked example counts 3", None):
        assert count_sat(WORKED) == oracle_count(WORKED) == 3
        assert contract(cnf_to_zh(WORKED)) == 3


# --------------------------------------------------------------------- 3


def test_criterion_03_planarize():
    with Criterion(3, "planarize: planar, parsimonious, n+12c / m+36c", 120):
        crossed = 0
        for f in formulas(3, 50, 6, 6, 3):
            c = crossings(f)
            crossed += c > 0
            g, cert = planarize(f)
            assert profile(g).incidence_planar, f
            assert (g.num_vars, g.num_clauses) == (f.num_vars + 12 * c, f.num_clauses + 36 * c), f
            assert cert.relation.kind == "exact"
            assert count_auto(g) == oracle_count(f), f
        assert crossed >= 10  # the sample must exercise the crossover gadget


# --------------------------------------------------------------------- 4


def test_criterion_04_to_2sat():
    with Criterion(4, "to-2SAT residues, 2-CNF, exact mode, planar/bipartite", 120):
        for f in formulas(4, 100, 8, 8, 4):
            want = oracle_count(f)
            planar = profile(f).incidence_planar
            outs = [(to_2sat_pow2p1(f, r), 2**r + 1) for r in range(4)]
            outs += [(to_2sat_fixed(f, m), m) for m in (3, 5, 7)]
            for (g, cert), m in outs:
                p = profile(g)
                assert p.max_clause_size <= 2, f
                assert cert.relation.modulus == m
                assert count_auto(g, m) == want % m, (f, m)
                if planar:
                    assert p.incidence_planar, (f, m)
            g, cert = to_2sat_exact(f)
            assert cert.relation.determines_count
            assert count_auto(g) % cert.relation.modulus == want, f
            for g, _ in (to_2sat_pow2p1(f, 1, rewrite_all=True), to_2sat_fixed(f, 5, rewrite_all=True)):
                assert profile(g).primal_bipartite, f


# --------------------------------------------------------------------- 5


def test_criterion_05_monotonize():
    with Criterion(5, "monotonize: monotone, residues mod 2^r, sizes, exact", 120):
        for f in formulas(5, 100, 8, 8, 4):
            want = oracle_count(f)
            for r in (1, 2, f.num_vars + 1):
                g, cert = monotonize(f, r)
                p = profile(g)
                assert p.monotone_positive, f
                assert count_auto(g, 2**r) == want % 2**r, (f, r)
                if f.clauses and profile(f).max_clause_size >= 2:
                    assert p.max_clause_size == profile(f).max_clause_size, f
                if r == f.num_vars + 1:
                    assert cert.relation.determines_count
                    assert count_auto(g) % 2**r == want, f


# --------------------------------------------------------------------- 6


def _chain(steps: int) -> ZhDiagram:
    f = CnfFormula(steps + 1, tuple((i, i + 1) for i in range(1, steps + 1)))
    d = cnf_to_zh(f)
    return ZhDiagram(d.ring_k, d.nodes, d.edges, [0, steps])


def test_criterion_06_degree3():
    with Criterion(6, "degree-3: Fibonacci zeros, chain tensor, relation", None):
        for m in range(1, 51):
            z = find_fib_zero(m)
            assert 0 < z.k <= m * m and fib(z.k) % m == 0, m
        for m, k in ((2, 3), (3, 4), (5, 5)):
            fp = fib(k - 1) % m
            t = contract(_chain(k)).to_ints()
            assert [[int(x) % m for x in row] for row in t] == [[fp, 0], [0, fp]], (m, k)
        rng = random.Random(6)
        hubs = 0
        for i in range(30):
            m = rng.choice((2, 3, 4, 5, 7))
            n = rng.randint(2, 5)
            f = random_cnf(1000 * 6 + i, n, rng.randint(3, 9), min(3, n))
            hubs += profile(f).max_var_degree > 3
            g, cert = degree3(f, m, find_fib_zero(m).k)
            assert profile(g).max_var_degree <= 3, f
            assert residue_ok(f, g, m, cert.relation.scalar), (f, m)
            assert verify_cert(f, g, cert, fallback=True)
        assert hubs >= 10


# --------------------------------------------------------------------- 7


def test_criterion_07_pipeline():
    with Criterion(7, "Mod(2) pipeline: all five properties and the relation", 300):
        for f in formulas(7, 20, 5, 5, 3):
            g, chain = pipeline(f, "pl,2sat,mon,bi,3deg", 2)
            p = profile(g)
            assert p.max_clause_size <= 2 and p.monotone_positive and p.primal_bipartite, f
            assert p.incidence_planar and p.max_var_degree <= 3, f
            assert chain.composed.relation.modulus == 2
            assert verify_cert(f, g, chain.composed, fallback=True), f
            assert count_auto(g, 2) == oracle_count(f) % 2, f


# --------------------------------------------------------------------- 8


def test_criterion_08_permanent():
    with Criterion(8, "permanent: gadget sums, 4^m identity, Ryser cross-checks", 300):
        gadget_search.cache_clear()
        assert completion_sums(gadget_search(1)) == GADGET_CONDITIONS
        rng = random.Random(8)
        for i in range(30):
            n = rng.randint(2, 3)
            f = random_monotone_2cnf(1000 * 8 + i, n, rng.randint(0, 3))
            g = build_permanent_graph(f)
            assert permanent_ryser(g.adjacency()) * 2**g.isolated == 4 ** len(g.gadget_blocks) * oracle_count(f), f
        for i in range(20):
            a = random_matrix(1000 * 8 + i, 5)
            assert permanent_ryser(a) == permanent_naive(a) == brute_perm(a)
        for i in range(50):
            g = random_digraph(1000 * 8 + i, 1 + i % 7)
            assert permanent_ryser(g.adjacency()) == cycle_cover_sum(g)


# --------------------------------------------------------------------- 9


def test_criterion_09_xsat_matchings():
    with Criterion(9, "#XSAT parsimony, PmCert congruence, K4", None):
        for f in formulas(9, 100, 6, 6, 2):
            assert xsat_count(twosat_to_xsat(f)) == oracle_count(f), f
        rng = random.Random(9)
        for i in range(100):
            x = random_xsat(1000 * 9 + i, rng.randint(1, 6), rng.randint(0, 5), 4)
            assert count_sat(xsat_to_cnf(x)) == oracle_xsat(x.num_vars, x.clauses), x
        for i in range(50):
            x = random_xsat(1000 * 90 + i, rng.randint(1, 5), rng.randint(0, 3), 3)
            cert = xsat_to_perfect_matchings(x)
            assert verify_pm_cert(x, cert), x
        k4 = SimpleGraph(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)))
        assert count_perfect_matchings(k4) == 3


# -------------------------------------------------------------------- 10


def test_criterion_10_eval_zh():
    with Criterion(10, "Eval-ZH: zhpi certificate, lowering identity, eval = contract", 300):
        rng = random.Random(10)
        for i in range(50):
            d = random_zh(1000 * 10 + i, 0, rng.randint(1, 8))
            cert = zhpi_to_3sat(d)
            v = contract(d)
            assert cert.c * (count_auto(cert.f1) - count_auto(cert.f2)) == v
            assert eval_via_counting(d) == v
        done = 0
        i = 0
        while done < 30:
            d = random_zh(1000 * 11 + i, 2, rng.randint(2, 6))
            i += 1
            if fragment_of(d).k == 0:
                continue
            c, a, d1, d2 = lower_fragment(d)
            v = contract(d)
            assert c * (contract(d1) + a * contract(d2)) == v
            assert eval_via_counting(d) == v
            done += 1


# -------------------------------------------------------------------- 11


def test_criterion_11_identities():
    with Criterion(11, "identity fixtures: swap, H-box expansion, XOR, copy", None):
        fixtures = identities()
        names = {i.name.split("(")[0] for i in fixtures}
        assert {"swap-3cnot", "hbox-expansion", "tseytin-xor", "magic-copy"} <= names
        for ident in fixtures:
            assert ident.legs <= 4
            assert check_identity(ident), ident.name


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))

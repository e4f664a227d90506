import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import WORKED, WORKED_TEXT, cnf_formulas, oracle_count
from zhcount.errors import BoundExceededError, FormatError, PreconditionError
from zhcount.formula import (
    CnfFormula,
    count_auto,
    count_sat,
    count_sat_elim,
    count_sat_mod,
    emit_dimacs,
    is_incidence_planar,
    parse_dimacs,
    profile,
    var_degrees,
)
from zhcount.instances import random_cnf


def test_parse_worked_example():
    assert parse_dimacs(WORKED_TEXT).canonical() == WORKED.canonical()


def test_parse_no_clauses():
    f = parse_dimacs("p cnf 1 0\n")
    assert f.num_vars == 1 and f.num_clauses == 0


def test_parse_out_of_range():
    with pytest.raises(FormatError):
        parse_dimacs("p cnf 2 1\n3 0\n")


@pytest.mark.parametrize(
    "text",
    ["1 2 0\n", "p cnf x 1\n", "p cnf 2 1\np cnf 2 1\n", "p cnf 2 1\n1 a 0\n", "p dnf 2 1\n"],
)
def test_parse_malformed(text):
    with pytest.raises(FormatError):
        parse_dimacs(text)


def test_parse_strict_clause_count():
    parse_dimacs("p cnf 2 2\n1 0\n", strict=False)
    with pytest.raises(FormatError):
        parse_dimacs("p cnf 2 2\n1 0\n", strict=True)


def test_parse_comments_and_multiline_clause():
    f = parse_dimacs("c hello\np cnf 3 1\n1 -2\n3 0\n")
    assert f.clauses == ((1, -2, 3),)


def test_emit_empty():
    assert emit_dimacs(CnfFormula(0)) == b"p cnf 0 0\n"


def test_emit_unit():
    assert b"\n-1 0\n" in emit_dimacs(CnfFormula(1, ((-1,),)))


def test_emit_round_trip_worked():
    assert parse_dimacs(emit_dimacs(WORKED)) == WORKED


def test_tautology_dropped_with_warning():
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        f = CnfFormula(2, ((1, -1), (2,)))
    assert f.clauses == ((2,),)
    assert any("tautological" in str(x.message) for x in w)


def test_normalization():
    f = CnfFormula(3, ((3, 1, 1, -2),))
    assert f.clauses == ((1, -2, 3),)
    with pytest.raises(PreconditionError):
        CnfFormula(2, ((0,),))
    with pytest.raises(PreconditionError):
        CnfFormula(1, ((2,),))


def test_count_worked():
    assert count_sat(WORKED) == 3 == oracle_count(WORKED)


def test_count_free_variables():
    assert count_sat(CnfFormula(4)) == 16


def test_count_empty_clause():
    assert count_sat(CnfFormula(3, ((1,), ()))) == 0


def test_count_bound():
    with pytest.raises(BoundExceededError):
        count_sat(CnfFormula(30))


@pytest.mark.parametrize("m,res", [(2, 1), (5, 3), (1, 0)])
def test_count_mod_worked(m, res):
    assert count_sat_mod(WORKED, m).residue == res


def test_profile_worked():
    p = profile(WORKED)
    assert (p.max_clause_size, p.monotone_positive, p.monotone_negative, p.max_var_degree) == (3, False, False, 3)
    assert p.incidence_planar


def test_profile_path():
    p = profile(CnfFormula(3, ((1, 2), (2, 3))))
    assert p.monotone_positive and p.primal_bipartite


def test_profile_triangle_not_bipartite():
    assert not profile(CnfFormula(3, ((1, 2), (2, 3), (1, 3)))).primal_bipartite


def test_k33_incidence_is_nonplanar():
    # three variables each in three clauses: incidence graph K_{3,3}
    f = CnfFormula(3, ((1, 2, 3),) * 1 + ((1, 2, -3),) + ((-1, 2, 3),))
    assert not is_incidence_planar(f)


def test_elimination_large_chain():
    n = 200
    f = CnfFormula(n, tuple((i, i + 1) for i in range(1, n)))
    # independent sets on a path complement count: Fibonacci
    a, b = 1, 2
    for _ in range(n - 1):
        a, b = b, a + b
    assert count_sat_elim(f) == b
    assert count_sat_elim(f, 1000003) == b % 1000003
    assert count_auto(f, 97) == b % 97


@given(cnf_formulas(max_vars=8, max_clauses=10, max_size=4))
def test_count_matches_oracle(f):
    c = oracle_count(f)
    assert count_sat(f) == c
    assert count_sat_elim(f) == c
    assert count_sat_elim(f, 7) == c % 7


@given(cnf_formulas(max_vars=8, max_clauses=10, max_size=4))
def test_dimacs_round_trip(f):
    assert parse_dimacs(emit_dimacs(f), strict=True) == f


@given(cnf_formulas(max_vars=8, max_clauses=10, max_size=4))
def test_degrees_and_euler_bound(f):
    deg = var_degrees(f)
    assert sum(deg) == sum(len(c) for c in f.clauses)
    p = profile(f)
    edges = sum(deg)
    vertices = f.num_vars + f.num_clauses
    # a planar bipartite graph has at most 2V - 4 edges
    if vertices >= 3 and edges > 2 * vertices - 4:
        assert not p.incidence_planar


@given(st.integers(0, 10_000))
def test_random_cnf_in_range(seed):
    f = random_cnf(seed, 5, 6, 3)
    assert f.num_vars == 5
    assert all(1 <= len(c) <= 3 for c in f.clauses)

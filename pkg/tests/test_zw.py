import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import WORKED, brute_matchings, cnf_formulas, oracle_count, oracle_xsat
from zhcount.diagram import contract, contract_int
from zhcount.errors import BoundExceededError, FormatError, PreconditionError
from zhcount.formula import CnfFormula, count_sat
from zhcount.instances import random_xsat
from zhcount.zw import (
    COPY4_GADGET,
    PmCert,
    SimpleGraph,
    XsatInstance,
    _w_tensor,
    count_perfect_matchings,
    count_perfect_matchings_mod,
    emit_xsat,
    find_square_gadget,
    graph_to_zw,
    parse_xsat,
    twosat_to_xsat,
    verify_pm_cert,
    xsat_count,
    xsat_to_cnf,
    xsat_to_perfect_matchings,
    xsat_to_zw,
)

K4 = SimpleGraph(4, tuple(itertools.combinations(range(4), 2)))


@st.composite
def xsat_instances(draw, max_vars=5, max_clauses=5, max_size=4):
    n = draw(st.integers(1, max_vars))
    m = draw(st.integers(0, max_clauses))
    cl = []
    for _ in range(m):
        size = draw(st.integers(1, min(max_size, n)))
        vs = draw(st.lists(st.integers(1, n), min_size=size, max_size=size, unique=True))
        signs = draw(st.lists(st.booleans(), min_size=size, max_size=size))
        cl.append(tuple(v if s else -v for v, s in zip(vs, signs)))
    return XsatInstance(n, tuple(cl))


@st.composite
def simple_graphs(draw, max_n=10):
    n = draw(st.integers(0, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return SimpleGraph(n, tuple(p for p, k in zip(pairs, keep) if k))


# ------------------------------------------------------------------ XSAT


def test_xsat_examples():
    assert xsat_count(XsatInstance(1, ((1, -1),))) == 2
    assert xsat_count(XsatInstance(3, ((1, 2, 3),))) == 3
    assert xsat_count(XsatInstance(1, ((1,), (-1,)))) == 0


def test_xsat_duplicates():
    with pytest.raises(PreconditionError):
        XsatInstance(2, ((1, 1),))
    # a repeated literal can never be the single true one
    assert xsat_count(XsatInstance(2, ((1, 1, 2),), allow_duplicates=True)) == 1


def test_xsat_io_round_trip():
    x = XsatInstance(3, ((1, -2), (3,), ()))
    assert parse_xsat(emit_xsat(x)) == XsatInstance(3, x.clauses, allow_duplicates=True)
    with pytest.raises(FormatError):
        parse_xsat("1 2 0\n")
    with pytest.raises(FormatError):
        parse_xsat("p cnf 2 1\n")
    with pytest.raises(FormatError):
        parse_xsat("p xsat 1 1\n2 0\n")


def test_xsat_bound():
    with pytest.raises(BoundExceededError):
        xsat_count(XsatInstance(30))


def test_twosat_to_xsat_examples():
    assert xsat_count(twosat_to_xsat(CnfFormula(2, ((1, 2),)))) == 3
    assert xsat_count(twosat_to_xsat(CnfFormula(1, ((1,), (-1,))))) == 0
    assert xsat_count(twosat_to_xsat(CnfFormula(2))) == 4
    with pytest.raises(PreconditionError):
        twosat_to_xsat(WORKED)


def test_xsat_to_cnf_examples():
    f = xsat_to_cnf(XsatInstance(3, ((1, 2, 3),)))
    assert f.canonical() == CnfFormula(3, ((1, 2, 3), (-1, -2), (-1, -3), (-2, -3))).canonical()
    assert count_sat(f) == 3
    assert xsat_to_cnf(XsatInstance(1, ((1,),))).clauses == ((1,),)
    g = xsat_to_cnf(XsatInstance(5, ((1, 2, 3, 4, 5),)))
    assert g.num_vars == 7 and count_sat(g) == 5


def test_xsat_to_zw_examples():
    assert contract(xsat_to_zw(XsatInstance(3, ((1, 2, 3),)))) == 3
    assert contract(xsat_to_zw(XsatInstance(1, ((1,),)))) == 1
    assert contract(xsat_to_zw(XsatInstance(1))) == 2


@given(cnf_formulas(max_vars=6, max_clauses=6, max_size=2))
def test_twosat_to_xsat_parsimonious(f):
    x = twosat_to_xsat(f)
    assert xsat_count(x) == oracle_count(f) == oracle_xsat(x.num_vars, x.clauses)


@given(xsat_instances(max_size=6))
def test_xsat_to_cnf_parsimonious(x):
    assert count_sat(xsat_to_cnf(x)) == oracle_xsat(x.num_vars, x.clauses) == xsat_count(x)


@given(xsat_instances())
def test_zw_contraction_counts(x):
    assert contract(xsat_to_zw(x)) == oracle_xsat(x.num_vars, x.clauses)


# ------------------------------------------------------------- matchings


def test_matching_examples():
    assert count_perfect_matchings(SimpleGraph(2, ((0, 1),))) == 1
    assert count_perfect_matchings(K4) == 3
    assert count_perfect_matchings(SimpleGraph(5, ((0, 1), (2, 3)))) == 0
    assert count_perfect_matchings(SimpleGraph(0)) == 1


def test_matching_bound():
    with pytest.raises(BoundExceededError):
        count_perfect_matchings(SimpleGraph(30))


def test_simple_graph_rejects():
    with pytest.raises(PreconditionError):
        SimpleGraph(2, ((0, 0),))
    with pytest.raises(PreconditionError):
        SimpleGraph(2, ((0, 1), (1, 0)))
    with pytest.raises(PreconditionError):
        SimpleGraph(2, ((0, 2),))


@given(simple_graphs())
def test_matchings_match_brute_force(g):
    want = brute_matchings(g.n, g.edges)
    assert count_perfect_matchings(g) == want
    assert count_perfect_matchings_mod(g) == want
    assert count_perfect_matchings_mod(g, 7) == want % 7


def test_large_ladder_matchings_by_contraction():
    # 2 x L ladder: Fibonacci many perfect matchings
    L = 40
    edges = [(i, i + L) for i in range(L)] + [(i, i + 1) for i in range(L - 1)] + [(i + L, i + L + 1) for i in range(L - 1)]
    g = SimpleGraph(2 * L, tuple(edges))
    a, b = 1, 1
    for _ in range(L - 1):
        a, b = b, a + b
    assert count_perfect_matchings_mod(g) == b


# --------------------------------------------------------------- gadgets


def test_square_gadget():
    edges, legs = find_square_gadget()
    assert edges == ((0, 2), (1, 2), (1, 2), (1, 3)) and legs == (0, 3)
    assert _w_tensor(4, edges, legs) == {(0, 0): 1, (0, 1): 0, (1, 0): 0, (1, 1): 2}


def test_copy4_tensor():
    t = _w_tensor(6, [(u, v) for u, v, _ in COPY4_GADGET], (0, 1, 2, 3), [w for *_, w in COPY4_GADGET])
    assert {k: v for k, v in t.items() if v} == {(0, 0, 0, 0): 2, (1, 1, 1, 1): 2}


# ------------------------------------------------------------ PM certs


def check_cert(x: XsatInstance) -> PmCert:
    cert = xsat_to_perfect_matchings(x)
    want = oracle_xsat(x.num_vars, x.clauses)
    assert cert.modulus == 2 ** (cert.num_vars + cert.c_exp) + 1
    assert want < cert.modulus
    assert verify_pm_cert(x, cert)
    return cert


@pytest.mark.parametrize(
    "x",
    [
        XsatInstance(1, ((1,),)),
        XsatInstance(1, ((1, -1),)),
        XsatInstance(3, ((1, 2), (2, 3))),
        XsatInstance(0),
        XsatInstance(0, ((),)),
        XsatInstance(2),
        XsatInstance(2, ((1, 1, 2),), allow_duplicates=True),
        XsatInstance(2, ((2, 2, 1),), allow_duplicates=True),
    ],
)
def test_pm_cert_examples(x):
    check_cert(x)


def test_pm_cert_decodes_exact_count():
    x = XsatInstance(3, ((1, 2), (2, 3)))
    cert = check_cert(x)
    pm1 = count_perfect_matchings_mod(cert.g1)
    pm2 = count_perfect_matchings_mod(cert.g2)
    assert cert.decode(pm1, pm2) == oracle_xsat(3, x.clauses) == 2


def test_pm_cert_json_round_trip():
    cert = xsat_to_perfect_matchings(XsatInstance(3, ((1, -2, 3), (2, 3))))
    assert PmCert.from_json(cert.to_json()) == cert


@pytest.mark.parametrize("seed", range(12))
def test_pm_cert_random(seed):
    check_cert(random_xsat(seed, 4, 3, 3))


def test_pm_graphs_are_plain_w_networks():
    cert = xsat_to_perfect_matchings(XsatInstance(3, ((1, 2, 3), (-1, 2))))
    for g in (cert.g1, cert.g2):
        assert contract_int(graph_to_zw(g), None, bound=22) == count_perfect_matchings_mod(g)

"""Counting reductions between CNF classes.

Every pass returns the transformed formula and a :class:`ReductionCert`.
Fresh variables are numbered after the existing ones in creation order.
Gadgets are checked by brute force over their boundary the first time a
parameter combination is used.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Sequence

import networkx as nx

from ..errors import GadgetSelfTestError, PreconditionError
from ..formula import CnfFormula, incidence_graph, profile, var_degrees
from .certs import ReductionCert, Relation
from .fib import fib

__all__ = [
    "extension_weights",
    "nand_clauses",
    "xor_gadget",
    "swap_gadget",
    "crossings",
    "planarize",
    "to_2sat_pow2p1",
    "to_2sat_fixed",
    "to_2sat_exact",
    "monotonize",
    "degree3",
    "bipartize_2sat",
]

Clause = tuple[int, ...]


class _Alloc:
    """Fresh-variable counter."""

    def __init__(self, n: int):
        self.n = n

    def __call__(self) -> int:
        self.n += 1
        return self.n

    def many(self, k: int) -> list[int]:
        return [self() for _ in range(k)]


def extension_weights(
    clauses: Sequence[Sequence[int]], boundary: Sequence[int], fresh: Sequence[int]
) -> dict[tuple[int, ...], int]:
    """Number of assignments to ``fresh`` satisfying ``clauses`` per boundary assignment."""
    out = {}
    allv = list(boundary) + list(fresh)
    for bits in itertools.product((0, 1), repeat=len(boundary)):
        total = 0
        for fb in itertools.product((0, 1), repeat=len(fresh)):
            val = dict(zip(allv, bits + fb))
            if all(any(val[abs(l)] == (l > 0) for l in c) for c in clauses):
                total += 1
        out[bits] = total
    return out


def _cert(name: str, f: CnfFormula, g: CnfFormula, rel: Relation, **params) -> ReductionCert:
    sizes = {
        "input_vars": f.num_vars,
        "input_clauses": f.num_clauses,
        "output_vars": g.num_vars,
        "output_clauses": g.num_clauses,
        "vars_added": g.num_vars - f.num_vars,
        "clauses_added": g.num_clauses - f.num_clauses,
    }
    return ReductionCert(name, rel, profile(f), profile(g), sizes, params)


def _count_bound_exact(n: int, modulus: int) -> bool:
    return (1 << n) < modulus


# ------------------------------------------------------------ planarization


def nand_clauses(x: int, y: int, z: int) -> list[Clause]:
    """Tseytin clauses for ``z = NAND(x, y)``."""
    return [(x, z), (y, z), (-x, -y, -z)]


def xor_gadget(x: int, y: int, alloc) -> tuple[list[Clause], int]:
    """``z = x XOR y`` from four NANDs; four fresh variables, twelve clauses."""
    t, u, v, z = alloc(), alloc(), alloc(), alloc()
    cl = nand_clauses(x, y, t) + nand_clauses(x, t, u) + nand_clauses(y, t, v) + nand_clauses(u, v, z)
    return cl, z


def swap_gadget(a: int, b: int, alloc) -> tuple[list[Clause], int, int]:
    """Three CNOTs exchanging two carriers.

    Returns the clauses, the new left carrier (which equals ``b``) and the
    new right carrier (which equals ``a``).
    """
    c1, r1 = xor_gadget(a, b, alloc)
    c2, l2 = xor_gadget(a, r1, alloc)
    c3, r3 = xor_gadget(r1, l2, alloc)
    return c1 + c2 + c3, l2, r3


@lru_cache(maxsize=None)
def _check_swap() -> None:
    alloc = _Alloc(2)
    cl, left, right = swap_gadget(1, 2, alloc)
    fresh = list(range(3, alloc.n + 1))
    if len(fresh) != 12 or len(cl) != 36:
        raise GadgetSelfTestError("swap gadget size is not (12, 36)")
    for a, b in itertools.product((0, 1), repeat=2):
        sols = []
        for fb in itertools.product((0, 1), repeat=12):
            val = {1: a, 2: b, **dict(zip(fresh, fb))}
            if all(any(val[abs(l)] == (l > 0) for l in c) for c in cl):
                sols.append((val[left], val[right]))
        if sols != [(b, a)]:
            raise GadgetSelfTestError(f"swap gadget wrong on input {(a, b)}: {sols}")


def crossings(f: CnfFormula) -> int:
    """Crossings of the two-row straight-line drawing (variables below, clauses above)."""
    occ = [(abs(l), j) for j, c in enumerate(f.clauses) for l in c]
    return sum(1 for (i, j), (i2, j2) in itertools.combinations(occ, 2) if (i - i2) * (j - j2) < 0)


def planarize(f: CnfFormula) -> tuple[CnfFormula, ReductionCert]:
    """Parsimonious reduction to a formula with planar incidence graph.

    Each occurrence of a variable is a strand running from the variable row
    to the clause row.  Strands start sorted by (variable, clause) and must
    end sorted by (clause, variable); a left-to-right bubble sort swaps one
    adjacent inverted pair at a time, and every swap is realised by the
    swap gadget, so each crossing costs exactly 12 variables and 36 clauses.
    """
    _check_swap()
    alloc = _Alloc(f.num_vars)
    strands = sorted((abs(l), j, l > 0) for j, c in enumerate(f.clauses) for l in c)
    target = {s: r for r, s in enumerate(sorted(strands, key=lambda s: (s[1], s[0])))}
    carrier = [s[0] for s in strands]
    order = list(strands)
    extra: list[Clause] = []
    ncross = 0
    changed = True
    while changed:
        changed = False
        for p in range(len(order) - 1):
            if target[order[p]] > target[order[p + 1]]:
                cl, left, right = swap_gadget(carrier[p], carrier[p + 1], alloc)
                extra += cl
                order[p], order[p + 1] = order[p + 1], order[p]
                carrier[p], carrier[p + 1] = left, right
                ncross += 1
                changed = True
    final = {s: carrier[p] for p, s in enumerate(order)}
    clauses = []
    for j, c in enumerate(f.clauses):
        lits = []
        for l in c:
            v = final[(abs(l), j, l > 0)]
            lits.append(v if l > 0 else -v)
        clauses.append(tuple(lits))
    g = CnfFormula(alloc.n, tuple(clauses) + tuple(extra))
    return g, _cert("planarize", f, g, Relation.exact_rel(), crossings=ncross)


# ------------------------------------------------------------------ to 2SAT


def _clause_weight_gadget_pow2p1(clause: Clause, r: int, alloc) -> tuple[list[Clause], list[int]]:
    z = alloc()
    ys = alloc.many(r)
    cl = [(-z, -l) for l in clause] + [(-y, z) for y in ys]
    return cl, [z] + ys


def _clause_weight_gadget_fixed(clause: Clause, m: int, alloc) -> tuple[list[Clause], list[int]]:
    # selector z plus an implication chain y_{M-2} -> ... -> y_1 -> z
    z = alloc()
    ys = alloc.many(m - 2)
    cl = [(-z, -l) for l in clause] + [(-ys[0], z)]
    cl += [(-ys[j + 1], ys[j]) for j in range(len(ys) - 1)]
    return cl, [z] + ys


@lru_cache(maxsize=None)
def _check_clause_gadget(kind: str, size: int, param: int) -> None:
    test_param = min(param, 8)
    alloc = _Alloc(size)
    clause = tuple(range(1, size + 1))
    if kind == "pow2p1":
        cl, fresh = _clause_weight_gadget_pow2p1(clause, test_param, alloc)
        bad = 1 + (1 << test_param)
    else:
        test_param = param if param <= 10 else 10
        cl, fresh = _clause_weight_gadget_fixed(clause, test_param, alloc)
        bad = test_param
    w = extension_weights(cl, list(clause), fresh)
    for bits, val in w.items():
        want = 1 if any(bits) else bad
        if val != want:
            raise GadgetSelfTestError(f"{kind} clause gadget weight {val} != {want} at {bits}")


def _two_sat(f: CnfFormula, gadget, kind: str, param: int, rewrite_all: bool):
    alloc = _Alloc(f.num_vars)
    kept: list[Clause] = []
    new: list[Clause] = []
    lo = 2 if rewrite_all else 3
    for c in f.clauses:
        if len(c) >= lo:
            _check_clause_gadget(kind, len(c), param)
            cl, _ = gadget(c, param, alloc)
            new += cl
        else:
            kept.append(c)
    return CnfFormula(alloc.n, tuple(kept) + tuple(new))


def to_2sat_pow2p1(f: CnfFormula, r: int, rewrite_all: bool = False) -> tuple[CnfFormula, ReductionCert]:
    """2-CNF with the same count modulo ``2**r + 1``.

    A falsified clause gets extension weight ``1 + 2**r`` and a satisfied one
    weight 1.  Clauses of size at most 2 are kept unless ``rewrite_all``, in
    which case the primal graph of the result is bipartite.
    """
    if r < 0:
        raise PreconditionError("r must be nonnegative")
    g = _two_sat(f, _clause_weight_gadget_pow2p1, "pow2p1", r, rewrite_all)
    m = (1 << r) + 1
    rel = Relation.mod(m, 1, _count_bound_exact(f.num_vars, m))
    return g, _cert("to_2sat_pow2p1", f, g, rel, r=r, rewrite_all=rewrite_all)


def to_2sat_fixed(f: CnfFormula, m: int, rewrite_all: bool = False) -> tuple[CnfFormula, ReductionCert]:
    """2-CNF with the same count modulo any fixed ``m > 2``.

    The falsified-clause weight is ``1 + (m - 1) = m`` via an implication
    chain, which keeps the incidence graph planar.
    """
    if m <= 2:
        raise PreconditionError("modulus must exceed 2")
    g = _two_sat(f, _clause_weight_gadget_fixed, "fixed", m, rewrite_all)
    rel = Relation.mod(m, 1, _count_bound_exact(f.num_vars, m))
    return g, _cert("to_2sat_fixed", f, g, rel, M=m, rewrite_all=rewrite_all)


def to_2sat_exact(f: CnfFormula, rewrite_all: bool = False) -> tuple[CnfFormula, ReductionCert]:
    """``to_2sat_pow2p1`` with ``r = n``; the count is at most ``2**n`` so the residue is the count."""
    g, cert = to_2sat_pow2p1(f, f.num_vars, rewrite_all)
    return g, ReductionCert("to_2sat_exact", cert.relation, cert.input_profile, cert.output_profile, cert.sizes, cert.params)


# ------------------------------------------------------------- monotonize


@lru_cache(maxsize=None)
def _check_negation_gadget(r: int) -> None:
    r = min(r, 10)
    alloc = _Alloc(2)
    x, xp = 1, 2
    ys = alloc.many(r)
    cl = [(x, xp)] + [(x, y) for y in ys] + [(xp, y) for y in ys]
    w = extension_weights(cl, [x, xp], ys)
    want = {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 1 << r}
    if w != want:
        raise GadgetSelfTestError(f"negation gadget weights {w} != {want}")


def monotonize(f: CnfFormula, r: int) -> tuple[CnfFormula, ReductionCert]:
    """Monotone-positive formula with the same count modulo ``2**r``.

    Each negated occurrence of ``x`` is replaced by a fresh complement
    ``x'`` tied to ``x`` by ``(x or x')`` and ``r`` weight variables, so the
    spurious branch ``x = x' = 1`` carries weight ``2**r``.  Complements are
    per occurrence, which keeps planar inputs planar.
    """
    if r < 1:
        raise PreconditionError("r must be at least 1")
    _check_negation_gadget(r)
    alloc = _Alloc(f.num_vars)
    clauses: list[Clause] = []
    extra: list[Clause] = []
    for c in f.clauses:
        lits = []
        for l in c:
            if l > 0:
                lits.append(l)
                continue
            x = -l
            xp = alloc()
            ys = alloc.many(r)
            extra.append((x, xp))
            for y in ys:
                extra += [(x, y), (xp, y)]
            lits.append(xp)
        clauses.append(tuple(lits))
    g = CnfFormula(alloc.n, tuple(clauses) + tuple(extra))
    m = 1 << r
    rel = Relation.mod(m, 1, _count_bound_exact(f.num_vars, m))
    return g, _cert("monotonize", f, g, rel, r=r)


# ---------------------------------------------------------------- degree 3


def _rotation(f: CnfFormula) -> dict[int, list[int]]:
    """Clause indices around each variable, in planar rotation order when possible."""
    g = incidence_graph(f)
    planar, emb = nx.check_planarity(g)
    occ: dict[int, list[int]] = {v: [] for v in range(1, f.num_vars + 1)}
    for j, c in enumerate(f.clauses):
        for l in c:
            occ[abs(l)].append(j)
    if not planar:
        return occ
    out = {}
    for v, js in occ.items():
        if len(js) <= 3:
            out[v] = js
            continue
        cyc = [j for (_, j) in emb.neighbors_cw_order(("v", v))]
        s = cyc.index(min(cyc))
        out[v] = cyc[s:] + cyc[:s]
    return out


def degree3(f: CnfFormula, m: int, k: int) -> tuple[CnfFormula, ReductionCert]:
    """Formula of maximum variable degree 3 with ``#f ≡ c · #f' (mod m)``.

    A variable of degree ``d > 3`` becomes ``d - 2`` copies on a path whose
    consecutive copies are joined by ``2k`` positive 2-clauses.  The chain's
    transfer matrix is ``[[0,1],[1,1]] ** 2k ≡ F_{k-1}**2 · I (mod m)`` as
    ``F_k ≡ 0``, so ``c = prod F_{k-1}**(6 - 2 d_i)`` mod ``m``.
    """
    if m < 1 or k < 1:
        raise PreconditionError("need m >= 1 and k >= 1")
    if fib(k) % m:
        raise PreconditionError(f"F_{k} = {fib(k)} is not divisible by {m}")
    fp = fib(k - 1) % m
    inv = pow(fp, -1, m) if m > 1 else 0
    alloc = _Alloc(f.num_vars)
    deg = var_degrees(f)
    rot = _rotation(f)
    holder: dict[tuple[int, int], int] = {}  # (var, clause) -> copy variable
    extra: list[Clause] = []
    chain_len = 2 * k
    scale = 1 % m
    for v in range(1, f.num_vars + 1):
        d = deg[v - 1]
        if d <= 3:
            continue
        js = rot[v]
        copies = [v] + alloc.many(d - 3)
        groups = [js[:2]] + [[j] for j in js[2:-2]] + [js[-2:]]
        for cp, grp in zip(copies, groups):
            for j in grp:
                holder[(v, j)] = cp
        for a, b in zip(copies, copies[1:]):
            path = [a] + alloc.many(chain_len - 1) + [b]
            extra += [(p, q) for p, q in zip(path, path[1:])]
        scale = scale * pow(inv, 2 * d - 6, m) % m if m > 1 else 0
    clauses = []
    for j, c in enumerate(f.clauses):
        lits = []
        for l in c:
            cp = holder.get((abs(l), j), abs(l))
            lits.append(cp if l > 0 else -cp)
        clauses.append(tuple(lits))
    g = CnfFormula(alloc.n, tuple(clauses) + tuple(extra))
    rel = Relation.mod(m, scale, _count_bound_exact(f.num_vars, m))
    return g, _cert("degree3", f, g, rel, M=m, k=k, f_prev=fp)


# --------------------------------------------------------------- bipartize


@lru_cache(maxsize=None)
def _check_edge_gadget(r: int) -> None:
    r = min(r, 3)
    alloc = _Alloc(2)
    cl, fresh = _edge_gadget(1, 2, r, alloc)
    w = extension_weights(cl, [1, 2], fresh)
    m = (1 << r) + 1
    for (a, b), val in w.items():
        want = 1 if (a or b) else 0
        if val % m != want:
            raise GadgetSelfTestError(f"bipartize gadget weight {val} mod {m} != {want} at {(a, b)}")


def _edge_gadget(l1: int, l2: int, r: int, alloc) -> tuple[list[Clause], list[int]]:
    a, b, c = alloc(), alloc(), alloc()
    cl = [(l1, a), (a, b), (b, c), (c, l2)]
    fresh = [a, b, c]
    for u in (a, b, c):
        ys = alloc.many(r)
        cl += [(u, y) for y in ys]
        fresh += ys
    return cl, fresh


def bipartize_2sat(f: CnfFormula, r: int) -> tuple[CnfFormula, ReductionCert]:
    """2-CNF with bipartite primal graph and the same count modulo ``2**r + 1``.

    Each 2-clause becomes a path of four positive-link clauses through fresh
    ``a, b, c``.  Each fresh vertex carries ``r`` pendant weight variables,
    which turns it into ``diag(1, 2**r) ≡ diag(1, -1)``, and the resulting
    product of transfer matrices is congruent to the original clause.
    """
    if r < 0:
        raise PreconditionError("r must be nonnegative")
    if any(len(c) > 2 for c in f.clauses):
        raise PreconditionError("bipartize_2sat needs a 2-CNF input")
    _check_edge_gadget(r)
    alloc = _Alloc(f.num_vars)
    kept: list[Clause] = []
    new: list[Clause] = []
    for c in f.clauses:
        if len(c) == 2:
            cl, _ = _edge_gadget(c[0], c[1], r, alloc)
            new += cl
        else:
            kept.append(c)
    g = CnfFormula(alloc.n, tuple(kept) + tuple(new))
    m = (1 << r) + 1
    rel = Relation.mod(m, 1, _count_bound_exact(f.num_vars, m))
    return g, _cert("bipartize_2sat", f, g, rel, r=r)

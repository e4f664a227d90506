"""Exactly-one SAT, ZW-diagrams and the reduction to perfect matchings.

A W-spider is 1 exactly when one of its legs carries 1, so a closed network
made only of W-spiders counts the perfect matchings of its underlying graph.
An exactly-one clause is a single W-spider and a negation is a 2-leg W.

The perfect-matching reduction removes all variable spiders but one.  A
copy spider of even degree ``2d`` becomes a chain of ``d - 1`` signed
4-leg copy gadgets, each contributing a factor 2.  Weighted wires are
realised with a diag(1, 2) square gadget, and a sign is ``diag(1, 2)**N``
because ``2**N ≡ -1`` modulo ``2**N + 1``.  The last variable is split into
its all-zeros and all-ones branches, which gives two plain graphs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from .diagram import DiagramBuilder, ZwDiagram, contract, contract_int
from .errors import BoundExceededError, FormatError, GadgetSelfTestError, PreconditionError
from .formula import ENUMERATION_BOUND, CnfFormula

__all__ = [
    "XsatInstance",
    "SimpleGraph",
    "PmCert",
    "parse_xsat",
    "emit_xsat",
    "xsat_count",
    "twosat_to_xsat",
    "xsat_to_cnf",
    "xsat_to_zw",
    "count_perfect_matchings",
    "count_perfect_matchings_mod",
    "graph_to_zw",
    "find_square_gadget",
    "COPY4_GADGET",
    "xsat_to_perfect_matchings",
    "verify_pm_cert",
]


# ----------------------------------------------------------------- XSAT


@dataclass(frozen=True)
class XsatInstance:
    """Exactly-one-true constraints over variables ``1..num_vars``.

    A clause is a tuple of literals counted with multiplicity, so a
    repeated literal can never be the true one.  Repeats are rejected unless
    ``allow_duplicates`` is set.
    """

    num_vars: int
    clauses: tuple[tuple[int, ...], ...] = ()
    allow_duplicates: bool = False

    def __post_init__(self) -> None:
        if self.num_vars < 0:
            raise PreconditionError("num_vars must be nonnegative")
        cl = tuple(tuple(int(l) for l in c) for c in self.clauses)
        for c in cl:
            for l in c:
                if l == 0 or abs(l) > self.num_vars:
                    raise PreconditionError(f"literal {l} out of range 1..{self.num_vars}")
            if not self.allow_duplicates and len(set(c)) != len(c):
                raise PreconditionError(f"clause {c} repeats a literal")
        object.__setattr__(self, "clauses", cl)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def degrees(self) -> list[int]:
        deg = [0] * self.num_vars
        for c in self.clauses:
            for l in c:
                deg[abs(l) - 1] += 1
        return deg


def parse_xsat(text: str | bytes) -> XsatInstance:
    if isinstance(text, bytes):
        text = text.decode("ascii")
    n = None
    clauses: list[list[int]] = []
    cur: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "xsat":
                raise FormatError(f"line {lineno}: malformed header {line!r}")
            n = int(parts[2])
            continue
        if n is None:
            raise FormatError(f"line {lineno}: clause before header")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(cur)
                cur = []
            elif abs(lit) > n:
                raise FormatError(f"line {lineno}: literal {lit} out of range")
            else:
                cur.append(lit)
    if n is None:
        raise FormatError("missing 'p xsat' header")
    if cur:
        clauses.append(cur)
    return XsatInstance(n, tuple(tuple(c) for c in clauses), allow_duplicates=True)


def emit_xsat(x: XsatInstance) -> bytes:
    lines = [f"p xsat {x.num_vars} {x.num_clauses}"]
    lines += [" ".join(str(l) for l in c) + (" 0" if c else "0") for c in x.clauses]
    return ("\n".join(lines) + "\n").encode("ascii")


def xsat_count(x: XsatInstance, bound: int = ENUMERATION_BOUND) -> int:
    """Assignments giving every clause Hamming weight exactly one."""
    n = x.num_vars
    if n > bound:
        raise BoundExceededError(f"{n} variables exceed the enumeration bound {bound}")
    idx = np.arange(1 << n, dtype=np.int64)
    alive = np.ones(idx.size, dtype=bool)
    for c in x.clauses:
        w = np.zeros(idx.size, dtype=np.int64)
        for l in c:
            bit = (idx >> (abs(l) - 1)) & 1
            w += bit if l > 0 else 1 - bit
        alive &= w == 1
    return int(alive.sum())


def twosat_to_xsat(f: CnfFormula) -> XsatInstance:
    """Parsimonious: ``(a or b)`` becomes exactly-one of ``{not a, not b, w}``."""
    if any(len(c) > 2 for c in f.clauses):
        raise PreconditionError("twosat_to_xsat needs clauses of size at most 2")
    n = f.num_vars
    out = []
    for c in f.clauses:
        if len(c) == 2:
            n += 1
            out.append((-c[0], -c[1], n))
        else:
            out.append(tuple(c))
    return XsatInstance(n, tuple(out))


def _exactly_one_cnf(lits: Sequence[int]) -> list[tuple[int, ...]]:
    out = [tuple(lits)]
    out += [(-a, -b) for a, b in itertools.combinations(lits, 2)]
    return [c for c in out if not any(-l in c for l in c)]


def xsat_to_cnf(x: XsatInstance) -> CnfFormula:
    """Parsimonious CNF; long clauses are split with one pivot per split."""
    n = x.num_vars
    clauses: list[tuple[int, ...]] = []
    for c in x.clauses:
        rest = list(c)
        while len(rest) > 3:
            n += 1
            w = n
            clauses += _exactly_one_cnf([rest[0], rest[1], w])
            rest = [-w] + rest[2:]
        clauses += _exactly_one_cnf(rest) if rest else [()]
    return CnfFormula(n, tuple(clauses))


def xsat_to_zw(x: XsatInstance) -> ZwDiagram:
    """Z-spider per variable (ids ``0..n-1``), W-spider per clause, 2-leg W for negation."""
    b = DiagramBuilder(0, "ZW")
    var = [b.z() for _ in range(x.num_vars)]
    for c in x.clauses:
        w = b.w()
        for l in c:
            z = var[abs(l) - 1]
            if l > 0:
                b.connect(z, w)
            else:
                neg = b.w()
                b.connect(z, neg)
                b.connect(neg, w)
    return b.freeze()


# --------------------------------------------------------------- graphs


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        es = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise PreconditionError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise PreconditionError(f"edge ({u}, {v}) out of range")
            es.append((min(u, v), max(u, v)))
        if len(set(es)) != len(es):
            raise PreconditionError("parallel edges are not allowed")
        object.__setattr__(self, "edges", tuple(sorted(es)))

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, obj: dict) -> "SimpleGraph":
        return cls(int(obj["n"]), tuple(tuple(e) for e in obj["edges"]))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g


def count_perfect_matchings(g: SimpleGraph, bound: int = 24) -> int:
    """Recursive inclusion/exclusion on the lowest uncovered vertex."""
    if g.n > bound:
        raise BoundExceededError(f"{g.n} vertices exceed the matching bound {bound}")
    if g.n % 2:
        return 0
    adj = [0] * g.n
    for u, v in g.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u

    @lru_cache(maxsize=None)
    def rec(free: int) -> int:
        if not free:
            return 1
        v = (free & -free).bit_length() - 1
        rest = free & ~(1 << v)
        cand = adj[v] & rest
        total = 0
        while cand:
            u = cand & -cand
            total += rec(rest & ~u)
            cand ^= u
        return total

    return rec((1 << g.n) - 1)


def graph_to_zw(g: SimpleGraph) -> ZwDiagram:
    b = DiagramBuilder(0, "ZW")
    ids = [b.w() for _ in range(g.n)]
    for u, v in g.edges:
        b.connect(ids[u], ids[v])
    return b.freeze()


def count_perfect_matchings_mod(g: SimpleGraph, modulus: int | None = None, width_bound: int = 22) -> int:
    """Perfect matchings via contraction of the W-network, exact or mod ``modulus``."""
    return contract_int(graph_to_zw(g), modulus, bound=width_bound)


# -------------------------------------------------------------- gadgets


def _w_tensor(n: int, edges: Sequence[tuple[int, int]], legs: Sequence[int], weights: Sequence[int] | None = None) -> dict:
    """Brute-force tensor of a W-network with weighted wires and external legs."""
    weights = list(weights) if weights is not None else [1] * len(edges)
    out = {}
    for ext in itertools.product((0, 1), repeat=len(legs)):
        total = 0
        for sel in itertools.product((0, 1), repeat=len(edges)):
            load = [0] * n
            for leg, e in zip(legs, ext):
                load[leg] += e
            w = 1
            for (u, v), s, wt in zip(edges, sel, weights):
                if s:
                    load[u] += 1
                    load[v] += 1
                    w *= wt
            if all(x == 1 for x in load):
                total += w
        out[ext] = total
    return out


@lru_cache(maxsize=None)
def find_square_gadget() -> tuple[tuple[tuple[int, int], ...], tuple[int, int]]:
    """Smallest W-multigraph on 4 vertices whose 2-leg tensor is diag(1, 2).

    Legs sit on vertices 0 and 3.  Edge multiplicities in {0, 1, 2} over the
    six vertex pairs are scanned in lexicographic order.
    """
    pairs = list(itertools.combinations(range(4), 2))
    for mult in itertools.product((0, 1, 2), repeat=len(pairs)):
        edges = [p for p, k in zip(pairs, mult) for _ in range(k)]
        t = _w_tensor(4, edges, (0, 3))
        if t == {(0, 0): 1, (0, 1): 0, (1, 0): 0, (1, 1): 2}:
            return tuple(edges), (0, 3)
    raise GadgetSelfTestError("no diag(1, 2) gadget on four vertices")


# Signed 4-leg copy gadget: legs on vertices 0..3, hubs 4 and 5.  Its tensor
# is 2 on 0000 and 1111 and 0 elsewhere.  Entries: (u, v, weight).
COPY4_GADGET: tuple[tuple[int, int, int], ...] = (
    (4, 5, 2),
    (0, 4, 1), (1, 4, 1), (2, 4, 1), (3, 4, 1),
    (0, 5, 1), (1, 5, 1), (2, 5, -1), (3, 5, -1),
    (0, 1, -1), (2, 3, 1),
)


@lru_cache(maxsize=None)
def _check_copy4() -> None:
    edges = [(u, v) for u, v, _ in COPY4_GADGET]
    weights = [w for _, _, w in COPY4_GADGET]
    t = _w_tensor(6, edges, (0, 1, 2, 3), weights)
    for ext, val in t.items():
        want = 2 if ext in ((0, 0, 0, 0), (1, 1, 1, 1)) else 0
        if val != want:
            raise GadgetSelfTestError(f"copy gadget entry {ext} = {val}, expected {want}")


class _WGraph:
    """Multigraph of W-vertices with optional wire weights during construction."""

    def __init__(self) -> None:
        self.n = 0
        self.edges: list[tuple[int, int]] = []

    def vertex(self) -> int:
        self.n += 1
        return self.n - 1

    def edge(self, u: int, v: int) -> None:
        self.edges.append((u, v))

    def square(self, u: int, v: int) -> None:
        """Wire ``u - v`` carrying diag(1, 2)."""
        sq, (la, lb) = find_square_gadget()
        loc = [self.vertex() for _ in range(4)]
        for a, b in sq:
            self.edge(loc[a], loc[b])
        self.edge(u, loc[la])
        self.edge(loc[lb], v)

    def weighted(self, u: int, v: int, weight: int, sign_power: int) -> None:
        if weight == 1:
            self.edge(u, v)
        elif weight == 2:
            self.square(u, v)
        elif weight == -1:
            # diag(1, 2) ** sign_power ≡ diag(1, -1) modulo 2**sign_power + 1
            prev = u
            for _ in range(sign_power - 1):
                mid = self.vertex()
                nxt = self.vertex()
                self.square(prev, mid)
                self.edge(mid, nxt)  # a 2-vertex path is an identity wire
                prev = nxt
            self.square(prev, v)
        else:
            raise PreconditionError(f"unsupported wire weight {weight}")

    def copy4(self, sign_power: int) -> list[int]:
        _check_copy4()
        loc = [self.vertex() for _ in range(6)]
        for a, b, w in COPY4_GADGET:
            self.weighted(loc[a], loc[b], w, sign_power)
        return loc[:4]

    def simple(self, drop: Iterable[int] = ()) -> SimpleGraph:
        """Delete ``drop`` and their wires, drop loops, subdivide parallel wires."""
        gone = set(drop)
        keep = [v for v in range(self.n) if v not in gone]
        idx = {v: i for i, v in enumerate(keep)}
        n = len(keep)
        seen: set[tuple[int, int]] = set()
        out: list[tuple[int, int]] = []
        for u, v in self.edges:
            if u in gone or v in gone or u == v:
                continue
            a, b = idx[u], idx[v]
            key = (min(a, b), max(a, b))
            if key in seen:
                p, q = n, n + 1
                n += 2
                out += [(a, p), (p, q), (q, b)]
            else:
                seen.add(key)
                out.append(key)
        return SimpleGraph(n, tuple(out))


@dataclass(frozen=True)
class PmCert:
    """``#f ≡ 2**-c_exp * (PM(g1) + PM(g2))  (mod 2**(n + c_exp) + 1)``."""

    g1: SimpleGraph
    g2: SimpleGraph
    c_exp: int
    modulus: int
    num_vars: int
    doubled: bool = False

    def to_json(self) -> dict:
        return {
            "g1": self.g1.to_json(),
            "g2": self.g2.to_json(),
            "c_exp": self.c_exp,
            "modulus": self.modulus,
            "num_vars": self.num_vars,
            "doubled": self.doubled,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PmCert":
        return cls(
            SimpleGraph.from_json(obj["g1"]),
            SimpleGraph.from_json(obj["g2"]),
            int(obj["c_exp"]),
            int(obj["modulus"]),
            int(obj["num_vars"]),
            bool(obj.get("doubled", False)),
        )

    def decode(self, pm1: int, pm2: int) -> int:
        """Residue of the original count given the two matching counts."""
        inv = pow(2, -self.c_exp, self.modulus)
        return inv * (pm1 + pm2) % self.modulus


@lru_cache(maxsize=None)
def _check_copy_chain(d: int, sign_power: int) -> None:
    """Contract a chain of ``d - 1`` copy gadgets and compare with 2**(d-1) * delta_{2d}."""
    b = DiagramBuilder(0, "ZW")
    legs: list[int] = []
    prev = None
    for i in range(d - 1):
        loc = [b.w() for _ in range(6)]
        for u, v, w in COPY4_GADGET:
            if w == 1:
                b.connect(loc[u], loc[v])
            elif w == 2:
                sq, (la, lb) = find_square_gadget()
                s = [b.w() for _ in range(4)]
                for p, q in sq:
                    b.connect(s[p], s[q])
                b.connect(loc[u], s[la])
                b.connect(s[lb], loc[v])
            else:
                neg = b.z(1)
                b.connect(loc[u], neg)
                b.connect(neg, loc[v])
        ps = loc[:4]
        if prev is None:
            legs.append(ps[0])
        else:
            b.connect(prev, ps[0])
        legs += ps[1:3]
        prev = ps[3]
    legs.append(prev)
    b.boundary = legs
    t = contract(b.freeze())
    scale = 1 << (d - 1)
    for bits in itertools.product((0, 1), repeat=2 * d):
        want = scale if len(set(bits)) == 1 else 0
        if int(t[bits]) != want:
            raise GadgetSelfTestError(f"copy chain of degree {2 * d} wrong at {bits}")
    q = (1 << sign_power) + 1
    if pow(2, sign_power, q) != q - 1:
        raise GadgetSelfTestError("sign realisation failed")


def xsat_to_perfect_matchings(x: XsatInstance) -> PmCert:
    """Two simple graphs whose matching counts determine ``xsat_count(x)``.

    The last variable is the split variable.  Every other variable must have
    even degree; if one does not, each clause is duplicated first (an
    exactly-one constraint holds twice iff it holds once).
    """
    n = x.num_vars
    if n == 0:
        g = _WGraph()
        for _ in x.clauses:
            g.vertex()
        zero = SimpleGraph(1, ())
        return PmCert(g.simple(), zero, 0, 2, 0)
    clauses = list(x.clauses)
    deg = x.degrees()
    split = n
    doubled = any(deg[v - 1] % 2 for v in range(1, n))
    if doubled:
        clauses = clauses + clauses
        deg = [2 * d for d in deg]
    c_exp = sum(d // 2 - 1 for v, d in enumerate(deg, 1) if v != split and d >= 4)
    power = n + c_exp
    modulus = (1 << power) + 1

    g = _WGraph()
    ends: dict[int, list[int]] = {v: [] for v in range(1, n + 1)}
    for c in clauses:
        w = g.vertex()
        for l in c:
            if l > 0:
                ends[l].append(w)
            else:
                neg = g.vertex()
                g.edge(neg, w)
                ends[-l].append(neg)
    for v in range(1, n):
        e = ends[v]
        d = len(e)
        if d == 0:
            cyc = [g.vertex() for _ in range(4)]
            for i in range(4):
                g.edge(cyc[i], cyc[(i + 1) % 4])
        elif d == 2:
            g.edge(e[0], e[1])
        else:
            half = d // 2
            _check_copy_chain(half, power)
            outer: list[int] = []
            prev = None
            for i in range(half - 1):
                ps = g.copy4(power)
                if prev is None:
                    outer.append(ps[0])
                else:
                    g.edge(prev, ps[0])
                outer += ps[1:3]
                prev = ps[3]
            outer.append(prev)
            for p, target in zip(outer, e):
                g.edge(p, target)
    # split: legs of the last variable all 0 (g1) or all 1 (g2)
    g1 = g.simple()
    targets = ends[split]
    if len(set(targets)) != len(targets):
        g2 = SimpleGraph(1, ())
    else:
        g2 = g.simple(drop=targets)
    return PmCert(g1, g2, c_exp, modulus, n, doubled)


def verify_pm_cert(x: XsatInstance, cert: PmCert, brute_force_limit: int = 24) -> bool:
    """Check the congruence; matchings are enumerated when small, else contracted."""
    want = xsat_count(x) % cert.modulus

    def pm(g: SimpleGraph) -> int:
        if g.n <= brute_force_limit:
            return count_perfect_matchings(g) % cert.modulus
        return count_perfect_matchings_mod(g, cert.modulus)

    return cert.decode(pm(cert.g1), pm(cert.g2)) == want

"""CNF formulas: data model, DIMACS I/O, counting oracles and profiling."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from ._elim import eliminate
from .errors import BoundExceededError, FormatError, PreconditionError

__all__ = [
    "CnfFormula",
    "FormulaProfile",
    "ModCount",
    "ENUMERATION_BOUND",
    "parse_dimacs",
    "emit_dimacs",
    "count_sat",
    "count_sat_mod",
    "count_sat_elim",
    "count_auto",
    "profile",
    "incidence_graph",
    "primal_graph",
    "var_degrees",
    "is_incidence_planar",
]

ENUMERATION_BOUND = 24

Clause = tuple[int, ...]


def _normalize_clause(lits: Iterable[int]) -> Clause | None:
    """Sort and deduplicate; return None for a tautology."""
    s = set(int(l) for l in lits)
    if 0 in s:
        raise PreconditionError("literal 0 is not allowed")
    if any(-l in s for l in s):
        return None
    return tuple(sorted(s, key=lambda l: (abs(l), l)))


@dataclass(frozen=True)
class CnfFormula:
    """A CNF over variables ``1..num_vars``.

    Literals are nonzero signed integers as in DIMACS.  Clauses are stored
    as sorted tuples without repeated literals; tautological clauses are
    dropped on construction (with a warning, never silently).
    """

    num_vars: int
    clauses: tuple[Clause, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.num_vars < 0:
            raise PreconditionError("num_vars must be nonnegative")
        out = []
        dropped = 0
        for c in self.clauses:
            nc = _normalize_clause(c)
            if nc is None:
                dropped += 1
                continue
            for l in nc:
                if abs(l) > self.num_vars:
                    raise PreconditionError(f"literal {l} out of range 1..{self.num_vars}")
            out.append(nc)
        if dropped:
            warnings.warn(f"dropped {dropped} tautological clause(s)", stacklevel=3)
        object.__setattr__(self, "clauses", tuple(out))

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def literals(self) -> Iterable[int]:
        for c in self.clauses:
            yield from c

    def evaluate(self, assignment: Sequence[bool]) -> bool:
        """``assignment[i]`` is the value of variable ``i + 1``."""
        return all(any(assignment[abs(l) - 1] == (l > 0) for l in c) for c in self.clauses)

    def with_clauses(self, extra: Iterable[Iterable[int]], num_vars: int | None = None) -> "CnfFormula":
        return CnfFormula(self.num_vars if num_vars is None else num_vars, self.clauses + tuple(tuple(c) for c in extra))

    def canonical(self) -> tuple[int, tuple[Clause, ...]]:
        """Order-insensitive key for comparisons up to clause order."""
        return self.num_vars, tuple(sorted(self.clauses))


@dataclass(frozen=True)
class ModCount:
    residue: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 1 or not 0 <= self.residue < self.modulus:
            raise PreconditionError(f"invalid residue {self.residue} mod {self.modulus}")

    def __str__(self) -> str:
        return f"{self.residue} (mod {self.modulus})"


@dataclass(frozen=True)
class FormulaProfile:
    max_clause_size: int
    monotone_positive: bool
    monotone_negative: bool
    max_var_degree: int
    primal_bipartite: bool
    incidence_planar: bool

    def to_json(self) -> dict:
        return {
            "max_clause_size": self.max_clause_size,
            "monotone_positive": self.monotone_positive,
            "monotone_negative": self.monotone_negative,
            "max_var_degree": self.max_var_degree,
            "primal_bipartite": self.primal_bipartite,
            "incidence_planar": self.incidence_planar,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FormulaProfile":
        return cls(**{k: obj[k] for k in cls.__dataclass_fields__})


# --------------------------------------------------------------------- DIMACS


def parse_dimacs(text: bytes | str, strict: bool = False) -> CnfFormula:
    """Parse DIMACS CNF.

    With ``strict`` the header clause count must match.  Otherwise it is
    advisory.  Literals outside ``1..n`` are always an error.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii")
    n = m = None
    clauses: list[list[int]] = []
    cur: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if n is not None:
                raise FormatError(f"line {lineno}: duplicate header")
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError(f"line {lineno}: malformed header {line!r}")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError as exc:
                raise FormatError(f"line {lineno}: malformed header {line!r}") from exc
            if n < 0 or m < 0:
                raise FormatError(f"line {lineno}: negative header counts")
            continue
        if n is None:
            raise FormatError(f"line {lineno}: clause before header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError as exc:
                raise FormatError(f"line {lineno}: bad token {tok!r}") from exc
            if lit == 0:
                clauses.append(cur)
                cur = []
            else:
                if abs(lit) > n:
                    raise FormatError(f"line {lineno}: literal {lit} out of range 1..{n}")
                cur.append(lit)
    if n is None:
        raise FormatError("missing 'p cnf' header")
    if cur:
        if strict:
            raise FormatError("last clause is not 0-terminated")
        clauses.append(cur)
    if strict and len(clauses) != m:
        raise FormatError(f"header declares {m} clauses, found {len(clauses)}")
    return CnfFormula(n, tuple(tuple(c) for c in clauses))


def emit_dimacs(f: CnfFormula) -> bytes:
    lines = [f"p cnf {f.num_vars} {f.num_clauses}"]
    lines += [" ".join(str(l) for l in c) + (" 0" if c else "0") for c in f.clauses]
    return ("\n".join(lines) + "\n").encode("ascii")


# ------------------------------------------------------------------ counting

_CHUNK_BITS = 18
_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def count_sat(f: CnfFormula, bound: int = ENUMERATION_BOUND) -> int:
    """Exact model count by exhaustive enumeration.

    Assignments are processed in blocks; within a block a clause is only
    evaluated on assignments that survived the previous clauses.
    """
    n = f.num_vars
    if n > bound:
        raise BoundExceededError(f"{n} variables exceed the enumeration bound {bound}")
    if any(len(c) == 0 for c in f.clauses):
        return 0
    total = 0
    size = 1 << n
    chunk = min(size, 1 << _CHUNK_BITS)
    for start in range(0, size, chunk):
        alive = np.arange(start, start + chunk, dtype=np.int64)
        for c in f.clauses:
            if alive.size == 0:
                break
            sat = np.zeros(alive.size, dtype=bool)
            for l in c:
                bit = (alive >> (abs(l) - 1)) & 1
                sat |= bit.astype(bool) if l > 0 else ~bit.astype(bool)
            alive = alive[sat]
        total += int(alive.size)
    return total


def count_sat_mod(f: CnfFormula, modulus: int, bound: int = ENUMERATION_BOUND) -> ModCount:
    if modulus < 1:
        raise PreconditionError("modulus must be at least 1")
    return ModCount(count_sat(f, bound) % modulus, modulus)


def _clause_table(c: Clause, order: list[int]) -> np.ndarray:
    t = np.ones((2,) * len(order), dtype=np.int64)
    idx = tuple(0 if l > 0 else 1 for l in sorted(c, key=lambda l: order.index(abs(l))))
    t[idx] = 0
    return t


class _Table:
    __slots__ = ("vars", "arr")

    def __init__(self, vars_: tuple[int, ...], arr: np.ndarray):
        self.vars = vars_
        self.arr = arr


def count_sat_elim(f: CnfFormula, modulus: int | None = None, width_bound: int = 24) -> int:
    """Model count by variable elimination over 0/1 clause factors.

    Independent of enumeration, so usable on formulas with thousands of
    variables when the primal graph has small treewidth.  Greedy
    min-degree order with lowest-index tie-break.  With ``modulus`` every
    intermediate is reduced, which keeps machine integers when possible.
    """
    if any(len(c) == 0 for c in f.clauses):
        return 0
    if modulus is not None and modulus < 1:
        raise PreconditionError("modulus must be at least 1")
    small = (modulus is not None and modulus < 1 << 31) or (modulus is None and f.num_vars < 62)
    dtype = np.int64 if small else object

    def red(a: np.ndarray) -> np.ndarray:
        return a % modulus if modulus is not None else a

    def mul(a: _Table, b: _Table) -> _Table:
        union = sorted(set(a.vars) | set(b.vars))
        lt = {u: _LETTERS[i] for i, u in enumerate(union)}
        spec = "".join(lt[u] for u in a.vars) + "," + "".join(lt[u] for u in b.vars)
        spec += "->" + "".join(lt[u] for u in union)
        return _Table(tuple(union), red(np.einsum(spec, a.arr, b.arr)))

    def sum_out(a: _Table, v: int) -> _Table:
        ax = a.vars.index(v)
        return _Table(a.vars[:ax] + a.vars[ax + 1:], red(a.arr.sum(axis=ax)))

    tables = []
    for c in f.clauses:
        vars_ = sorted({abs(l) for l in c})
        tables.append(_Table(tuple(vars_), _clause_table(c, vars_).astype(dtype)))
    used = {v for t in tables for v in t.vars}
    free = f.num_vars - len(used)
    result = pow(2, free, modulus) if modulus else 1 << free
    rest = eliminate(tables, used, mul, sum_out, "min-degree", width_bound)
    for t in rest:
        result *= int(t.arr)
        if modulus:
            result %= modulus
    return result % modulus if modulus else result


def count_auto(f: CnfFormula, modulus: int | None = None, bound: int = ENUMERATION_BOUND) -> int:
    """Enumerate when within ``bound``, otherwise eliminate variables."""
    if f.num_vars <= bound:
        c = count_sat(f, bound)
        return c % modulus if modulus else c
    return count_sat_elim(f, modulus)


# ------------------------------------------------------------------- profile


def var_degrees(f: CnfFormula) -> list[int]:
    """``out[i]`` is the number of clauses containing variable ``i + 1``."""
    deg = [0] * f.num_vars
    for c in f.clauses:
        for v in {abs(l) for l in c}:
            deg[v - 1] += 1
    return deg


def incidence_graph(f: CnfFormula) -> nx.Graph:
    """Bipartite graph with nodes ``('v', i)`` and ``('c', j)``."""
    g = nx.Graph()
    g.add_nodes_from(("v", i) for i in range(1, f.num_vars + 1))
    g.add_nodes_from(("c", j) for j in range(f.num_clauses))
    for j, c in enumerate(f.clauses):
        for l in c:
            g.add_edge(("v", abs(l)), ("c", j))
    return g


def primal_graph(f: CnfFormula) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(1, f.num_vars + 1))
    for c in f.clauses:
        vs = sorted({abs(l) for l in c})
        for i, a in enumerate(vs):
            for b in vs[i + 1:]:
                g.add_edge(a, b)
    return g


def is_incidence_planar(f: CnfFormula) -> bool:
    planar, _ = nx.check_planarity(incidence_graph(f))
    return bool(planar)


def profile(f: CnfFormula) -> FormulaProfile:
    """Structural summary; cached on the (immutable) formula."""
    cached = f.__dict__.get("_profile")
    if cached is not None:
        return cached
    result = _profile(f)
    object.__setattr__(f, "_profile", result)
    return result


def _profile(f: CnfFormula) -> FormulaProfile:
    lits = list(f.literals())
    deg = var_degrees(f)
    return FormulaProfile(
        max_clause_size=max((len(c) for c in f.clauses), default=0),
        monotone_positive=all(l > 0 for l in lits),
        monotone_negative=all(l < 0 for l in lits),
        max_var_degree=max(deg, default=0),
        primal_bipartite=nx.is_bipartite(primal_graph(f)),
        incidence_planar=is_incidence_planar(f),
    )

"""Seeded random instances for tests, demos and the ``gen`` command."""

from __future__ import annotations

import random

from .cyclo import CycloNumber
from .diagram import DiagramBuilder, ZhDiagram
from .formula import CnfFormula
from .perm import WeightedDigraph
from .zw import XsatInstance

__all__ = [
    "rng_for",
    "random_cnf",
    "random_monotone_2cnf",
    "random_xsat",
    "random_zh",
    "random_digraph",
    "random_matrix",
]


def rng_for(seed: int | random.Random | None) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(0 if seed is None else seed)


def _clause(rng: random.Random, n: int, size: int, monotone: bool = False) -> tuple[int, ...]:
    vs = rng.sample(range(1, n + 1), min(size, n))
    return tuple(v if monotone or rng.random() < 0.5 else -v for v in vs)


def random_cnf(seed, n: int, m: int, max_size: int = 3, min_size: int = 1) -> CnfFormula:
    """``n`` variables, ``m`` clauses of distinct variables with sizes in ``[min_size, max_size]``."""
    rng = rng_for(seed)
    if n == 0:
        return CnfFormula(0, ((),) * min(m, 1))
    cl = [_clause(rng, n, rng.randint(min_size, max_size)) for _ in range(m)]
    return CnfFormula(n, tuple(cl))


def random_monotone_2cnf(seed, n: int, m: int) -> CnfFormula:
    rng = rng_for(seed)
    n = max(n, 2)
    return CnfFormula(n, tuple(_clause(rng, n, 2, monotone=True) for _ in range(m)))


def random_xsat(seed, n: int, m: int, max_size: int = 3) -> XsatInstance:
    rng = rng_for(seed)
    cl = [_clause(rng, n, rng.randint(1, max_size)) for _ in range(m)] if n else []
    return XsatInstance(n, tuple(cl))


def random_zh(seed, k: int, nodes: int, extra_edges: int = 3) -> ZhDiagram:
    """Scalar ZH-diagram at level at most ``k`` with ``nodes`` generators."""
    rng = rng_for(seed)
    b = DiagramBuilder(k)
    half = 1 << k
    ids = []
    for _ in range(nodes):
        kind = rng.choice("ZXH")
        if kind == "Z":
            ids.append(b.z(rng.randrange(2 * half)))
        elif kind == "X":
            ids.append(b.x(rng.choice((0, half))))
        else:
            choice = rng.randrange(3)
            if choice == 0:
                label = CycloNumber.zero()
            elif choice == 1:
                label = CycloNumber.from_int(-1)
            else:
                label = CycloNumber.root_of_unity(rng.randrange(2 * half), k)
            ids.append(b.h(label))
    for _ in range(rng.randint(0, nodes + extra_edges)):
        b.connect(rng.choice(ids), rng.choice(ids))
    return b.freeze()


def random_digraph(seed, n: int, weights=(-1, 0, 1)) -> WeightedDigraph:
    rng = rng_for(seed)
    w = {}
    for i in range(n):
        for j in range(n):
            v = rng.choice(weights)
            if v:
                w[(i, j)] = v
    return WeightedDigraph(n, w)


def random_matrix(seed, n: int, weights=(-1, 0, 1)) -> list[list[int]]:
    rng = rng_for(seed)
    return [[rng.choice(weights) for _ in range(n)] for _ in range(n)]

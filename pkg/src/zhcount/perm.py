"""Monotone 2-CNF to the integer permanent via weighted cycle covers.

Each variable is a vertex with a weight-one self-loop (false) and a weight-one
thread through one input of every clause gadget it occurs in (true).  A
clause gadget is a 4-vertex weighted digraph whose completion sums are 4
whenever at least one input is threaded and 0 for the inconsistent stub
patterns, so ``perm(A) = 4**m * #f``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import BoundExceededError, FormatError, GadgetSelfTestError, PreconditionError
from .formula import CnfFormula

__all__ = [
    "ClauseGadget",
    "WeightedDigraph",
    "GADGET_CONDITIONS",
    "DEFAULT_GADGET",
    "completion_sums",
    "gadget_search",
    "default_gadget",
    "permanent_ryser",
    "permanent_naive",
    "cycle_covers",
    "cycle_cover_sum",
    "build_permanent_graph",
    "partial_cover_weights",
]

RYSER_BOUND = 24
COVER_BOUND = 12

# Required completion sums, keyed by the external stub pattern on the inputs.
GADGET_CONDITIONS = {
    "both": 4,  # both inputs threaded
    "first": 4,  # only input 1 threaded
    "second": 4,  # only input 2 threaded
    "none": 0,
    "cross12": 0,  # enter at input 1, leave at input 2
    "cross21": 0,
}


@dataclass(frozen=True)
class ClauseGadget:
    weights: tuple[tuple[int, ...], ...]
    inputs: tuple[int, int] = (0, 1)

    def __post_init__(self) -> None:
        w = tuple(tuple(int(x) for x in row) for row in self.weights)
        if len(w) != 4 or any(len(r) != 4 for r in w):
            raise PreconditionError("a clause gadget is a 4x4 matrix")
        a, b = self.inputs
        if a == b or not (0 <= a < 4 and 0 <= b < 4):
            raise PreconditionError("gadget inputs must be two distinct vertices")
        object.__setattr__(self, "weights", w)

    def to_json(self) -> dict:
        return {"weights": [list(r) for r in self.weights], "inputs": list(self.inputs)}


def _sub(a: Sequence[Sequence[int]], rows: Sequence[int], cols: Sequence[int]) -> list[list[int]]:
    return [[a[r][c] for c in cols] for r in rows]


def permanent_naive(a: Sequence[Sequence[int]]) -> int:
    """Sum over all permutations; an oracle for small matrices."""
    n = len(a)
    total = 0
    for p in itertools.permutations(range(n)):
        term = 1
        for i, j in enumerate(p):
            term *= a[i][j]
            if not term:
                break
        total += term
    return total


def completion_sums(g: ClauseGadget) -> dict[str, int]:
    """Weight of all internal completions for each external stub pattern."""
    a = g.weights
    i1, i2 = g.inputs
    rest = [v for v in range(4) if v not in (i1, i2)]
    allv = list(range(4))
    minus = lambda v: [u for u in allv if u != v]
    return {
        "both": permanent_naive(_sub(a, rest, rest)),
        "first": permanent_naive(_sub(a, minus(i1), minus(i1))),
        "second": permanent_naive(_sub(a, minus(i2), minus(i2))),
        "none": permanent_naive(a),
        # the path from input 1 to input 2 needs out-edges everywhere but i2
        "cross12": permanent_naive(_sub(a, minus(i2), minus(i1))),
        "cross21": permanent_naive(_sub(a, minus(i1), minus(i2))),
    }


def _batch_perm(m: np.ndarray) -> np.ndarray:
    """Ryser over a stack of small square integer matrices."""
    n = m.shape[-1]
    out = np.zeros(m.shape[:-2], dtype=np.int64)
    for mask in range(1, 1 << n):
        cols = [j for j in range(n) if mask >> j & 1]
        term = m[..., :, cols].sum(axis=-1).prod(axis=-1)
        out += term if (n - len(cols)) % 2 == 0 else -term
    return out


def _search(r: int) -> np.ndarray | None:
    vals = np.arange(-r, r + 1)
    grid = lambda k: np.stack(np.meshgrid(*([vals] * k), indexing="ij"), -1).reshape(-1, k)
    g4, g5 = grid(4), grid(5)
    cores = g4[g4[:, 0] * g4[:, 3] + g4[:, 1] * g4[:, 2] == 4]
    found = []
    for a22, a23, a32, a33 in cores:
        # e = (d, x, y, p, q): pivot diagonal d, row (x, y) into the core, column (p, q) out of it
        d, x, y, p, q = g5.T
        sub = d * (a22 * a33 + a23 * a32) + x * (p * a33 + a23 * q) + y * (p * a32 + a22 * q)
        ok = g5[sub == 4]
        if not len(ok):
            continue
        # input 2 block: a11, a12, a13, a21, a31; input 1 block: a00, a02, a03, a20, a30
        b = ok[:, None, :]
        c = ok[None, :, :]
        a11, a12, a13, a21, a31 = (b[..., i] for i in range(5))
        a00, a02, a03, a20, a30 = (c[..., i] for i in range(5))
        e_rest = a02 * (a21 * a33 + a23 * a31) + a03 * (a21 * a32 + a22 * a31)
        f_rest = a12 * (a20 * a33 + a23 * a30) + a13 * (a20 * a32 + a22 * a30)
        a01 = -e_rest // 4
        a10 = -f_rest // 4
        keep = (e_rest % 4 == 0) & (f_rest % 4 == 0) & (abs(a01) <= r) & (abs(a10) <= r)
        if not keep.any():
            continue
        ii, jj = np.nonzero(keep)
        z = lambda t: np.broadcast_to(t, keep.shape)[ii, jj]
        core = lambda v: np.full(len(ii), v)
        mats = np.stack(
            [
                z(a00), z(a01), z(a02), z(a03),
                z(a10), z(a11), z(a12), z(a13),
                z(a20), z(a21), core(a22), core(a23),
                z(a30), z(a31), core(a32), core(a33),
            ],
            -1,
        )
        mats = mats[_batch_perm(mats.reshape(-1, 4, 4)) == 0]
        if len(mats):
            found.append(mats)
    if not found:
        return None
    allm = np.concatenate(found)
    order = np.lexsort(allm.T[::-1])
    return allm[order[0]]


@lru_cache(maxsize=None)
def gadget_search(weight_range: int = 1) -> ClauseGadget:
    """Lexicographically first gadget (row-major, integer order) with inputs 0 and 1.

    The range is widened up to 3 when nothing exists at ``weight_range``.
    """
    if weight_range < 1:
        raise PreconditionError("weight_range must be at least 1")
    for r in range(weight_range, max(weight_range, 3) + 1):
        best = _search(r)
        if best is not None:
            g = ClauseGadget(tuple(tuple(int(v) for v in best[i * 4 : i * 4 + 4]) for i in range(4)))
            if completion_sums(g) != GADGET_CONDITIONS:
                raise GadgetSelfTestError("search returned a gadget violating the completion sums")
            return g
    raise GadgetSelfTestError("no clause gadget with weights in [-3, 3]")


# Result of gadget_search(1); weights in {-1, 0, 1} are impossible because the
# two non-input vertices alone must carry permanent 4.
DEFAULT_GADGET = ClauseGadget(
    ((-2, -2, -2, -1), (1, 0, -1, 2), (-2, -2, 2, 0), (-1, 1, 1, 2)),
)


@lru_cache(maxsize=None)
def default_gadget() -> ClauseGadget:
    if completion_sums(DEFAULT_GADGET) != GADGET_CONDITIONS:
        raise GadgetSelfTestError("embedded clause gadget fails its completion sums")
    return DEFAULT_GADGET


def permanent_ryser(a: Sequence[Sequence[int]], bound: int = RYSER_BOUND) -> int:
    """Ryser inclusion-exclusion, walking column subsets in Gray-code order."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise PreconditionError("matrix must be square")
    if n > bound:
        raise BoundExceededError(f"dimension {n} exceeds the permanent bound {bound}")
    if n == 0:
        return 1
    rows = [list(map(int, r)) for r in a]
    sums = [0] * n
    total = 0
    members = 0
    gray = 0
    for k in range(1, 1 << n):
        j = (k & -k).bit_length() - 1
        gray ^= 1 << j
        if gray >> j & 1:
            members += 1
            for i in range(n):
                sums[i] += rows[i][j]
        else:
            members -= 1
            for i in range(n):
                sums[i] -= rows[i][j]
        p = math.prod(sums)
        total += p if (n - members) % 2 == 0 else -p
    return total


@dataclass(frozen=True)
class WeightedDigraph:
    n: int
    weights: dict = field(default_factory=dict)  # (i, j) -> nonzero int
    variable_vertices: tuple[int, ...] = ()
    gadget_blocks: tuple[tuple[tuple[int, ...], tuple[int, int]], ...] = ()
    isolated: int = 0

    def __post_init__(self) -> None:
        clean = {}
        for (i, j), w in self.weights.items():
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise PreconditionError(f"edge ({i}, {j}) out of range")
            if w:
                clean[(int(i), int(j))] = int(w)
        object.__setattr__(self, "weights", clean)
        seen: set[int] = set(self.variable_vertices)
        for verts, _ in self.gadget_blocks:
            if seen & set(verts):
                raise PreconditionError("metadata blocks overlap")
            seen |= set(verts)

    def adjacency(self) -> list[list[int]]:
        a = [[0] * self.n for _ in range(self.n)]
        for (i, j), w in self.weights.items():
            a[i][j] = w
        return a

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "weights": [[i, j, w] for (i, j), w in sorted(self.weights.items())],
            "variable_vertices": list(self.variable_vertices),
            "gadget_blocks": [{"vertices": list(v), "inputs": list(inp)} for v, inp in self.gadget_blocks],
            "isolated": self.isolated,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "WeightedDigraph":
        try:
            return cls(
                int(obj["n"]),
                {(int(i), int(j)): int(w) for i, j, w in obj["weights"]},
                tuple(obj.get("variable_vertices", ())),
                tuple((tuple(b["vertices"]), tuple(b["inputs"])) for b in obj.get("gadget_blocks", ())),
                int(obj.get("isolated", 0)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"malformed graph JSON: {exc}") from exc

    @classmethod
    def loads(cls, text: str | bytes) -> "WeightedDigraph":
        try:
            return cls.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid graph JSON: {exc}") from exc


def cycle_covers(g: WeightedDigraph, bound: int = COVER_BOUND):
    """Yield ``(edges, weight)`` for every cycle cover, by direct cycle enumeration."""
    if g.n > bound:
        raise BoundExceededError(f"{g.n} vertices exceed the cycle-cover bound {bound}")
    succ: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for (i, j), w in g.weights.items():
        succ[i].append((j, w))

    def cycles_from(start: int, free: frozenset):
        # simple cycles through start using only vertices in free, start smallest
        stack = [(start, [], 1)]
        while stack:
            v, path, w = stack.pop()
            for u, wt in succ[v]:
                if u == start:
                    yield path + [(v, u)], w * wt
                elif u in free and u not in {e[1] for e in path}:
                    stack.append((u, path + [(v, u)], w * wt))

    def rec(free: frozenset):
        if not free:
            yield [], 1
            return
        v = min(free)
        rest = free - {v}
        for cyc, w in cycles_from(v, rest):
            used = {e[1] for e in cyc}
            for more, w2 in rec(rest - used):
                yield cyc + more, w * w2

    yield from rec(frozenset(range(g.n)))


def cycle_cover_sum(g: WeightedDigraph, bound: int = COVER_BOUND) -> int:
    return sum(w for _, w in cycle_covers(g, bound))


def build_permanent_graph(f: CnfFormula, gadget: ClauseGadget | None = None) -> WeightedDigraph:
    """Cycle-cover graph with ``perm = 4**m * #f / 2**isolated``.

    Variable ``i`` is vertex ``i - 1``; the ``j``-th two-literal clause
    occupies ``n + 4j`` to ``n + 4j + 3`` and its first literal uses input 1.
    A unit clause ``(x)`` removes the false self-loop of ``x``, so only
    covers threading ``x`` survive; ``m`` counts the two-literal clauses.
    """
    g = gadget or default_gadget()
    if any(l < 0 for c in f.clauses for l in c):
        raise PreconditionError("build_permanent_graph needs a monotone positive formula")
    if any(len(c) not in (1, 2) for c in f.clauses):
        raise PreconditionError("clauses must have one or two literals")
    pairs = [c for c in f.clauses if len(c) == 2]
    forced = {c[0] for c in f.clauses if len(c) == 1}
    n, m = f.num_vars, len(pairs)
    w: dict[tuple[int, int], int] = {}
    blocks = []
    for j in range(m):
        base = n + 4 * j
        for a in range(4):
            for b in range(4):
                if g.weights[a][b]:
                    w[(base + a, base + b)] = g.weights[a][b]
        others = [base + v for v in range(4) if v not in g.inputs]
        ins = (base + g.inputs[0], base + g.inputs[1])
        blocks.append((tuple([ins[0], ins[1]] + others), ins))
    isolated = 0
    for v in range(1, n + 1):
        stops = [blocks[j][1][c.index(v)] for j, c in enumerate(pairs) if v in c]
        if v not in forced:
            w[(v - 1, v - 1)] = 1
            if not stops:
                isolated += 1
                continue
        path = [v - 1] + stops + [v - 1]
        for a, b in zip(path, path[1:]):
            w[(a, b)] = 1
    return WeightedDigraph(n + 4 * m, w, tuple(range(n)), tuple(blocks), isolated)


def partial_cover_weights(g: WeightedDigraph, bound: int = COVER_BOUND) -> dict[frozenset, int]:
    """Total completion weight of each partial cover (edges outside gadgets)."""
    internal = set()
    for verts, _ in g.gadget_blocks:
        vs = set(verts)
        internal |= {e for e in g.weights if e[0] in vs and e[1] in vs}
    out: dict[frozenset, int] = {}
    for edges, wt in cycle_covers(g, bound):
        key = frozenset(e for e in edges if e not in internal)
        out[key] = out.get(key, 0) + wt
    return out

"""ZH- and ZW-diagrams and their exact contraction.

A diagram is an open tensor network of generator nodes.  Z-spiders are
copy tensors, so the contraction engine treats every connected group of
Z-spiders as a single summation index.  All other nodes become dense
factors.  Entries live in the cyclotomic ring of :mod:`zhcount.cyclo` and
the engine works on integer numerators with one shared power-of-two
denominator.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from ._elim import eliminate
from .cyclo import CycloNumber
from .errors import BoundExceededError, FormatError, PreconditionError

__all__ = [
    "Node",
    "Diagram",
    "ZhDiagram",
    "ZwDiagram",
    "DiagramBuilder",
    "Tensor",
    "TENSOR_BOUND",
    "node_tensor",
    "contract",
    "contract_int",
    "diagram_from_json",
    "diagram_to_json",
    "load_diagram",
]

TENSOR_BOUND = 20
_MINUS_ONE = CycloNumber.from_int(-1)


@dataclass(frozen=True)
class Node:
    """One generator.  ``phase`` is in units of pi/2**K for Z/X spiders."""

    id: int
    kind: str
    phase: int = 0
    label: CycloNumber | None = None


class Tensor:
    """Dense tensor whose entries are :class:`CycloNumber` values.

    ``data`` is an object array of shape ``(2,) * legs``.
    """

    __slots__ = ("data",)

    def __init__(self, data: np.ndarray):
        self.data = data

    @property
    def legs(self) -> int:
        return self.data.ndim

    def __getitem__(self, bits) -> CycloNumber:
        return self.data[tuple(bits)] if self.legs else self.data[()]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.data.shape == other.data.shape and all(
            a == b for a, b in zip(self.data.flat, other.data.flat)
        )

    def scaled(self, c: CycloNumber) -> "Tensor":
        return Tensor(np.vectorize(lambda x: x * c, otypes=[object])(self.data))

    def matrix(self) -> np.ndarray:
        """Reshape to (2**(legs//2), rest) for display and comparisons."""
        half = self.legs // 2
        return self.data.reshape(1 << half, -1) if self.legs else self.data.reshape(1, 1)

    def to_ints(self) -> np.ndarray:
        return np.vectorize(int, otypes=[object])(self.data)

    def __repr__(self) -> str:
        return f"Tensor(legs={self.legs})"

    @classmethod
    def from_entries(cls, values: Sequence, legs: int) -> "Tensor":
        arr = np.empty(1 << legs, dtype=object)
        for i, v in enumerate(values):
            arr[i] = v if isinstance(v, CycloNumber) else CycloNumber.from_int(int(v))
        return cls(arr.reshape((2,) * legs))


# ------------------------------------------------------------------ diagrams


class Diagram:
    """Immutable diagram.  Subclasses fix the allowed node kinds."""

    KINDS: frozenset[str] = frozenset()
    CALCULUS = ""

    __slots__ = ("ring_k", "nodes", "edges", "boundary", "_index")

    def __init__(
        self,
        ring_k: int,
        nodes: Iterable[Node],
        edges: Iterable[tuple[int, int]],
        boundary: Iterable[int] = (),
    ):
        self.ring_k = int(ring_k)
        if self.ring_k < 0:
            raise PreconditionError("ring order must be nonnegative")
        period = 1 << (self.ring_k + 1)
        ns = []
        for n in sorted(nodes, key=lambda n: n.id):
            if n.kind not in self.KINDS:
                raise PreconditionError(f"node {n.id}: kind {n.kind!r} not allowed in {self.CALCULUS}")
            if n.kind in "ZX":
                n = Node(n.id, n.kind, n.phase % period, None)
            elif n.kind == "H":
                n = Node(n.id, "H", 0, _MINUS_ONE if n.label is None else n.label)
            else:
                n = Node(n.id, n.kind)
            ns.append(n)
        self.nodes: tuple[Node, ...] = tuple(ns)
        self._index = {n.id: n for n in ns}
        if len(self._index) != len(ns):
            raise PreconditionError("duplicate node ids")
        es = []
        for a, b in edges:
            if a not in self._index or b not in self._index:
                raise PreconditionError(f"edge ({a}, {b}) references a missing node")
            es.append((min(a, b), max(a, b)))
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(es))
        self.boundary: tuple[int, ...] = tuple(boundary)
        for b in self.boundary:
            if b not in self._index:
                raise PreconditionError(f"boundary references missing node {b}")
        self._validate()

    def _validate(self) -> None:
        pass

    # -- queries ----------------------------------------------------------
    def node(self, nid: int) -> Node:
        return self._index[nid]

    def __contains__(self, nid: int) -> bool:
        return nid in self._index

    def arity(self, nid: int) -> int:
        a = sum((e[0] == nid) + (e[1] == nid) for e in self.edges)
        return a + sum(1 for b in self.boundary if b == nid)

    def neighbors(self, nid: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == nid:
                out.append(b)
            if b == nid:
                out.append(a)
        return out

    def is_scalar(self) -> bool:
        return not self.boundary

    def size(self) -> int:
        return len(self.nodes) + len(self.edges)

    def graph(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(n.id for n in self.nodes)
        g.add_edges_from(self.edges)
        return g

    def phase_value(self, n: Node) -> CycloNumber:
        return CycloNumber.root_of_unity(n.phase, self.ring_k)

    def with_ring(self, k: int) -> "Diagram":
        """Re-express phases at ring order ``k`` (must be representable)."""
        if k == self.ring_k:
            return self
        nodes = []
        for n in self.nodes:
            if n.kind in "ZX":
                if k > self.ring_k:
                    p = n.phase << (k - self.ring_k)
                else:
                    step = 1 << (self.ring_k - k)
                    if n.phase % step:
                        raise PreconditionError(f"phase of node {n.id} not representable at ring order {k}")
                    p = n.phase // step
                nodes.append(Node(n.id, n.kind, p))
            else:
                nodes.append(n)
        return type(self)(k, nodes, self.edges, self.boundary)

    def key(self) -> tuple:
        return (self.CALCULUS, self.ring_k, self.nodes, self.edges, self.boundary)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Diagram):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        kinds = {}
        for n in self.nodes:
            kinds[n.kind] = kinds.get(n.kind, 0) + 1
        return f"{type(self).__name__}(ring_k={self.ring_k}, nodes={kinds}, edges={len(self.edges)}, boundary={len(self.boundary)})"

    def builder(self) -> "DiagramBuilder":
        return DiagramBuilder.from_diagram(self)

    def isomorphic(self, other: "Diagram") -> bool:
        """Labelled isomorphism (kinds, phases, labels) ignoring node ids."""
        if self.boundary or other.boundary:
            raise PreconditionError("isomorphism check is defined for scalar diagrams")

        def g(d: Diagram) -> nx.MultiGraph:
            m = d.graph()
            for n in d.nodes:
                m.nodes[n.id]["t"] = (n.kind, n.phase, n.label)
            return m

        return nx.is_isomorphic(g(self), g(other), node_match=lambda a, b: a["t"] == b["t"])


class ZhDiagram(Diagram):
    KINDS = frozenset("ZXH")
    CALCULUS = "ZH"
    __slots__ = ()


class ZwDiagram(Diagram):
    KINDS = frozenset("ZW")
    CALCULUS = "ZW"
    __slots__ = ()

    def _validate(self) -> None:
        half = 1 << self.ring_k
        for n in self.nodes:
            if n.kind == "Z" and n.phase not in (0, half):
                raise PreconditionError(f"ZW Z-spider {n.id} must have phase 0 or pi")


class DiagramBuilder:
    """Mutable scratch space for constructing and rewriting diagrams."""

    def __init__(self, ring_k: int = 0, calculus: str = "ZH"):
        self.ring_k = ring_k
        self.calculus = calculus
        self.nodes: dict[int, Node] = {}
        self.edges: dict[int, tuple[int, int]] = {}
        self.inc: dict[int, list[int]] = {}
        self.boundary: list[int] = []
        self._next_node = 0
        self._next_edge = 0

    @classmethod
    def from_diagram(cls, d: Diagram) -> "DiagramBuilder":
        b = cls(d.ring_k, d.CALCULUS)
        for n in d.nodes:
            b.nodes[n.id] = n
            b.inc[n.id] = []
        b._next_node = max((n.id for n in d.nodes), default=-1) + 1
        for a, c in d.edges:
            b.connect(a, c)
        b.boundary = list(d.boundary)
        return b

    # -- nodes ------------------------------------------------------------
    def add(self, kind: str, phase: int = 0, label: CycloNumber | None = None) -> int:
        nid = self._next_node
        self._next_node += 1
        if kind == "H" and label is None:
            label = _MINUS_ONE
        self.nodes[nid] = Node(nid, kind, phase, label)
        self.inc[nid] = []
        return nid

    def z(self, phase: int = 0) -> int:
        return self.add("Z", phase)

    def x(self, phase: int = 0) -> int:
        return self.add("X", phase)

    def h(self, label: CycloNumber | int | None = None) -> int:
        if isinstance(label, int):
            label = CycloNumber.from_int(label)
        return self.add("H", label=label)

    def w(self) -> int:
        return self.add("W")

    def set_node(self, nid: int, kind: str, phase: int = 0, label: CycloNumber | None = None) -> None:
        self.nodes[nid] = Node(nid, kind, phase, label)

    def remove(self, nid: int) -> None:
        for eid in list(self.inc[nid]):
            self.disconnect(eid)
        del self.nodes[nid]
        del self.inc[nid]
        self.boundary = [b for b in self.boundary if b != nid]

    # -- edges ------------------------------------------------------------
    def connect(self, a: int, b: int) -> int:
        eid = self._next_edge
        self._next_edge += 1
        self.edges[eid] = (a, b)
        self.inc[a].append(eid)
        self.inc[b].append(eid)
        return eid

    def disconnect(self, eid: int) -> None:
        a, b = self.edges.pop(eid)
        self.inc[a].remove(eid)
        self.inc[b].remove(eid)

    def other(self, eid: int, nid: int) -> int:
        a, b = self.edges[eid]
        return b if a == nid else a

    def neighbors(self, nid: int) -> list[int]:
        return [self.other(e, nid) for e in self.inc[nid]]

    def degree(self, nid: int) -> int:
        return len(self.inc[nid]) + self.boundary.count(nid)

    def insert_on_edge(self, eid: int, kind: str, phase: int = 0, label: CycloNumber | None = None) -> int:
        """Subdivide an edge with a new 2-leg node."""
        a, b = self.edges[eid]
        self.disconnect(eid)
        m = self.add(kind, phase, label)
        self.connect(a, m)
        self.connect(m, b)
        return m

    def ids_of_kind(self, kind: str) -> list[int]:
        return sorted(n for n, node in self.nodes.items() if node.kind == kind)

    def freeze(self):
        cls = ZwDiagram if self.calculus == "ZW" else ZhDiagram
        return cls(self.ring_k, self.nodes.values(), self.edges.values(), self.boundary)


# ------------------------------------------------------------ node tensors


def node_tensor(
    kind: str,
    arity: int,
    phase: int = 0,
    label: CycloNumber | int | None = None,
    ring_k: int = 0,
    bound: int = TENSOR_BOUND,
) -> Tensor:
    """Dense tensor of a generator with ``arity`` legs.

    ``phase`` is in units of pi/2**ring_k.  H-box labels default to -1.
    """
    if arity < 0:
        raise PreconditionError("arity must be nonnegative")
    if arity > bound:
        raise BoundExceededError(f"arity {arity} exceeds tensor bound {bound}")
    one = CycloNumber.one()
    zero = CycloNumber.zero()
    if kind == "Z":
        e = CycloNumber.root_of_unity(phase, ring_k)
        if arity == 0:
            return Tensor(np.array(one + e, dtype=object))
        vals = [zero] * (1 << arity)
        vals[0] = one
        vals[-1] = e
        return Tensor.from_entries(vals, arity)
    if kind == "X":
        e = CycloNumber.root_of_unity(phase, ring_k)
        norm = CycloNumber.pow_sqrt2(-arity)
        vals = []
        for x in range(1 << arity):
            s = e if bin(x).count("1") % 2 == 0 else -e
            vals.append((one + s) * norm)
        return Tensor.from_entries(vals, arity)
    if kind == "H":
        a = _MINUS_ONE if label is None else (label if isinstance(label, CycloNumber) else CycloNumber.from_int(label))
        vals = [one] * (1 << arity)
        vals[-1] = a
        return Tensor.from_entries(vals, arity)
    if kind == "W":
        vals = [one if bin(x).count("1") == 1 else zero for x in range(1 << arity)]
        return Tensor.from_entries(vals, arity)
    raise PreconditionError(f"unknown node kind {kind!r}")


# -------------------------------------------------------------- contraction


def _pack(entries: Iterable[CycloNumber], shape: tuple[int, ...], k: int) -> tuple[np.ndarray, int]:
    """Numerator array of shape ``shape + (2**k,)`` and shared denominator."""
    entries = list(entries)
    d = max((e.denom_exp for e in entries), default=0)
    n = 1 << k
    out = np.empty((len(entries), n), dtype=object)
    for i, e in enumerate(entries):
        cs = e.coeffs_at(k)
        sh = d - e.denom_exp
        for j in range(n):
            out[i, j] = cs[j] << sh
    return out.reshape(shape + (n,)), d


def _toeplitz(b: np.ndarray) -> np.ndarray:
    """Multiplication-by-b matrices on the ring axis (last axis)."""
    n = b.shape[-1]
    i = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    idx = (j - i) % n
    sign = np.where(j < i, -1, 1).astype(object)
    return b[..., idx] * sign


def _letters(n: int) -> list[str]:
    alphabet = "abcdefghijklmnopqrstuvwxABCDEFGHIJKLMNOPQRSTUVWX"
    if n > len(alphabet):
        raise BoundExceededError("too many simultaneous indices")
    return list(alphabet[:n])


class _Factor:
    __slots__ = ("vars", "num")

    def __init__(self, vars_: tuple[int, ...], num: np.ndarray):
        self.vars = vars_
        self.num = num


def _mul(f: _Factor, g: _Factor, ring: int, modulus: int | None) -> _Factor:
    union = sorted(set(f.vars) | set(g.vars))
    lt = dict(zip(union, _letters(len(union))))
    sa = "".join(lt[v] for v in f.vars)
    sb = "".join(lt[v] for v in g.vars)
    so = "".join(lt[v] for v in union)
    if ring == 1:
        out = np.einsum(f"{sa}y,{sb}y->{so}y", f.num, g.num)
    else:
        out = np.einsum(f"{sa}Y,{sb}YZ->{so}Z", f.num, _toeplitz(g.num))
    if modulus is not None:
        out = out % modulus
    return _Factor(tuple(union), out)


def _build_network(d: Diagram, bound: int):
    """Translate a diagram into (factors, output vars, denominator, ring order)."""
    parent = {n.id: n.id for n in d.nodes if n.kind == "Z"}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in d.edges:
        if a in parent and b in parent:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

    # per-node entries first, to fix the working ring order
    group_phase: dict[int, int] = {}
    for n in d.nodes:
        if n.kind == "Z":
            r = find(n.id)
            group_phase[r] = group_phase.get(r, 0) + n.phase

    var_of_group = {}
    next_var = 0
    for r in sorted(group_phase):
        var_of_group[r] = next_var
        next_var += 1

    legs: dict[int, list[int]] = {n.id: [] for n in d.nodes if n.kind != "Z"}
    for a, b in d.edges:
        za, zb = a in parent, b in parent
        if za and zb:
            continue
        if za or zb:
            z, o = (a, b) if za else (b, a)
            legs[o].append(var_of_group[find(z)])
        else:
            v = next_var
            next_var += 1
            legs[a].append(v)
            legs[b].append(v)
    outputs = []
    for bnode in d.boundary:
        if bnode in parent:
            outputs.append(var_of_group[find(bnode)])
        else:
            v = next_var
            next_var += 1
            legs[bnode].append(v)
            outputs.append(v)

    entries: list[tuple[tuple[int, ...], list[CycloNumber], tuple[int, ...]]] = []
    k_eff = 0
    for r, p in group_phase.items():
        e = CycloNumber.root_of_unity(p, d.ring_k)
        vals = [CycloNumber.one(), e]
        entries.append(((var_of_group[r],), vals, (2,)))
        k_eff = max(k_eff, e.ring_k)
    for n in d.nodes:
        if n.kind == "Z":
            continue
        lv = legs[n.id]
        t = node_tensor(n.kind, len(lv), n.phase, n.label, d.ring_k, bound=max(bound, len(lv)))
        uniq = sorted(set(lv))
        if len(uniq) > bound:
            raise BoundExceededError(f"node {n.id} has {len(uniq)} distinct legs, bound {bound}")
        if len(uniq) != len(lv):
            data = t.data
            lt = dict(zip(uniq, _letters(len(uniq))))
            data = np.einsum("".join(lt[v] for v in lv) + "->" + "".join(lt[v] for v in uniq), data)
            vals = list(data.flat) if uniq else [data[()]]
        else:
            order = np.argsort(lv)
            data = np.transpose(t.data, order) if lv else t.data
            vals = list(data.flat) if lv else [data[()]]
        vals = [v if isinstance(v, CycloNumber) else CycloNumber.from_int(int(v)) for v in vals]
        k_eff = max([k_eff] + [v.ring_k for v in vals])
        entries.append((tuple(uniq), vals, (2,) * len(uniq)))

    factors = []
    denom = 0
    for vs, vals, shape in entries:
        num, dd = _pack(vals, shape, k_eff)
        denom += dd
        factors.append(_Factor(vs, num))
    return factors, outputs, next_var, denom, k_eff


def _eliminate(
    factors: list[_Factor],
    nvars: int,
    keep: set[int],
    ring: int,
    order: str | Sequence[int],
    bound: int,
    modulus: int | None,
) -> list[_Factor]:
    present = {v for f in factors for v in f.vars}
    todo = [v for v in range(nvars) if v not in keep]
    # summed indices that touch no factor contribute a factor 2 each
    free = sum(1 for v in todo if v not in present)
    factors = list(factors)
    if free:
        two = np.zeros((ring,), dtype=object)
        two[0] = 2**free
        factors.append(_Factor((), two))

    def sum_out(f: _Factor, v: int) -> _Factor:
        ax = f.vars.index(v)
        num = f.num.sum(axis=ax)
        if modulus is not None:
            num = num % modulus
        return _Factor(f.vars[:ax] + f.vars[ax + 1:], num)

    return eliminate(
        factors,
        [v for v in todo if v in present],
        lambda a, b: _mul(a, b, ring, modulus),
        sum_out,
        order,
        bound,
    )


def _finish(factors: list[_Factor], outputs: list[int], ring: int, modulus: int | None) -> tuple[list[int], np.ndarray]:
    acc = _Factor((), np.array([1] + [0] * (ring - 1), dtype=object))
    for f in factors:
        acc = _mul(acc, f, ring, modulus)
    uniq = list(acc.vars)
    if not outputs:
        return uniq, acc.num
    n_out = len(outputs)
    out = np.zeros((2,) * n_out + (ring,), dtype=object)
    for bits in itertools.product((0, 1), repeat=n_out):
        val = {}
        ok = True
        for v, b in zip(outputs, bits):
            if val.setdefault(v, b) != b:
                ok = False
                break
        if ok:
            out[bits] = acc.num[tuple(val[v] for v in uniq)]
    return uniq, out


def contract(
    d: Diagram,
    order: str | Sequence[int] = "min-degree",
    bound: int = TENSOR_BOUND,
):
    """Exact tensor of a diagram.

    Returns a :class:`CycloNumber` for scalar diagrams and a
    :class:`Tensor` with legs in boundary order otherwise.

    ``order`` is ``"min-degree"`` (greedy, lowest index on ties),
    ``"sequential"`` (highest index first, ignoring degree) or an explicit
    sequence of internal index ids.
    """
    factors, outputs, nvars, denom, k = _build_network(d, bound)
    ring = 1 << k
    factors = _eliminate(factors, nvars, set(outputs), ring, order, bound, None)
    _, num = _finish(factors, outputs, ring, None)
    if not outputs:
        return CycloNumber(list(num), denom, k)
    flat = num.reshape(-1, ring)
    vals = [CycloNumber(list(row), denom, k) for row in flat]
    return Tensor.from_entries(vals, len(outputs))


def contract_int(d: Diagram, modulus: int | None = None, bound: int = TENSOR_BOUND):
    """Contract a diagram whose entries are all integers, optionally mod ``modulus``.

    Returns a Python int for scalar diagrams, else an object array of ints.
    """
    factors, outputs, nvars, denom, k = _build_network(d, bound)
    if k != 0 or denom != 0:
        raise PreconditionError("contract_int needs an integer-valued network")
    for f in factors:
        if modulus is not None:
            f.num = f.num % modulus
    factors = _eliminate(factors, nvars, set(outputs), 1, "min-degree", bound, modulus)
    _, num = _finish(factors, outputs, 1, modulus)
    num = num[..., 0]
    if not outputs:
        v = int(num[()])
        return v % modulus if modulus else v
    return num


# ---------------------------------------------------------------------- JSON


def diagram_to_json(d: Diagram) -> dict:
    nodes = []
    for n in d.nodes:
        obj: dict = {"id": n.id, "kind": n.kind}
        if n.kind in "ZX":
            obj["phase_num"] = n.phase
        elif n.kind == "H":
            k = max(d.ring_k, n.label.ring_k)
            if k != d.ring_k:
                raise PreconditionError(f"label of H-box {n.id} needs ring order {k} > {d.ring_k}")
            obj["label"] = {"coeffs": n.label.coeffs_at(d.ring_k), "denom_exp": n.label.denom_exp}
        nodes.append(obj)
    return {
        "ring_k": d.ring_k,
        "nodes": nodes,
        "edges": [list(e) for e in d.edges],
        "boundary": list(d.boundary),
    }


_TOP = {"ring_k", "nodes", "edges", "boundary"}
_NODE = {"id", "kind", "phase_num", "label"}


def diagram_from_json(obj: dict, calculus: str = "ZH") -> Diagram:
    if not isinstance(obj, dict):
        raise FormatError("diagram JSON must be an object")
    extra = set(obj) - _TOP
    if extra:
        raise FormatError(f"unknown diagram fields: {sorted(extra)}")
    for key in ("ring_k", "nodes", "edges"):
        if key not in obj:
            raise FormatError(f"missing field {key!r}")
    k = obj["ring_k"]
    if not isinstance(k, int) or k < 0:
        raise FormatError("ring_k must be a nonnegative integer")
    nodes = []
    for raw in obj["nodes"]:
        extra = set(raw) - _NODE
        if extra:
            raise FormatError(f"unknown node fields: {sorted(extra)}")
        kind = raw.get("kind")
        nid = raw.get("id")
        if not isinstance(nid, int):
            raise FormatError("node id must be an integer")
        if kind in ("Z", "X"):
            if "label" in raw:
                raise FormatError(f"node {nid}: spiders carry no label")
            nodes.append(Node(nid, kind, int(raw.get("phase_num", 0))))
        elif kind == "H":
            if "phase_num" in raw:
                raise FormatError(f"node {nid}: H-boxes carry no phase")
            lab = raw.get("label")
            if lab is None:
                label = None
            else:
                if set(lab) - {"coeffs", "denom_exp"}:
                    raise FormatError(f"node {nid}: unknown label fields")
                if len(lab["coeffs"]) != 1 << k:
                    raise FormatError(f"node {nid}: label needs {1 << k} coefficients")
                label = CycloNumber(lab["coeffs"], int(lab.get("denom_exp", 0)), k)
            nodes.append(Node(nid, "H", 0, label))
        elif kind == "W":
            if "phase_num" in raw or "label" in raw:
                raise FormatError(f"node {nid}: W-spiders carry no parameters")
            nodes.append(Node(nid, "W"))
        else:
            raise FormatError(f"node {nid}: unknown kind {kind!r}")
    edges = []
    for e in obj["edges"]:
        if not isinstance(e, list) or len(e) != 2:
            raise FormatError(f"bad edge {e!r}")
        edges.append((int(e[0]), int(e[1])))
    cls = ZwDiagram if calculus == "ZW" else ZhDiagram
    try:
        return cls(k, nodes, edges, obj.get("boundary", []))
    except PreconditionError as exc:
        raise FormatError(str(exc)) from exc


def load_diagram(text: str | bytes, calculus: str = "ZH") -> Diagram:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    return diagram_from_json(obj, calculus)

"""Evaluate scalar ZH-diagrams by counting satisfying assignments.

A diagram whose phases are multiples of pi (level 0) is rewritten into a
SAT-form diagram carrying at most one pi-phase Z-spider.  Splitting that
spider gives ``D = c * (#f1 - #f2)``.  A diagram at level ``k`` is first
lowered: every odd multiple of pi/2**k becomes a one-legged ``H(a)``
state with ``a = exp(i pi / 2**k)``.  The states are folded into one,
and splitting that one gives ``D = c * (D1 + a * D2)`` with both parts
at level ``k - 1``.

Every rewrite is exact, and each scalar it introduces is multiplied into
an explicit running factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .cyclo import CycloNumber
from .diagram import DiagramBuilder, ZhDiagram, node_tensor
from .encode import zh_to_cnf
from .errors import PreconditionError
from .formula import CnfFormula, count_auto, emit_dimacs

__all__ = [
    "FragmentLevel",
    "NOT_IN_FRAGMENT",
    "SignedSatCert",
    "fragment_of",
    "zhpi_to_3sat",
    "lower_fragment",
    "eval_via_counting",
]

_ZERO = CycloNumber.zero()
_ONE = CycloNumber.one()
_MINUS_ONE = CycloNumber.from_int(-1)


@dataclass(frozen=True)
class FragmentLevel:
    """Smallest ``k`` with every phase a multiple of pi/2**k; ``None`` if outside all levels."""

    k: int | None

    @property
    def in_fragment(self) -> bool:
        return self.k is not None

    def __str__(self) -> str:
        return f"k={self.k}" if self.k is not None else "not in fragment"


NOT_IN_FRAGMENT = FragmentLevel(None)


def _v2(x: int) -> int:
    return (x & -x).bit_length() - 1


def _phase_level(p: int, ring_k: int) -> int:
    return 0 if p == 0 else max(0, ring_k - _v2(p))


def _root_exponent(label: CycloNumber) -> tuple[int, int] | None:
    """``(j, K)`` with ``label = exp(i pi j / 2**K)``, or None if not a root of unity."""
    if label.denom_exp != 0:
        return None
    nz = [(i, c) for i, c in enumerate(label.coeffs) if c]
    if len(nz) != 1 or abs(nz[0][1]) != 1:
        return None
    k = label.ring_k
    i, c = nz[0]
    j = i if c == 1 else i + (1 << k)
    return j, k


def fragment_of(d: ZhDiagram) -> FragmentLevel:
    half = 1 << d.ring_k
    level = 0
    for n in d.nodes:
        if n.kind == "Z":
            level = max(level, _phase_level(n.phase, d.ring_k))
        elif n.kind == "X":
            if n.phase not in (0, half):
                return NOT_IN_FRAGMENT
        elif n.kind == "H":
            if n.label.is_zero():
                continue
            r = _root_exponent(n.label)
            if r is None:
                return NOT_IN_FRAGMENT
            level = max(level, _phase_level(r[0] % (2 << r[1]), r[1]))
        else:
            return NOT_IN_FRAGMENT
    return FragmentLevel(level)


# ------------------------------------------------------- builder rewrites


def _scalar_value(b: DiagramBuilder, nid: int) -> CycloNumber:
    n = b.nodes[nid]
    return node_tensor(n.kind, 0, n.phase, n.label, b.ring_k)[()]


def _take_scalars(b: DiagramBuilder) -> CycloNumber:
    """Remove every node without legs and return the product of their values."""
    c = _ONE
    for nid in [n for n in b.nodes if b.degree(n) == 0]:
        c = c * _scalar_value(b, nid)
        b.remove(nid)
    return c


def _separate_non_z(b: DiagramBuilder) -> None:
    """Put an identity Z-spider on every wire whose ends are both non-Z."""
    for eid, (u, v) in list(b.edges.items()):
        if b.nodes[u].kind != "Z" and b.nodes[v].kind != "Z":
            b.insert_on_edge(eid, "Z")


def _fuse_z(b: DiagramBuilder) -> None:
    """Merge each connected group of Z-spiders into one spider (phases add)."""
    period = 2 << b.ring_k
    zs = [n for n, node in b.nodes.items() if node.kind == "Z"]
    parent = {z: z for z in zs}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in b.edges.values():
        if u in parent and v in parent:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
    phase: dict[int, int] = {}
    for z in zs:
        r = find(z)
        phase[r] = phase.get(r, 0) + b.nodes[z].phase
    for eid, (u, v) in list(b.edges.items()):
        if u in parent and v in parent:
            b.disconnect(eid)
    for z in zs:
        r = find(z)
        if z != r:
            for o in b.neighbors(z):
                b.connect(r, o)
            b.remove(z)
    for r, p in phase.items():
        b.set_node(r, "Z", p % period)


class _Clauses:
    """Emit SAT-form clauses: H(0) boxes, with a NOT marker on positive literals."""

    def __init__(self, b: DiagramBuilder):
        self.b = b
        self.markers: set[int] = set()

    def add(self, lits: list[tuple[int, bool]]) -> None:
        b = self.b
        while len(lits) > 3:
            # y <-> (l1 or l2), exactly determined by its inputs
            y = b.z()
            l1, l2 = lits[0], lits[1]
            self._emit([(y, False), l1, l2])
            self._emit([(y, True), (l1[0], not l1[1])])
            self._emit([(y, True), (l2[0], not l2[1])])
            lits = [(y, True)] + lits[2:]
        self._emit(lits)

    def _emit(self, lits: list[tuple[int, bool]]) -> None:
        b = self.b
        h = b.h(_ZERO)
        for z, positive in lits:
            if positive:
                x = b.x(1 << b.ring_k)
                self.markers.add(x)
                b.connect(z, x)
                b.connect(x, h)
            else:
                b.connect(z, h)

    def and_gate(self, legs: list[int]) -> int:
        """Fresh Z-spider ``t`` constrained to equal the AND of ``legs``."""
        t = self.b.z()
        for a in legs:
            self.add([(t, False), (a, True)])
        self.add([(t, True)] + [(a, False) for a in legs])
        return t

    def xor3_even(self, a: int, bb: int, c: int) -> None:
        for pattern in ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)):
            self.add([(z, not bit) for z, bit in zip((a, bb, c), pattern)])


def _drop_tautologies(b: DiagramBuilder, markers: set[int]) -> None:
    for h in b.ids_of_kind("H"):
        pos, neg = set(), set()
        for o in b.neighbors(h):
            if o in markers:
                pos.update(z for z in b.neighbors(o) if z != h)
            else:
                neg.add(o)
        if pos & neg:
            for o in b.neighbors(h):
                if o in markers:
                    b.remove(o)
            b.remove(h)


@dataclass(frozen=True)
class SignedSatCert:
    """``value = c * (#f1 - #f2)``."""

    c: CycloNumber
    f1: CnfFormula
    f2: CnfFormula

    def value(self, count: Callable[[CnfFormula], int] | None = None) -> CycloNumber:
        count = count or count_auto
        return self.c * (count(self.f1) - count(self.f2))

    def to_json(self) -> dict:
        return {
            "c": self.c.to_json(),
            "f1": emit_dimacs(self.f1).decode(),
            "f2": emit_dimacs(self.f2).decode(),
        }


def _require_scalar(d: ZhDiagram) -> None:
    if d.boundary:
        raise PreconditionError("diagram must be scalar (no boundary legs)")


def zhpi_to_3sat(d: ZhDiagram) -> SignedSatCert:
    """Signed pair of 3-CNFs for a scalar diagram whose phases are multiples of pi."""
    _require_scalar(d)
    lvl = fragment_of(d)
    if lvl.k != 0:
        raise PreconditionError(f"zhpi_to_3sat needs a level-0 diagram, got {lvl}")
    b = d.builder()
    half = 1 << b.ring_k
    cl = _Clauses(b)
    _separate_non_z(b)
    _fuse_z(b)

    # H-boxes become clauses; a -1 box is an AND gate with a pi phase on its output
    for h in b.ids_of_kind("H"):
        label = b.nodes[h].label
        legs = b.neighbors(h)
        if not legs:
            continue
        if label == _ONE:
            b.remove(h)
        elif label.is_zero():
            if len(legs) > 3:
                b.remove(h)
                cl.add([(z, False) for z in legs])
        elif label == _MINUS_ONE:
            b.remove(h)
            if len(legs) == 1:
                b.connect(legs[0], b.z(half))
            else:
                t = cl.and_gate(legs)
                b.set_node(t, "Z", half)
        else:
            raise PreconditionError(f"H-box label {label} is outside level 0")

    c = _take_scalars(b)

    # all pi phases collapse onto one spider S = XOR of the pi-phase variables
    pis = [z for z in b.ids_of_kind("Z") if b.nodes[z].phase == half]
    if len(pis) >= 2:
        x = b.x(0)
        for z in pis:
            b.set_node(z, "Z", 0)
            b.connect(z, x)
        s = b.z(half)
        b.connect(x, s)
        c = c * CycloNumber.pow_sqrt2(len(pis) - 1)

    # X-spiders: a pi phase moves onto a one-legged leaf, long spiders unfuse
    for x in b.ids_of_kind("X"):
        if x in cl.markers:
            continue
        legs = b.neighbors(x)
        node = b.nodes[x]
        if len(legs) >= 2 and node.phase == half:
            b.set_node(x, "X", 0)
            z = b.z()
            b.connect(x, z)
            b.connect(z, b.x(half))
    for x in b.ids_of_kind("X"):
        if x in cl.markers:
            continue
        legs = b.neighbors(x)
        if len(legs) == 2:
            b.remove(x)
            if legs[0] != legs[1]:
                b.connect(legs[0], legs[1])
        elif len(legs) >= 3:
            b.remove(x)
            prev = legs[0]
            for l in legs[1:-2]:
                m = b.z()
                cl.xor3_even(prev, l, m)
                prev = m
            cl.xor3_even(prev, legs[-2], legs[-1])
            c = c * CycloNumber.pow_sqrt2(-(len(legs) - 2))
    for x in b.ids_of_kind("X"):
        if x in cl.markers or b.degree(x) != 1:
            continue
        z = b.neighbors(x)[0]
        positive = b.nodes[x].phase == half
        b.remove(x)
        cl.add([(z, positive)])
        c = c * CycloNumber.sqrt2()

    _fuse_z(b)
    _drop_tautologies(b, cl.markers)
    c = c * _take_scalars(b)

    pis = [z for z in b.ids_of_kind("Z") if b.nodes[z].phase == half]
    if len(pis) > 1:
        raise AssertionError("more than one pi-phase spider survived")
    if not pis:
        return SignedSatCert(c, zh_to_cnf(b.freeze()), CnfFormula(0, ((),)))
    s = pis[0]
    b.set_node(s, "Z", 0)
    b2 = DiagramBuilder.from_diagram(b.freeze())
    for bb, value in ((b, False), (b2, True)):
        cc = _Clauses(bb)
        cc.add([(s, value)])
    return SignedSatCert(c, zh_to_cnf(b.freeze()), zh_to_cnf(b2.freeze()))


def _zero_diagram(ring_k: int) -> ZhDiagram:
    b = DiagramBuilder(ring_k)
    b.z(1 << ring_k)
    return b.freeze()


def lower_fragment(d: ZhDiagram) -> tuple[CycloNumber, CycloNumber, ZhDiagram, ZhDiagram]:
    """``(c, a, d1, d2)`` with ``d = c * (d1 + a * d2)`` and both parts one level lower."""
    _require_scalar(d)
    lvl = fragment_of(d)
    if not lvl.in_fragment:
        raise PreconditionError("diagram is not in any fragment")
    k = lvl.k
    if k == 0:
        raise PreconditionError("diagram is already at level 0")
    if d.ring_k < k:  # an H label is finer than the spider phases
        d = d.with_ring(k)
    big = d.ring_k
    unit = 1 << (big - k)  # pi / 2**k in phase units
    a = CycloNumber.root_of_unity(1, k)
    a2 = a * a

    def odd_label(n) -> int | None:
        if n.kind != "H" or n.label.is_zero():
            return None
        j, lk = _root_exponent(n.label)
        j = j << (k - lk) if lk <= k else j >> (lk - k)
        return j if j % 2 else None

    if not any(
        (n.kind == "Z" and (n.phase // unit) % 2) or odd_label(n) is not None for n in d.nodes
    ):
        return _ONE, a, d.with_ring(k - 1), _zero_diagram(k - 1)

    b = d.builder()
    cl = _Clauses(b)
    _separate_non_z(b)
    c = _take_scalars(b)
    states: list[int] = []

    def add_state(z: int) -> None:
        h = b.h(a)
        b.connect(z, h)
        states.append(h)

    for z in b.ids_of_kind("Z"):
        p = b.nodes[z].phase
        if (p // unit) % 2:
            b.set_node(z, "Z", p - unit)
            add_state(z)
    for h in b.ids_of_kind("H"):
        if h in states:
            continue
        j = odd_label(b.nodes[h])
        if j is None:
            continue
        legs = b.neighbors(h)
        b.remove(h)
        t = legs[0] if len(legs) == 1 else cl.and_gate(legs)
        rest = CycloNumber.root_of_unity(j - 1, k)
        if rest != _ONE:
            b.connect(t, b.h(rest))
        add_state(t)

    # fold pairs: a^t1 a^t2 = sum_u [u = t1 xor t2] a^u (a^2)^(t1 and t2)
    while len(states) > 1:
        h1, h2 = states.pop(), states.pop()
        t1, t2 = b.neighbors(h1)[0], b.neighbors(h2)[0]
        b.remove(h1)
        b.remove(h2)
        u = b.z()
        x = b.x(0)
        for z in (t1, t2, u):
            b.connect(z, x)
        sq = b.h(a2)
        b.connect(t1, sq)
        b.connect(t2, sq)
        c = c * CycloNumber.sqrt2()
        add_state(u)
    c = c * _take_scalars(b)
    if not states:  # the only odd phases sat on legless nodes
        return c, a, b.freeze().with_ring(k - 1), _zero_diagram(k - 1)

    last = states[0]
    b.set_node(last, "H", 0, _ZERO)
    b2 = DiagramBuilder.from_diagram(b.freeze())
    eid = b2.inc[last][0]
    b2.insert_on_edge(eid, "X", 1 << big)
    return c, a, b.freeze().with_ring(k - 1), b2.freeze().with_ring(k - 1)


def eval_via_counting(
    d: ZhDiagram,
    max_level: int = 4,
    count: Callable[[CnfFormula], int] | None = None,
) -> CycloNumber:
    """Exact value of a scalar diagram, by lowering then counting."""
    _require_scalar(d)
    lvl = fragment_of(d)
    if not lvl.in_fragment:
        raise PreconditionError("diagram is not in any fragment")
    if lvl.k > max_level:
        raise PreconditionError(f"level {lvl.k} exceeds the recursion limit {max_level}")
    if lvl.k == 0:
        return zhpi_to_3sat(d).value(count)
    c, a, d1, d2 = lower_fragment(d)
    return c * (eval_via_counting(d1, max_level, count) + a * eval_via_counting(d2, max_level, count))

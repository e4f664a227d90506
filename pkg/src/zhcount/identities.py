"""Small diagram identities used by the rewrites, checked by contraction.

Each fixture is a pair of open diagrams with the same boundary and a scalar
``s`` such that ``tensor(lhs) == s * tensor(rhs)`` holds exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .cyclo import CycloNumber
from .diagram import Diagram, DiagramBuilder, Tensor, contract

__all__ = ["Identity", "identities", "check_identity"]


@dataclass(frozen=True)
class Identity:
    name: str
    lhs: Diagram
    rhs: Diagram
    scalar: CycloNumber

    @property
    def legs(self) -> int:
        return len(self.lhs.boundary)


def check_identity(ident: Identity) -> bool:
    left = contract(ident.lhs)
    right = contract(ident.rhs)
    if isinstance(left, Tensor):
        return left == right.scaled(ident.scalar)
    return left == right * ident.scalar


def _swap() -> Identity:
    b = DiagramBuilder(0)
    p, q = b.z(), b.z()
    b.boundary = [p, q, q, p]
    lhs = b.freeze()

    # CNOT = sqrt2 * (Z on control joined to X on target)
    b = DiagramBuilder(0)
    top = [b.z(), b.x(), b.z()]
    bot = [b.x(), b.z(), b.x()]
    for wire in (top, bot):
        b.connect(wire[0], wire[1])
        b.connect(wire[1], wire[2])
    for u, v in zip(top, bot):
        b.connect(u, v)
    b.boundary = [top[0], bot[0], top[2], bot[2]]
    return Identity("swap-3cnot", lhs, b.freeze(), CycloNumber.pow_sqrt2(3))


def _clause_expansion(label: int, k: int) -> Identity:
    """H_k(a) = sum_z (a - 1)**z prod_i [not (z and not x_i)]."""
    b = DiagramBuilder(0)
    h = b.h(label)
    b.boundary = [h] * k
    lhs = b.freeze()
    b = DiagramBuilder(0)
    z = b.z()
    b.connect(z, b.h(label - 1))
    legs = []
    for _ in range(k):
        box = b.h(0)
        neg = b.x(1)
        wire = b.z()
        b.connect(z, box)
        b.connect(box, neg)
        b.connect(neg, wire)
        legs.append(wire)
    b.boundary = legs
    return Identity(f"hbox-expansion(a={label},k={k})", lhs, b.freeze(), CycloNumber.one())


def _tseytin_xor() -> Identity:
    b = DiagramBuilder(0)
    x = b.x()
    b.boundary = [x, x, x]
    lhs = b.freeze()
    b = DiagramBuilder(0)
    vs = [b.z() for _ in range(3)]
    for pattern in ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)):
        box = b.h(0)
        for v, bit in zip(vs, pattern):
            if bit:
                b.connect(v, box)  # negated literal
            else:
                neg = b.x(1)
                b.connect(v, neg)
                b.connect(neg, box)
    b.boundary = vs
    return Identity("tseytin-xor", lhs, b.freeze(), CycloNumber.pow_sqrt2(-1))


def _magic_copy(k: int) -> Identity:
    a = CycloNumber.root_of_unity(1, k)
    b = DiagramBuilder(k)
    t1, t2 = b.z(), b.z()
    b.connect(t1, b.h(a))
    b.connect(t2, b.h(a))
    b.boundary = [t1, t2]
    lhs = b.freeze()
    b = DiagramBuilder(k)
    t1, t2, u = b.z(), b.z(), b.z()
    x = b.x()
    for v in (t1, t2, u):
        b.connect(v, x)
    b.connect(u, b.h(a))
    sq = b.h(a * a)
    b.connect(t1, sq)
    b.connect(t2, sq)
    b.boundary = [t1, t2]
    return Identity(f"magic-copy(k={k})", lhs, b.freeze(), CycloNumber.sqrt2())


def _and_gate(k: int) -> Identity:
    """H_k(-1) equals an AND gate (Tseytin clauses) feeding a pi-phase spider."""
    b = DiagramBuilder(0)
    h = b.h(-1)
    b.boundary = [h] * k
    lhs = b.freeze()
    b = DiagramBuilder(0)
    xs = [b.z() for _ in range(k)]
    t = b.z(1)

    def clause(pos: list[int], neg: list[int]) -> None:
        box = b.h(0)
        for v in neg:
            b.connect(v, box)
        for v in pos:
            n = b.x(1)
            b.connect(v, n)
            b.connect(n, box)

    for v in xs:
        clause([v], [t])
    clause([t], xs)
    b.boundary = xs
    return Identity(f"and-gate(k={k})", lhs, b.freeze(), CycloNumber.one())


def _z_fusion() -> Identity:
    b = DiagramBuilder(2)
    p, q = b.z(1), b.z(3)
    b.connect(p, q)
    b.boundary = [p, p, q, q]
    lhs = b.freeze()
    b = DiagramBuilder(2)
    r = b.z(4)
    b.boundary = [r] * 4
    return Identity("z-fusion", lhs, b.freeze(), CycloNumber.one())


def _x_phase_unfuse() -> Identity:
    b = DiagramBuilder(0)
    x = b.x(1)
    b.boundary = [x, x, x]
    lhs = b.freeze()
    b = DiagramBuilder(0)
    x = b.x()
    z = b.z()
    b.connect(x, z)
    b.connect(z, b.x(1))
    b.boundary = [x, x, x]
    return Identity("x-phase-unfuse", lhs, b.freeze(), CycloNumber.one())


def _x_leaf() -> Identity:
    """X_1(pi) = sqrt2 * (x), a unit clause on a positive literal."""
    b = DiagramBuilder(0)
    x = b.x(1)
    b.boundary = [x]
    lhs = b.freeze()
    b = DiagramBuilder(0)
    z = b.z()
    n = b.x(1)
    box = b.h(0)
    b.connect(z, n)
    b.connect(n, box)
    b.boundary = [z]
    return Identity("x-leaf", lhs, b.freeze(), CycloNumber.sqrt2())


_BUILDERS: tuple[Callable[[], Identity], ...] = (
    _swap,
    _tseytin_xor,
    lambda: _magic_copy(1),
    lambda: _magic_copy(2),
    lambda: _clause_expansion(-1, 3),
    lambda: _clause_expansion(0, 4),
    lambda: _clause_expansion(3, 2),
    lambda: _and_gate(2),
    lambda: _and_gate(3),
    _z_fusion,
    _x_phase_unfuse,
    _x_leaf,
)


def identities() -> list[Identity]:
    return [f() for f in _BUILDERS]

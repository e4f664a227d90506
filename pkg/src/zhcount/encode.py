"""Translation between CNF formulas and scalar ZH-diagrams.

Each variable is a phase-free Z-spider, each clause a zero-labelled H-box.
An H(0) box vanishes only when all of its legs carry 1, so a direct wire
from a variable means the variable is negated in that clause, while a
2-leg X(pi) (a NOT) on the wire makes the occurrence positive.
"""

from __future__ import annotations

from .cyclo import CycloNumber
from .diagram import DiagramBuilder, ZhDiagram
from .errors import PreconditionError
from .formula import CnfFormula

__all__ = ["cnf_to_zh", "zh_to_cnf", "SatFormError"]

_ZERO = CycloNumber.zero()


class SatFormError(PreconditionError):
    """The diagram is not in SAT form."""


def cnf_to_zh(f: CnfFormula, ring_k: int = 0) -> ZhDiagram:
    """Scalar diagram whose contraction equals ``count_sat(f)``.

    Node ids: variables ``0..n-1``, then one H-box per clause, then the
    negation spiders.
    """
    b = DiagramBuilder(ring_k)
    var = [b.z() for _ in range(f.num_vars)]
    boxes = [b.h(_ZERO) for _ in f.clauses]
    half = 1 << ring_k
    for h, clause in zip(boxes, f.clauses):
        for lit in clause:
            z = var[abs(lit) - 1]
            if lit > 0:
                x = b.x(half)
                b.connect(z, x)
                b.connect(x, h)
            else:
                b.connect(z, h)
    return b.freeze()


def zh_to_cnf(d: ZhDiagram) -> CnfFormula:
    """Read a CNF back off a diagram in SAT form.

    Variables are numbered by increasing Z-spider id and clauses follow
    increasing H-box id.
    """
    if d.boundary:
        raise SatFormError("diagram has open legs")
    half = 1 << d.ring_k
    zs = [n.id for n in d.nodes if n.kind == "Z"]
    var_of = {z: i + 1 for i, z in enumerate(zs)}
    for n in d.nodes:
        if n.kind == "Z" and n.phase != 0:
            raise SatFormError(f"not in SAT form: Z-spider {n.id} has a nonzero phase")
        if n.kind == "H" and n.label != _ZERO:
            raise SatFormError(f"not in SAT form: H-box {n.id} is not zero-labelled")
        if n.kind == "X":
            nb = d.neighbors(n.id)
            if n.phase != half or len(nb) != 2:
                raise SatFormError(f"not in SAT form: X-spider {n.id} is not a 2-leg NOT")
            kinds = sorted(d.node(m).kind for m in nb)
            if kinds != ["H", "Z"]:
                raise SatFormError(f"not in SAT form: X-spider {n.id} must sit between a Z-spider and an H-box")
    for a, c in d.edges:
        ka, kc = d.node(a).kind, d.node(c).kind
        pair = {ka, kc}
        if pair not in ({"Z", "H"}, {"Z", "X"}, {"X", "H"}):
            raise SatFormError(f"not in SAT form: wire between nodes {a} ({ka}) and {c} ({kc})")
    clauses = []
    for n in d.nodes:
        if n.kind != "H":
            continue
        lits = []
        for m in d.neighbors(n.id):
            node = d.node(m)
            if node.kind == "Z":
                lits.append(-var_of[m])
            else:
                z = next(u for u in d.neighbors(m) if d.node(u).kind == "Z")
                lits.append(var_of[z])
        clauses.append(tuple(lits))
    return CnfFormula(len(zs), tuple(clauses))

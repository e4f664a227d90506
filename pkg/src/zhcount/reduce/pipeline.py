"""Chaining passes in the fixed order PL -> 2SAT -> MON -> BI -> 3DEG."""

from __future__ import annotations

from typing import Iterable, Union

from ..errors import PreconditionError
from ..formula import CnfFormula, profile
from .certs import CertChain, CompositionError, ReductionCert, Relation, compose
from .fib import choose_fib_modulus, find_fib_zero
from .passes import bipartize_2sat, degree3, monotonize, planarize, to_2sat_exact, to_2sat_fixed, to_2sat_pow2p1

__all__ = ["STAGES", "pipeline", "parse_targets"]

STAGES = ("pl", "2sat", "mon", "bi", "3deg")

Mode = Union[str, int]


def parse_targets(spec: str | Iterable[str]) -> list[str]:
    items = spec.split(",") if isinstance(spec, str) else list(spec)
    out = []
    for t in items:
        t = t.strip().lower()
        if not t:
            continue
        if t not in STAGES:
            raise PreconditionError(f"unknown target {t!r}; choose from {', '.join(STAGES)}")
        out.append(t)
    if not out:
        raise PreconditionError("at least one target is required")
    return out


def _pow2p1_exponent(m: int) -> int | None:
    if m in (1, 2):
        return 0
    r = (m - 1).bit_length() - 1
    return r if (1 << r) + 1 == m else None


def _pow2_exponent(m: int) -> int | None:
    if m == 1:
        return 1
    return m.bit_length() - 1 if m & (m - 1) == 0 else None


def _stage(name: str, f: CnfFormula, mode: Mode) -> tuple[CnfFormula, ReductionCert]:
    exact = mode == "exact"
    n = f.num_vars
    if name == "pl":
        return planarize(f)
    if name == "2sat":
        if exact:
            return to_2sat_exact(f)
        r = _pow2p1_exponent(mode)
        if r is not None:
            return to_2sat_pow2p1(f, r)
        return to_2sat_fixed(f, mode)
    if name == "mon":
        if exact:
            return monotonize(f, n + 1)
        r = _pow2_exponent(mode)
        if r is None:
            raise PreconditionError(f"stage mon requires a power-of-two modulus, got {mode}")
        return monotonize(f, r)
    if name == "bi":
        if profile(f).max_clause_size > 2:
            raise PreconditionError("stage bi requires a 2-CNF input (add the 2sat target)")
        if exact:
            return bipartize_2sat(f, n)
        r = _pow2p1_exponent(mode)
        if r is None:
            raise PreconditionError(f"stage bi requires a modulus of the form 2^r + 1, got {mode}")
        return bipartize_2sat(f, r)
    if name == "3deg":
        if exact:
            k, m = choose_fib_modulus(n)
            return degree3(f, m, k)
        fz = find_fib_zero(mode)
        return degree3(f, mode, fz.k)
    raise PreconditionError(f"unknown stage {name!r}")


def pipeline(f: CnfFormula, targets: str | Iterable[str], mode: Mode = "exact") -> tuple[CnfFormula, CertChain]:
    """Apply the requested stages in canonical order.

    ``mode`` is ``"exact"`` (moduli chosen from the current variable count
    so every stage determines its input count) or a modulus ``M >= 1``.
    """
    wanted = set(parse_targets(targets))
    if mode != "exact" and (not isinstance(mode, int) or mode < 1):
        raise PreconditionError("mode must be 'exact' or a positive modulus")
    cur = f
    certs: list[ReductionCert] = []
    rel = Relation.exact_rel()
    for name in STAGES:
        if name not in wanted:
            continue
        try:
            cur, cert = _stage(name, cur, mode)
        except PreconditionError as exc:
            raise PreconditionError(f"stage {name}: {exc}") from exc
        try:
            rel = compose(rel, cert.relation, name)
        except CompositionError as exc:
            raise PreconditionError(f"stage {name}: {exc}") from exc
        certs.append(cert)
    if mode != "exact" and rel.steps and rel.steps[0].modulus % mode == 0 and rel.steps[0].modulus != mode and len(rel.steps) == 1:
        s = rel.steps[0]
        rel = Relation.mod(mode, s.scalar % mode if mode > 1 else 0, False)
    sizes = {
        "input_vars": f.num_vars,
        "input_clauses": f.num_clauses,
        "output_vars": cur.num_vars,
        "output_clauses": cur.num_clauses,
        "vars_added": cur.num_vars - f.num_vars,
        "clauses_added": cur.num_clauses - f.num_clauses,
    }
    composed = ReductionCert(
        "pipeline", rel, profile(f), profile(cur), sizes, {"targets": [s for s in STAGES if s in wanted], "mode": mode}
    )
    return cur, CertChain(tuple(certs), composed)

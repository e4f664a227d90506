"""Count relations guaranteed by reduction passes, their composition and checking."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd

from ..errors import BoundExceededError, FormatError, PreconditionError
from ..formula import ENUMERATION_BOUND, CnfFormula, FormulaProfile, count_sat, count_sat_elim

__all__ = [
    "Step",
    "Relation",
    "ReductionCert",
    "CertChain",
    "CompositionError",
    "compose",
    "verify_cert",
]


class CompositionError(PreconditionError):
    """Two relations cannot be chained into a single checkable relation."""


@dataclass(frozen=True)
class Step:
    """``original ≡ scalar * reduced (mod modulus)``.

    ``exact`` records that the original count is known to be smaller than
    the modulus, so the residue determines it.
    """

    modulus: int
    scalar: int = 1
    exact: bool = False

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise PreconditionError("modulus must be at least 1")
        if gcd(self.scalar % self.modulus, self.modulus) != 1:
            raise PreconditionError(f"scalar {self.scalar} is not invertible mod {self.modulus}")
        object.__setattr__(self, "scalar", self.scalar % self.modulus if self.modulus > 1 else 0)


@dataclass(frozen=True)
class Relation:
    """A relation between an original count and a reduced count.

    ``steps`` is empty for an exact (parsimonious) relation.  One step is a
    plain modular or scaled-modular relation.  Several steps form a decode
    chain: the reduced count is pushed back through the steps from last to
    first, each step being ``x -> scalar * x mod modulus``; every step except
    the first must be marked exact for the chain to be meaningful.
    """

    steps: tuple[Step, ...] = ()

    @classmethod
    def exact_rel(cls) -> "Relation":
        return cls(())

    @classmethod
    def mod(cls, modulus: int, scalar: int = 1, exact: bool = False) -> "Relation":
        return cls((Step(modulus, scalar, exact),))

    @property
    def kind(self) -> str:
        if not self.steps:
            return "exact"
        if len(self.steps) > 1:
            return "decode"
        return "mod" if self.steps[0].scalar == 1 % self.steps[0].modulus else "mod_scaled"

    @property
    def modulus(self) -> int | None:
        return self.steps[0].modulus if self.steps else None

    @property
    def scalar(self) -> int | None:
        return self.steps[0].scalar if self.steps else None

    @property
    def determines_count(self) -> bool:
        return not self.steps or self.steps[0].exact

    def reduced_modulus(self) -> int | None:
        """Modulus the reduced count is needed under (None: exactly)."""
        return self.steps[-1].modulus if self.steps else None

    def decode(self, reduced_count: int) -> int:
        """Push a reduced count back to the original modulus."""
        x = reduced_count
        for s in reversed(self.steps):
            x = (s.scalar * x) % s.modulus
        return x

    def holds(self, original_count: int, reduced_count: int) -> bool:
        if not self.steps:
            return original_count == reduced_count
        x = self.decode(reduced_count)
        first = self.steps[0]
        if first.exact:
            return original_count == x
        return original_count % first.modulus == x

    def to_json(self) -> dict:
        kind = self.kind
        out: dict = {"kind": kind}
        if kind in ("mod", "mod_scaled"):
            s = self.steps[0]
            out["modulus"] = s.modulus
            if kind == "mod_scaled":
                out["scalar"] = s.scalar
            out["exact"] = s.exact
        elif kind == "decode":
            out["steps"] = [{"modulus": s.modulus, "scalar": s.scalar, "exact": s.exact} for s in self.steps]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Relation":
        kind = obj.get("kind")
        if kind == "exact":
            return cls(())
        if kind in ("mod", "mod_scaled"):
            scalar = obj.get("scalar", 1) if kind == "mod_scaled" else 1
            return cls.mod(int(obj["modulus"]), int(scalar), bool(obj.get("exact", False)))
        if kind == "decode":
            return cls(tuple(Step(int(s["modulus"]), int(s["scalar"]), bool(s["exact"])) for s in obj["steps"]))
        raise FormatError(f"unknown relation kind {kind!r}")

    def __str__(self) -> str:
        k = self.kind
        if k == "exact":
            return "Exact"
        if k == "mod":
            return f"Mod({self.modulus})"
        if k == "mod_scaled":
            return f"ModScaled({self.modulus}, {self.scalar})"
        return "Decode[" + ", ".join(f"({s.modulus},{s.scalar})" for s in self.steps) + "]"


def compose(first: Relation, second: Relation, stage: str = "") -> Relation:
    """Relation of original to final count given ``orig -first-> mid -second-> final``."""
    if not first.steps:
        return second
    if not second.steps:
        return first
    a = first.steps[-1]
    b = second.steps[0]
    if b.modulus % a.modulus == 0:
        merged = Step(a.modulus, a.scalar * b.scalar, a.exact)
        return Relation(first.steps[:-1] + (merged,) + second.steps[1:])
    if b.exact:
        return Relation(first.steps + second.steps)
    where = f" at stage {stage}" if stage else ""
    raise CompositionError(
        f"cannot compose mod {a.modulus} with mod {b.modulus}{where}: "
        "the second modulus is not a multiple of the first and does not determine the count"
    )


@dataclass(frozen=True)
class ReductionCert:
    pass_name: str
    relation: Relation
    input_profile: FormulaProfile
    output_profile: FormulaProfile
    sizes: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "pass": self.pass_name,
            "relation": self.relation.to_json(),
            "sizes": dict(self.sizes),
            "profiles": {"input": self.input_profile.to_json(), "output": self.output_profile.to_json()},
            "params": dict(self.params),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ReductionCert":
        try:
            return cls(
                obj["pass"],
                Relation.from_json(obj["relation"]),
                FormulaProfile.from_json(obj["profiles"]["input"]),
                FormulaProfile.from_json(obj["profiles"]["output"]),
                dict(obj.get("sizes", {})),
                dict(obj.get("params", {})),
            )
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed certificate: {exc}") from exc


@dataclass(frozen=True)
class CertChain:
    """Per-stage certificates of a pipeline and the composed relation."""

    stages: tuple[ReductionCert, ...]
    composed: ReductionCert

    def to_json(self) -> dict:
        return {"stages": [c.to_json() for c in self.stages], "composed": self.composed.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "CertChain":
        return cls(tuple(ReductionCert.from_json(c) for c in obj["stages"]), ReductionCert.from_json(obj["composed"]))


def load_cert(text: str | bytes) -> ReductionCert:
    """Read a single certificate or the composed summary of a chain."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid certificate JSON: {exc}") from exc
    if isinstance(obj, dict) and "composed" in obj:
        return ReductionCert.from_json(obj["composed"])
    if isinstance(obj, dict):
        return ReductionCert.from_json(obj)
    raise FormatError("certificate must be a JSON object")


def _count(f: CnfFormula, modulus: int | None, bound: int, fallback: bool) -> int:
    if f.num_vars <= bound:
        c = count_sat(f, bound)
        return c % modulus if modulus else c
    if not fallback:
        raise BoundExceededError(f"{f.num_vars} variables exceed the enumeration bound {bound}")
    return count_sat_elim(f, modulus)


def verify_cert(
    original: CnfFormula,
    reduced: CnfFormula,
    cert: ReductionCert | Relation,
    bound: int = ENUMERATION_BOUND,
    fallback: bool = False,
) -> bool:
    """Check a relation by counting both sides.

    Counting is by enumeration.  With ``fallback`` a formula beyond the
    enumeration bound is counted by variable elimination (reduced modulo
    whatever modulus the relation needs) instead of raising.
    """
    rel = cert.relation if isinstance(cert, ReductionCert) else cert
    orig = _count(original, None, bound, fallback)
    red = _count(reduced, rel.reduced_modulus(), bound, fallback)
    return rel.holds(orig, red)

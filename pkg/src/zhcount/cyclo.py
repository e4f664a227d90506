"""Exact arithmetic in the dyadic cyclotomic ring Z[1/2][omega].

``omega = exp(i*pi / 2**K)``.  A value is stored as integer coefficients on
``omega**0 .. omega**(2**K - 1)`` over a power-of-two denominator, using the
relation ``omega**(2**K) = -1``.  Every instance is kept canonical: the
smallest ring order that holds the value and the smallest denominator, so
equality and hashing are plain tuple comparisons.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

__all__ = [
    "CycloNumber",
    "cyclo_normalize",
    "lift_coeffs",
    "negacyclic_mul",
]

Scalar = Union["CycloNumber", int]


def _trailing_zeros(x: int) -> int:
    return (x & -x).bit_length() - 1


def lift_coeffs(coeffs: Sequence[int], k_from: int, k_to: int) -> list[int]:
    """Re-express a coefficient vector at a larger ring order."""
    if k_to < k_from:
        raise ValueError("cannot lift to a smaller ring order")
    step = 1 << (k_to - k_from)
    out = [0] * (1 << k_to)
    for j, c in enumerate(coeffs):
        out[j * step] = c
    return out


def negacyclic_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Product of two coefficient vectors of equal length modulo x**N + 1."""
    n = len(a)
    out = [0] * n
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if not bj:
                continue
            t = i + j
            if t >= n:
                out[t - n] -= ai * bj
            else:
                out[t] += ai * bj
    return out


class CycloNumber:
    """Immutable canonical element of Z[1/2][exp(i*pi/2**K)].

    Parameters
    ----------
    coeffs:
        Integer coefficients of length ``2**ring_k`` (shorter input is
        zero-padded, longer input is folded using ``omega**(2**K) = -1``).
    denom_exp:
        The value is divided by ``2**denom_exp``.
    ring_k:
        Ring order of the supplied coefficients.
    """

    __slots__ = ("_coeffs", "_denom", "_k")

    def __init__(self, coeffs: Iterable[int], denom_exp: int = 0, ring_k: int = 0):
        if ring_k < 0:
            raise ValueError("ring order must be nonnegative")
        if denom_exp < 0:
            raise ValueError("denominator exponent must be nonnegative")
        n = 1 << ring_k
        folded = [0] * n
        for j, c in enumerate(coeffs):
            c = int(c)
            q, r = divmod(j, n)
            folded[r] += -c if q & 1 else c
        self._k, self._coeffs, self._denom = _canonical(folded, int(denom_exp), ring_k)

    # -- constructors -----------------------------------------------------
    @classmethod
    def _raw(cls, coeffs: tuple[int, ...], denom: int, k: int) -> "CycloNumber":
        obj = object.__new__(cls)
        obj._k, obj._coeffs, obj._denom = _canonical(list(coeffs), denom, k)
        return obj

    @classmethod
    def from_int(cls, value: int) -> "CycloNumber":
        return cls((int(value),), 0, 0)

    @classmethod
    def zero(cls) -> "CycloNumber":
        return cls.from_int(0)

    @classmethod
    def one(cls) -> "CycloNumber":
        return cls.from_int(1)

    @classmethod
    def root_of_unity(cls, n: int, k: int) -> "CycloNumber":
        """``exp(i*pi*n / 2**k)``."""
        size = 1 << k
        n %= 2 * size
        coeffs = [0] * size
        if n < size:
            coeffs[n] = 1
        else:
            coeffs[n - size] = -1
        return cls(coeffs, 0, k)

    @classmethod
    def sqrt2(cls) -> "CycloNumber":
        # omega + omega^-1 with omega = exp(i*pi/4); omega^-1 = -omega^3
        return cls((0, 1, 0, -1), 0, 2)

    @classmethod
    def pow_sqrt2(cls, e: int) -> "CycloNumber":
        """``sqrt(2)**e`` for any integer ``e``."""
        half, odd = divmod(e, 2)
        base = cls.sqrt2() if odd else cls.one()
        if half >= 0:
            return base * (1 << half)
        return base.div_pow2(-half)

    # -- accessors --------------------------------------------------------
    @property
    def ring_k(self) -> int:
        return self._k

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self._coeffs

    @property
    def denom_exp(self) -> int:
        return self._denom

    def coeffs_at(self, k: int) -> list[int]:
        """Coefficients at ring order ``k`` (must be at least ``ring_k``)."""
        return lift_coeffs(self._coeffs, self._k, k)

    def is_zero(self) -> bool:
        return not any(self._coeffs)

    def is_integer(self) -> bool:
        return self._k == 0 and self._denom == 0

    def is_rational(self) -> bool:
        return self._k == 0

    def to_fraction(self) -> Fraction:
        if self._k != 0:
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self._coeffs[0], 1 << self._denom)

    def __int__(self) -> int:
        if not self.is_integer():
            raise ValueError(f"{self!r} is not an integer")
        return self._coeffs[0]

    def to_complex(self) -> complex:
        n = 1 << self._k
        total = sum(c * cmath.exp(1j * cmath.pi * j / n) for j, c in enumerate(self._coeffs))
        return complex(total) / (1 << self._denom)

    # -- arithmetic -------------------------------------------------------
    def _aligned(self, other: "CycloNumber") -> tuple[list[int], list[int], int, int]:
        k = max(self._k, other._k)
        d = max(self._denom, other._denom)
        a = [c << (d - self._denom) for c in self.coeffs_at(k)]
        b = [c << (d - other._denom) for c in other.coeffs_at(k)]
        return a, b, k, d

    def __add__(self, other: Scalar) -> "CycloNumber":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, k, d = self._aligned(other)
        return CycloNumber._raw(tuple(x + y for x, y in zip(a, b)), d, k)

    __radd__ = __add__

    def __neg__(self) -> "CycloNumber":
        return CycloNumber._raw(tuple(-c for c in self._coeffs), self._denom, self._k)

    def __sub__(self, other: Scalar) -> "CycloNumber":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "CycloNumber":
        return (-self) + other

    def __mul__(self, other: Scalar) -> "CycloNumber":
        if isinstance(other, (int, np.integer)):
            return CycloNumber._raw(tuple(c * int(other) for c in self._coeffs), self._denom, self._k)
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        k = max(self._k, other._k)
        prod = negacyclic_mul(self.coeffs_at(k), other.coeffs_at(k))
        return CycloNumber._raw(tuple(prod), self._denom + other._denom, k)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "CycloNumber":
        if e < 0:
            raise ValueError("negative powers are not supported in the ring")
        result = CycloNumber.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def div_pow2(self, e: int = 1) -> "CycloNumber":
        if e < 0:
            return self * (1 << -e)
        return CycloNumber._raw(self._coeffs, self._denom + e, self._k)

    def div_sqrt2(self) -> "CycloNumber":
        return (self * CycloNumber.sqrt2()).div_pow2(1)

    # -- comparison -------------------------------------------------------
    def _key(self) -> tuple:
        return (self._k, self._denom, self._coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, np.integer)):
            other = CycloNumber.from_int(int(other))
        if not isinstance(other, CycloNumber):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"CycloNumber(coeffs={list(self._coeffs)}, denom_exp={self._denom}, ring_k={self._k})"

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.to_fraction())
        z = self.to_complex()
        return f"{z.real:.12g}{z.imag:+.12g}j"

    # -- serialization ----------------------------------------------------
    def to_json(self, ring_k: int | None = None) -> dict:
        k = self._k if ring_k is None else ring_k
        z = self.to_complex()
        return {
            "coeffs": self.coeffs_at(k),
            "denom_exp": self._denom,
            "ring_k": k,
            "approx": [z.real, z.imag],
        }

    @classmethod
    def from_json(cls, obj: dict, ring_k: int | None = None) -> "CycloNumber":
        coeffs = obj["coeffs"]
        k = obj.get("ring_k", ring_k)
        if k is None:
            k = max(0, (len(coeffs) - 1).bit_length())
        if len(coeffs) != 1 << k:
            raise ValueError(f"expected {1 << k} coefficients at ring order {k}, got {len(coeffs)}")
        return cls(coeffs, int(obj.get("denom_exp", 0)), k)


def _coerce(x: object):
    if isinstance(x, CycloNumber):
        return x
    if isinstance(x, (int, np.integer)):
        return CycloNumber.from_int(int(x))
    return NotImplemented


def _canonical(coeffs: list[int], denom: int, k: int) -> tuple[int, tuple[int, ...], int]:
    if not any(coeffs):
        return 0, (0,), 0
    g = min(_trailing_zeros(c) for c in coeffs if c)
    shift = min(g, denom)
    if shift:
        coeffs = [c >> shift for c in coeffs]
        denom -= shift
    while k > 0 and not any(coeffs[1::2]):
        coeffs = coeffs[0::2]
        k -= 1
    return k, tuple(coeffs), denom


def cyclo_normalize(x: CycloNumber) -> CycloNumber:
    """Return the canonical form (instances are always canonical already)."""
    return CycloNumber._raw(x.coeffs, x.denom_exp, x.ring_k)

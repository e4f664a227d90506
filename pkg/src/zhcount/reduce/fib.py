"""Fibonacci facts used by the degree-reduction pass."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import PreconditionError

__all__ = ["FibZero", "fib", "fib_closed_form", "find_fib_zero", "choose_fib_modulus", "fib_matrix_power"]


def fib(n: int) -> int:
    """``F_n`` with ``F_0 = 0``, ``F_1 = 1`` (exact, big integers)."""
    if n < 0:
        raise PreconditionError("n must be nonnegative")
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def fib_closed_form(n: int) -> int:
    """``floor(phi**n / sqrt(5) + 1/2)`` in floating point; only trustworthy for small n."""
    phi = (1 + math.sqrt(5)) / 2
    return math.floor(phi**n / math.sqrt(5) + 0.5)


@dataclass(frozen=True)
class FibZero:
    """Smallest ``k`` with ``F_k ≡ 0 (mod M)``, with ``F_{k-1} mod M`` and its inverse."""

    modulus: int
    k: int
    f_prev: int
    f_prev_inv: int


def find_fib_zero(m: int) -> FibZero:
    if m < 1:
        raise PreconditionError("modulus must be positive")
    if m == 1:
        return FibZero(1, 1, 0, 0)
    prev, cur = 0, 1  # F_0, F_1
    for k in range(1, m * m + 1):
        if cur % m == 0:
            fp = prev % m
            return FibZero(m, k, fp, pow(fp, -1, m))
        prev, cur = cur, (prev + cur) % m
    raise AssertionError(f"no Fibonacci zero mod {m} within {m * m} terms")


def choose_fib_modulus(n: int) -> tuple[int, int]:
    """Smallest ``k`` with ``F_k >= 2**n + 1``, returned as ``(k, F_k)``."""
    if n < 0:
        raise PreconditionError("n must be nonnegative")
    target = (1 << n) + 1
    k, a, b = 0, 0, 1
    while a < target:
        k, a, b = k + 1, b, a + b
    return k, a


def fib_matrix_power(steps: int, m: int | None = None) -> list[list[int]]:
    """``[[0,1],[1,1]] ** steps``, optionally reduced mod ``m``."""
    r = [[1, 0], [0, 1]]
    for _ in range(steps):
        r = [[r[0][1], r[0][0] + r[0][1]], [r[1][1], r[1][0] + r[1][1]]]
        if m:
            r = [[x % m for x in row] for row in r]
    return r

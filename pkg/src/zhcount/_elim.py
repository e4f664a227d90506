"""Variable-elimination scheduling shared by the CNF counter and the diagram engine.

Factors are any objects with a ``vars`` tuple.  The caller supplies the
product and the sum-out operations; this module only decides the order and
keeps the bookkeeping linear in the network size.
"""

from __future__ import annotations

import heapq
from typing import Callable, Iterable, Sequence, TypeVar

from .errors import BoundExceededError

F = TypeVar("F")


def eliminate(
    factors: Iterable[F],
    to_eliminate: Iterable[int],
    mul: Callable[[F, F], F],
    sum_out: Callable[[F, int], F],
    order: str | Sequence[int] = "min-degree",
    width_bound: int = 20,
) -> list[F]:
    """Sum out every index in ``to_eliminate``.

    ``order`` may be ``"min-degree"`` (greedy, lowest index on ties),
    ``"sequential"`` (highest index first) or an explicit sequence;
    indices missing from an explicit sequence follow in increasing order.
    Returns the factors left over (those over kept indices, and scalars).
    """
    store: dict[int, F] = {}
    by_var: dict[int, set[int]] = {}
    targets = set(to_eliminate)
    next_id = 0
    for f in factors:
        store[next_id] = f
        for v in f.vars:
            by_var.setdefault(v, set()).add(next_id)
        next_id += 1

    def neighbourhood(v: int) -> set[int]:
        out: set[int] = set()
        for fid in by_var.get(v, ()):
            out.update(store[fid].vars)
        return out

    if isinstance(order, str) and order == "min-degree":
        deg = {v: len(neighbourhood(v)) for v in targets if v in by_var}
        heap = [(d, v) for v, d in deg.items()]
        heapq.heapify(heap)

        def pick():
            while heap:
                d, v = heapq.heappop(heap)
                if v in deg and deg[v] == d:
                    return v
            return None
    else:
        if isinstance(order, str):
            if order != "sequential":
                raise ValueError(f"unknown elimination order {order!r}")
            seq = sorted((v for v in targets if v in by_var), reverse=True)
        else:
            # listed indices first, then anything the caller left out
            seq = list(dict.fromkeys(v for v in order if v in targets and v in by_var))
            listed = set(seq)
            seq += sorted(v for v in targets if v in by_var and v not in listed)
        it = iter(seq)
        deg = None

        def pick():
            return next(it, None)

    while True:
        v = pick()
        if v is None:
            break
        fids = sorted(by_var.pop(v, ()))
        if deg is not None:
            del deg[v]
        if not fids:
            continue
        touched = [store.pop(fid) for fid in fids]
        union: set[int] = set()
        for f in touched:
            union.update(f.vars)
        if len(union) > width_bound:
            raise BoundExceededError(f"intermediate width {len(union)} exceeds bound {width_bound}")
        for f, fid in zip(touched, fids):
            for u in f.vars:
                if u != v:
                    by_var[u].discard(fid)
        acc = touched[0]
        for f in touched[1:]:
            acc = mul(acc, f)
        acc = sum_out(acc, v)
        store[next_id] = acc
        for u in acc.vars:
            by_var[u].add(next_id)
        next_id += 1
        if deg is not None:
            for u in acc.vars:
                if u in deg:
                    d = len(neighbourhood(u))
                    if d != deg[u]:
                        deg[u] = d
                        heapq.heappush(heap, (d, u))
    return list(store.values())

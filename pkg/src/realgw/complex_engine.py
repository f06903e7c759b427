"""Genus-0 Gromov-Witten invariants of P^m by WDVV reconstruction.

Every invariant is reduced by the vanishing, degree-0, fundamental-class and
divisor axioms to a key whose insertions all lie in [2, m]; such a key with at
least three insertions is expanded by one WDVV step, splitting H^{c_1} as
H^{c_1-1} * H.  Evaluation is iterative (an explicit stack of suspended
expansions), so recursion depth is never limited by the Python call stack.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product
from math import comb
from typing import Generator, Iterator, List, Optional, Sequence, Tuple, Union

from .core import ComplexKey, Insertions, MemoStore, complex_dimension_matches

__all__ = [
    "Resolved",
    "Reduced",
    "normalize_axioms",
    "reduce_key",
    "complex_invariant",
    "wdvv_step",
    "termination_measure",
    "submultisets",
]


@dataclass(frozen=True)
class Resolved:
    value: int


@dataclass(frozen=True)
class Reduced:
    multiplier: int
    key: ComplexKey


def normalize_axioms(key: ComplexKey) -> Union[Resolved, Reduced]:
    """Apply one axiom to ``key``.

    Order: class/dimension vanishing, degree 0, fundamental class, divisor.
    A key none of these touch comes back as ``Reduced(1, key)``.
    """
    m, d, ins = key.m, key.d, key.insertions
    if any(c > m for c in ins) or not complex_dimension_matches(m, d, ins):
        return Resolved(0)
    if d == 0:
        return Resolved(1 if len(ins) == 3 and sum(ins) == m else 0)
    if 0 in ins:
        return Resolved(0)
    if 1 in ins:
        rest = list(ins)
        rest.remove(1)
        return Reduced(d, ComplexKey(m, d, tuple(rest)))
    return Reduced(1, key)


def reduce_key(key: ComplexKey) -> Tuple[int, Optional[ComplexKey]]:
    """Normalize until no axiom applies.

    Returns ``(coefficient, key)`` with the value equal to coefficient times
    the invariant of the returned key, or ``(value, None)`` when resolved.
    """
    coef = 1
    while True:
        step = normalize_axioms(key)
        if isinstance(step, Resolved):
            return coef * step.value, None
        if step.key == key:
            return coef, key
        coef *= step.multiplier
        key = step.key


def _base_value(key: ComplexKey) -> Optional[int]:
    # key is normalized: d >= 1 and every insertion in [2, m]
    if key.k <= 1:
        return 0
    if key.k == 2:
        return 1 if key.d == 1 and key.insertions == (key.m, key.m) else 0
    return None


def termination_measure(key: ComplexKey) -> Tuple[int, int, int]:
    return (key.d, key.k, key.k * key.m * key.m - sum(c * c for c in key.insertions))


def submultisets(items: Sequence[int]) -> Iterator[Tuple[Insertions, Insertions, int]]:
    """Yield ``(A, B, count)`` over splittings of the positions of ``items``.

    Splittings giving the same pair of multisets are merged, ``count`` being
    the number of position subsets they stand for.
    """
    counts = sorted(Counter(items).items(), reverse=True)
    ranges = [range(mult + 1) for _, mult in counts]
    for choice in product(*ranges):
        a: List[int] = []
        b: List[int] = []
        weight = 1
        for (value, mult), take in zip(counts, choice):
            a.extend([value] * take)
            b.extend([value] * (mult - take))
            weight *= comb(mult, take)
        yield tuple(a), tuple(b), weight


def _cheap_zero(m: int, d: int, ins: Sequence[int]) -> bool:
    if any(c < 0 or c > m for c in ins):
        return True
    return not complex_dimension_matches(m, d, ins)


Request = ComplexKey
Expansion = Generator[Request, int, int]


def _wdvv_expansion(key: ComplexKey, pivots: Optional[Tuple[int, int, int]] = None) -> Expansion:
    """Suspended WDVV evaluation of ``key``; yields sub-keys, receives their values.

    ``pivots`` are positions (p1, p2, p3) of c_1, c_2, c_3; by default c_1 is
    the smallest insertion, c_3 the largest and c_2 the second largest.
    """
    m, d = key.m, key.d
    ins = list(key.insertions)
    if pivots is None:
        pivots = (len(ins) - 1, 1, 0)
    p1, p2, p3 = pivots
    c1, c2, c3 = ins[p1], ins[p2], ins[p3]
    rest = [c for i, c in enumerate(ins) if i not in (p1, p2, p3)]

    total = 0
    if not _cheap_zero(m, d, [c1 + c2 - 1, c3] + rest):
        total += d * (yield ComplexKey(m, d, (c1 + c2 - 1, c3, *rest)))
    if not _cheap_zero(m, d, [c1 - 1, c2 + c3] + rest):
        total -= d * (yield ComplexKey(m, d, (c1 - 1, c2 + c3, *rest)))
    if not _cheap_zero(m, d, [c1 - 1, c2, c3 + 1] + rest):
        total += yield ComplexKey(m, d, (c1 - 1, c2, c3 + 1, *rest))

    for d_a in range(1, d):
        d_b = d - d_a
        for s_a, s_b, weight in submultisets(rest):
            for e in range(m + 1):
                f = m - e
                left = (c1 - 1, c2, *s_a, e)
                right = (f, c3, *s_b)
                if not (_cheap_zero(m, d_a, left) or _cheap_zero(m, d_b, right)):
                    x = yield ComplexKey(m, d_a, left)
                    if x:
                        total += weight * d_b * x * (yield ComplexKey(m, d_b, right))
                left = (c1 - 1, *s_a, e)
                right = (f, c2, c3, *s_b)
                if not (_cheap_zero(m, d_a, left) or _cheap_zero(m, d_b, right)):
                    x = yield ComplexKey(m, d_a, left)
                    if x:
                        total -= weight * d_a * x * (yield ComplexKey(m, d_b, right))
    return total


def _drive(root: ComplexKey, expansion: Expansion, store: MemoStore, check_measure: bool = True) -> int:
    """Run a suspended expansion to completion, evaluating sub-keys iteratively."""
    # stack entries: (normalized key or None for the root, expansion, coefficient)
    stack = [(root, expansion, 1)]
    incoming: Optional[int] = None
    while stack:
        parent, gen, _ = stack[-1]
        try:
            request = gen.send(incoming)
        except StopIteration as done:
            value = done.value
            key, _, coef = stack.pop()
            if key is not None:
                store.put(key, value)
            incoming = coef * value
            continue
        coef, child = reduce_key(request)
        if child is None:
            incoming = coef
            continue
        cached = store.get(child)
        if cached is None:
            cached = _base_value(child)
        if cached is not None:
            incoming = coef * cached
            continue
        if check_measure and parent is not None:
            assert termination_measure(child) < termination_measure(parent), (
                f"termination measure did not decrease: {parent} -> {child}"
            )
        stack.append((child, _wdvv_expansion(child), coef))
        incoming = None
    return incoming


def complex_invariant(key: ComplexKey, store: Optional[MemoStore] = None) -> int:
    """Return <c_1,...,c_k>_d of P^m exactly, memoized in ``store``."""
    if store is None:
        store = MemoStore()
    coef, nkey = reduce_key(key)
    if nkey is None:
        return coef
    cached = store.get(nkey)
    if cached is None:
        cached = _base_value(nkey)
    if cached is None:
        cached = _drive(nkey, _wdvv_expansion(nkey), store)
    return coef * cached


def wdvv_step(key: ComplexKey, store: Optional[MemoStore] = None,
              pivots: Optional[Tuple[int, int, int]] = None) -> int:
    """Evaluate one WDVV expansion of ``key`` (sub-invariants via the engine).

    ``key`` must already be normalized (all insertions in [2, m], d >= 1) and
    have k >= 3.  ``pivots`` selects the positions of c_1, c_2, c_3 in the
    canonical insertion tuple; the value does not depend on the choice.
    """
    if store is None:
        store = MemoStore()
    if key.k < 3 or key.d < 1 or any(c < 2 or c > key.m for c in key.insertions):
        raise ValueError(f"wdvv_step needs a normalized key with k >= 3, got {key}")
    if pivots is not None and len(set(pivots)) != 3:
        raise ValueError("pivot positions must be distinct")
    gen = _wdvv_expansion(key, pivots)
    # sub-keys are evaluated through the public entry point, not the driver
    incoming = None
    while True:
        try:
            request = gen.send(incoming)
        except StopIteration as done:
            return done.value
        incoming = complex_invariant(request, store)

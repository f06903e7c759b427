"""Real genus-0 invariants of P^(2n-1) with conjugate pairs of insertions.

Values are the bracket-normalized numbers <c_1,...,c_k>_d^phi, related to the
signed counts N by N = (-1)^(n(d-1)/2) <...>.  Everything is determined from
the degree-1 closed form by a recursion whose correction terms pair one
complex invariant of P^(2n-1) (degree d_1) with one real invariant of degree
d_2 = d - 2 d_1.  Only tau values are computed and cached; eta values are
their negatives.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Generator, List, Optional, Sequence, Tuple

from .complex_engine import complex_invariant, submultisets
from .core import (
    ComplexKey,
    MemoStore,
    RealKey,
    complex_dimension_matches,
    real_dimension_matches,
)

__all__ = [
    "RealRecursionTerm",
    "real_vanishes",
    "real_bracket",
    "real_N",
    "sign_factor",
    "recursion_terms",
    "recursion_value",
]


def sign_factor(n: int, d: int) -> int:
    """(-1)^(n(d-1)/2) for odd d."""
    return -1 if (n * (d - 1) // 2) % 2 else 1


def _involution_sign(involution: str) -> int:
    return 1 if involution == "tau" else -1


def real_vanishes(key: RealKey) -> bool:
    n, d, ins = key.n, key.d, key.insertions
    if d % 2 == 0 or any(c % 2 == 0 for c in ins):
        return True
    if any(c >= 2 * n for c in ins):
        return True
    return not real_dimension_matches(n, d, ins)


def _closed_form(key: RealKey) -> Optional[int]:
    """Value of ``key`` when it needs no recursion, else None."""
    if real_vanishes(key):
        return 0
    base = -1 if (key.n - 1) % 2 else 1
    if key.d == 1:
        return base * _involution_sign(key.involution)
    if key.k == 1:
        return 0
    return None


@dataclass(frozen=True)
class RealRecursionTerm:
    """One product term of the recursion: multiplier * complex factor * real factor."""

    multiplier: int
    complex_part: ComplexKey
    real_part: RealKey


def recursion_terms(n: int, d: int, involution: str, c1: int, c2: int,
                    rest: Sequence[int]) -> Tuple[RealKey, int, List[RealRecursionTerm]]:
    """Expand the recursion for <c1, c2, rest>_d^phi.

    Returns ``(leading_key, leading_multiplier, terms)`` where the value is
    ``leading_multiplier * <leading_key> + sum(term values)``.  Terms whose
    factors fail the dimension or class constraints are omitted.
    """
    m = 2 * n - 1
    leading = RealKey(n, d, involution, (c1 + c2 - 1, *rest))
    terms = []
    for d1 in range(1, (d - 1) // 2 + 1):
        d2 = d - 2 * d1
        for c_i, c_j, weight in submultisets(rest):
            mult = weight * 2 ** len(c_i)
            for i in range(1, n):
                j = m - 2 * i
                # d2 * <c1-1, c2, c_I, 2i>_{d1} * <c_J, j>_{d2}
                cx = ComplexKey(m, d1, (c1 - 1, c2, *c_i, 2 * i))
                rl = RealKey(n, d2, involution, (*c_j, j))
                if _plausible(cx, rl):
                    terms.append(RealRecursionTerm(mult * d2, cx, rl))
                # -d1 * <c1-1, c_I, 2i>_{d1} * <c2, c_J, j>_{d2}
                cx = ComplexKey(m, d1, (c1 - 1, *c_i, 2 * i))
                rl = RealKey(n, d2, involution, (c2, *c_j, j))
                if _plausible(cx, rl):
                    terms.append(RealRecursionTerm(-mult * d1, cx, rl))
    return leading, d, terms


def _plausible(cx: ComplexKey, rl: RealKey) -> bool:
    if cx.insertions and cx.insertions[0] > cx.m:
        return False
    if not complex_dimension_matches(cx.m, cx.d, cx.insertions):
        return False
    return not real_vanishes(rl)


def _expansion(n: int, d: int, involution: str, c1: int, c2: int,
               rest: Sequence[int], store: MemoStore) -> Generator[RealKey, int, int]:
    leading, lead_mult, terms = recursion_terms(n, d, involution, c1, c2, rest)
    total = lead_mult * (yield leading)
    for term in terms:
        x = complex_invariant(term.complex_part, store)
        if x:
            total += term.multiplier * x * (yield term.real_part)
    return total


def _pivot_expansion(key: RealKey, store: MemoStore,
                     pivots: Tuple[int, int] = (0, 1)) -> Generator[RealKey, int, int]:
    ins = key.insertions
    p, q = pivots
    rest = [c for i, c in enumerate(ins) if i not in (p, q)]
    return _expansion(key.n, key.d, key.involution, ins[p], ins[q], rest, store)


def _drive(root: RealKey, store: MemoStore) -> int:
    # root is a tau key, so every request is a tau key as well
    stack = [(root, _pivot_expansion(root, store))]
    incoming: Optional[int] = None
    while stack:
        parent, gen = stack[-1]
        try:
            request = gen.send(incoming)
        except StopIteration as done:
            stack.pop()
            store.put(parent, done.value)
            incoming = done.value
            continue
        value = _closed_form(request)
        if value is None:
            value = store.get(request)
        if value is None:
            assert (request.d, request.k) < (parent.d, parent.k), (
                f"recursion did not descend: {parent} -> {request}"
            )
            stack.append((request, _pivot_expansion(request, store)))
        incoming = value
    return incoming


def real_bracket(key: RealKey, store: Optional[MemoStore] = None) -> int:
    """Return <c_1,...,c_k>_d^phi exactly (bracket normalization)."""
    if store is None:
        store = MemoStore()
    value = _closed_form(key)
    if value is not None:
        return value
    sign = _involution_sign(key.involution)
    tau_key = key.with_involution("tau")
    cached = store.get(tau_key)
    if cached is None:
        cached = _drive(tau_key, store)
    return sign * cached


def real_N(key: RealKey, store: Optional[MemoStore] = None) -> int:
    """Signed count N_d^phi = (-1)^(n(d-1)/2) <...>_d^phi; zero for even d."""
    if key.d % 2 == 0:
        return 0
    return sign_factor(key.n, key.d) * real_bracket(key, store)


def recursion_value(key: RealKey, store: Optional[MemoStore] = None,
                    pivots: Tuple[int, int] = (0, 1), force: bool = False) -> int:
    """Evaluate the recursion once with the chosen ordered pivot positions.

    Sub-invariants come from the public entry points.  Unless ``force`` is
    set, keys the closed form already decides are returned directly.
    """
    if store is None:
        store = MemoStore()
    if key.k < 2:
        raise ValueError("the recursion needs at least two insertions")
    p, q = pivots
    if p == q or not (0 <= p < key.k and 0 <= q < key.k):
        raise ValueError(f"invalid pivot positions {pivots} for k={key.k}")
    if not force:
        value = _closed_form(key)
        if value is not None:
            return value
    gen = _pivot_expansion(key, store, pivots)
    incoming = None
    while True:
        try:
            request = gen.send(incoming)
        except StopIteration as done:
            return done.value
        incoming = real_bracket(request, store)

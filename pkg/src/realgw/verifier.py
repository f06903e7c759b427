"""Exact identity suites cross-checking the complex and real engines.

All comparisons are integer equalities.  The engines are reached through an
:class:`Engine` object so that tests can substitute a deliberately broken one
and confirm the suites notice.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import permutations
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from . import complex_engine, real_engine
from .complex_engine import submultisets
from .core import ComplexKey, MemoStore, RealKey

__all__ = [
    "Engine",
    "VerificationReport",
    "verify_shift_identity",
    "verify_divisor",
    "verify_choice_independence",
    "verify_conjugation_sign",
    "verify_count_normalization",
    "run_verification_suite",
    "sample_real_tuple",
    "sample_complex_key",
    "shift_identity_sides",
]


class Engine:
    """Entry points the suites evaluate; override methods to inject faults."""

    def __init__(self, store: Optional[MemoStore] = None):
        self.store = store if store is not None else MemoStore()

    def complex(self, key: ComplexKey) -> int:
        return complex_engine.complex_invariant(key, self.store)

    def bracket(self, key: RealKey) -> int:
        return real_engine.real_bracket(key, self.store)

    def N(self, key: RealKey) -> int:
        return real_engine.real_N(key, self.store)

    def recursion(self, key: RealKey, pivots: Tuple[int, int]) -> int:
        return real_engine.recursion_value(key, self.store, pivots, force=True)


@dataclass
class VerificationReport:
    suite: str
    cases: int = 0
    failures: List[Dict[str, Any]] = field(default_factory=list)
    parts: List["VerificationReport"] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, inputs: Dict[str, Any], left: int, right: int) -> bool:
        self.cases += 1
        if left != right:
            self.failures.append({"inputs": inputs, "left": left, "right": right})
            return False
        return True

    def absorb(self, other: "VerificationReport") -> None:
        self.cases += other.cases
        for failure in other.failures:
            self.failures.append(dict(failure, suite=other.suite))

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "suite": self.suite,
            "cases": self.cases,
            "passed": self.passed,
            "failures": self.failures,
        }
        if self.parts:
            out["parts"] = [p.to_dict() for p in self.parts]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_text(self) -> str:
        lines = []
        for part in self.parts:
            lines.append(_summary_line(part))
        lines.append(_summary_line(self))
        for failure in self.failures[:20]:
            lines.append(f"  FAIL {json.dumps(failure, sort_keys=True)}")
        if len(self.failures) > 20:
            lines.append(f"  ... {len(self.failures) - 20} more failures")
        return "\n".join(lines)


def _summary_line(report: VerificationReport) -> str:
    status = "PASS" if report.passed else "FAIL"
    return f"{status} {report.suite}: {report.cases} cases, {len(report.failures)} failures"


def _key_inputs(key: Union[RealKey, ComplexKey]) -> Dict[str, Any]:
    if isinstance(key, ComplexKey):
        return {"kind": "complex", "m": key.m, "d": key.d, "insertions": list(key.insertions)}
    return {"kind": "real", "n": key.n, "d": key.d, "involution": key.involution,
            "insertions": list(key.insertions)}


def shift_identity_sides(n: int, d: int, c: int, insertions: Sequence[int], involution: str,
                  engine: Engine) -> Tuple[int, int]:
    """Both sides of the c-shift identity for the ordered tuple ``insertions``."""
    c1, c2, *rest = insertions
    lhs = (engine.bracket(RealKey(n, d, involution, (c1, c2 + 2 * c, *rest)))
           - engine.bracket(RealKey(n, d, involution, (c1 + 2 * c, c2, *rest))))
    m = 2 * n - 1
    rhs = 0
    for d1 in range(1, (d - 1) // 2 + 1):
        d2 = d - 2 * d1
        for c_i, c_j, weight in submultisets(rest):
            mult = weight * 2 ** len(c_i)
            for i in range(1, n):
                j = m - 2 * i
                first = engine.complex(ComplexKey(m, d1, (2 * c, c1, *c_i, 2 * i)))
                if first:
                    first *= engine.bracket(RealKey(n, d2, involution, (c2, *c_j, j)))
                second = engine.complex(ComplexKey(m, d1, (2 * c, c2, *c_i, 2 * i)))
                if second:
                    second *= engine.bracket(RealKey(n, d2, involution, (c1, *c_j, j)))
                rhs += mult * (first - second)
    return lhs, rhs


def verify_shift_identity(n: int, d: int, c: int, insertions: Sequence[int], involution: str = "tau",
                       engine: Optional[Engine] = None,
                       report: Optional[VerificationReport] = None) -> VerificationReport:
    """Check the shift identity for <c_1, c_2 + 2c, ...> - <c_1 + 2c, c_2, ...>.

    ``insertions`` is ordered: its first two entries play the roles of c_1, c_2.
    """
    engine = engine or Engine()
    report = report or VerificationReport("shift_identity")
    if len(insertions) < 2 or c < 1 or any(x < 1 or x % 2 == 0 for x in insertions):
        raise ValueError("need k >= 2 odd positive insertions and c >= 1")
    lhs, rhs = shift_identity_sides(n, d, c, insertions, involution, engine)
    report.record({"n": n, "d": d, "c": c, "involution": involution,
                   "insertions": list(insertions)}, lhs, rhs)
    return report


def verify_divisor(key: Union[RealKey, ComplexKey], engine: Optional[Engine] = None,
                   report: Optional[VerificationReport] = None) -> VerificationReport:
    """Check <1, rest>_d = d <rest>_d, where ``key`` carries ``rest``."""
    engine = engine or Engine()
    report = report or VerificationReport("divisor")
    if key.d < 1:
        raise ValueError("the divisor relation needs d >= 1")
    if isinstance(key, ComplexKey):
        left = engine.complex(ComplexKey(key.m, key.d, (*key.insertions, 1)))
        right = key.d * engine.complex(key)
    else:
        left = engine.bracket(RealKey(key.n, key.d, key.involution, (*key.insertions, 1)))
        right = key.d * engine.bracket(key)
    report.record(_key_inputs(key), left, right)
    return report


def verify_choice_independence(key: RealKey, engine: Optional[Engine] = None,
                               report: Optional[VerificationReport] = None) -> VerificationReport:
    """Run the recursion over every ordered pivot pair; all must equal the bracket."""
    engine = engine or Engine()
    report = report or VerificationReport("choice_independence")
    expected = engine.bracket(key)
    for p, q in permutations(range(key.k), 2):
        value = engine.recursion(key, (p, q))
        report.record(dict(_key_inputs(key), pivots=[p, q]), value, expected)
    return report


def verify_conjugation_sign(key: RealKey, engine: Optional[Engine] = None,
                            report: Optional[VerificationReport] = None) -> VerificationReport:
    engine = engine or Engine()
    report = report or VerificationReport("conjugation_sign")
    tau, eta = key.with_involution("tau"), key.with_involution("eta")
    inputs = _key_inputs(tau)
    del inputs["involution"]
    report.record(dict(inputs, value="N"), engine.N(tau), -engine.N(eta))
    report.record(dict(inputs, value="bracket"), engine.bracket(tau), -engine.bracket(eta))
    return report


def verify_count_normalization(key: RealKey, engine: Optional[Engine] = None,
                               report: Optional[VerificationReport] = None) -> VerificationReport:
    """Check that the signed counts, re-normalized, satisfy the real recursion.

    Brackets are rebuilt from ``engine.N`` as (-1)^(n(d-1)/2) N and fed into
    one recursion step; this catches a wrong or missing normalization sign,
    which a pure bracket-level check cannot see.
    """
    engine = engine or Engine()
    report = report or VerificationReport("count_normalization")
    n, d = key.n, key.d
    if key.k < 2 or d % 2 == 0:
        return report

    def from_count(k: RealKey) -> int:
        return _count_sign(k.n, k.d) * engine.N(k)

    ins = key.insertions
    leading, lead_mult, terms = real_engine.recursion_terms(
        n, d, key.involution, ins[0], ins[1], ins[2:])
    right = lead_mult * from_count(leading)
    for term in terms:
        x = engine.complex(term.complex_part)
        if x:
            right += term.multiplier * x * from_count(term.real_part)
    report.record(_key_inputs(key), from_count(key), right)
    return report


def _count_sign(n: int, d: int) -> int:
    # stated here rather than imported, so a wrong engine sign cannot cancel out
    return (-1) ** (n * (d - 1) // 2)


def _odd_values(n: int) -> List[int]:
    return list(range(1, 2 * n, 2))


def sample_real_tuple(rng: random.Random, n: int, d: int, k: int, shift: int = 0,
                      attempts: int = 50) -> Optional[Tuple[int, ...]]:
    """Random odd tuple of length k in [1, 2n-1] with sum n(d+1) - 2 + k - shift.

    The first k-1 entries are drawn, the last is solved for; None if no draw
    within ``attempts`` works.
    """
    values = _odd_values(n)
    target = n * (d + 1) - 2 + k - shift
    for _ in range(attempts):
        head = [rng.choice(values) for _ in range(k - 1)]
        last = target - sum(head)
        if last in values:
            out = head + [last]
            rng.shuffle(out)
            return tuple(out)
    return None


def run_verification_suite(n_max: int = 3, d_max: int = 5, k_max: int = 5, samples: int = 100,
                           seed: int = 0, c_values: Sequence[int] = (1, 2), n_min: int = 1,
                           invalid_rate: float = 0.1,
                           engine: Optional[Engine] = None) -> VerificationReport:
    """Run every suite over ``samples`` seeded draws from the given ranges.

    Each draw picks n, odd d and k, then a dimension-valid odd tuple (solved
    for the last entry); with probability ``invalid_rate`` an unsolved tuple
    is used instead, exercising the 0 = 0 branch.
    """
    engine = engine or Engine()
    rng = random.Random(seed)
    parts = {name: VerificationReport(name) for name in (
        "shift_identity", "choice_independence", "conjugation_sign", "divisor_real",
        "divisor_complex", "count_normalization")}
    ns = list(range(max(n_min, 1), n_max + 1))
    ds = list(range(1, d_max + 1, 2))
    ks = list(range(2, k_max + 1))
    drawn = 0
    tries = 0
    while ns and ds and ks and drawn < samples and tries < 100 * samples:
        tries += 1
        n, d, k = rng.choice(ns), rng.choice(ds), rng.choice(ks)
        c = rng.choice(list(c_values)) if c_values else 1
        invalid = rng.random() < invalid_rate
        if invalid:
            shifted = tuple(rng.choice(_odd_values(n)) for _ in range(k))
        else:
            shifted = sample_real_tuple(rng, n, d, k, shift=2 * c)
            if shifted is None:
                continue
        drawn += 1
        involution = rng.choice(("tau", "eta"))
        verify_shift_identity(n, d, c, shifted, involution, engine, parts["shift_identity"])

        valid = sample_real_tuple(rng, n, d, k) if not invalid else shifted
        if valid is None:
            continue
        key = RealKey(n, d, involution, valid)
        verify_choice_independence(key, engine, parts["choice_independence"])
        verify_conjugation_sign(key, engine, parts["conjugation_sign"])
        verify_count_normalization(key, engine, parts["count_normalization"])
        verify_divisor(key, engine, parts["divisor_real"])

        m = rng.choice((2, 3, 2 * n - 1 if n > 1 else 2))
        ckey = sample_complex_key(rng, m, rng.randint(1, max(1, min(d, 3))), k + 1)
        if ckey is not None:
            verify_divisor(ckey, engine, parts["divisor_complex"])

    total = VerificationReport("verification_suite")
    for part in parts.values():
        total.absorb(part)
        total.parts.append(part)
    return total


def sample_complex_key(rng: random.Random, m: int, d: int, k: int,
                       attempts: int = 50) -> Optional[ComplexKey]:
    """Random dimension-valid key with all insertions in [2, m]."""
    target = (m + 1) * d + m - 3 + k
    for _ in range(attempts):
        head = [rng.randint(2, m) for _ in range(k - 1)]
        last = target - sum(head)
        if 2 <= last <= m:
            return ComplexKey(m, d, (*head, last))
    return None

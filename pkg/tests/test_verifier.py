import json
import random

import pytest

from realgw import real_engine
from realgw.core import ComplexKey, RealKey
from realgw.verifier import (
    Engine,
    VerificationReport,
    run_verification_suite,
    sample_real_tuple,
    shift_identity_sides,
    verify_choice_independence,
    verify_conjugation_sign,
    verify_count_normalization,
    verify_divisor,
    verify_shift_identity,
)


@pytest.mark.parametrize("n, d, c, ins, sides", [
    (2, 3, 1, (3, 3), (0, 0)),
    (2, 3, 1, (1, 3, 3), (-1, -1)),
    (2, 1, 1, (1, 1), (0, 0)),
])
def test_shift_identity_examples(n, d, c, ins, sides):
    assert shift_identity_sides(n, d, c, ins, "tau", Engine()) == sides
    assert verify_shift_identity(n, d, c, ins).passed


def test_shift_identity_rejects_even_insertions():
    with pytest.raises(ValueError):
        verify_shift_identity(2, 3, 1, (2, 3))


def test_divisor_examples():
    engine = Engine()
    rep = verify_divisor(ComplexKey(3, 2, (2,) * 8), engine)
    assert rep.passed and rep.cases == 1
    assert engine.complex(ComplexKey(3, 2, (2,) * 8 + (1,))) == 184
    assert verify_divisor(RealKey(2, 1, "tau", (3,))).passed
    assert verify_divisor(RealKey(2, 3, "tau", (3, 3, 3, 1))).passed


def test_choice_independence_examples():
    rep = verify_choice_independence(RealKey(2, 3, "tau", (3, 3, 3)))
    assert rep.passed and rep.cases == 6
    rep = verify_choice_independence(RealKey(2, 1, "tau", (3, 1)))
    assert rep.passed and rep.cases == 2


@pytest.mark.parametrize("key, tau, eta", [
    (RealKey(2, 1, "tau", (3,)), -1, 1),
    (RealKey(2, 3, "tau", (3, 3, 3)), 1, -1),
    (RealKey(2, 3, "tau", (3, 3)), 0, 0),
])
def test_conjugation_examples(key, tau, eta):
    engine = Engine()
    assert engine.N(key) == tau and engine.N(key.with_involution("eta")) == eta
    assert verify_conjugation_sign(key, engine).passed


def test_default_suite_passes():
    rep = run_verification_suite(3, 5, 5, 100, seed=0)
    assert rep.passed
    assert rep.cases > 500
    assert {p.suite for p in rep.parts} >= {"shift_identity", "choice_independence"}


def test_empty_ranges():
    rep = run_verification_suite(n_max=0)
    assert rep.cases == 0 and rep.passed
    rep = run_verification_suite(samples=0)
    assert rep.cases == 0 and rep.passed


def test_seed_determinism():
    a = run_verification_suite(2, 5, 4, 30, seed=7).to_json()
    b = run_verification_suite(2, 5, 4, 30, seed=7).to_json()
    assert a == b


class EtaFlipped(Engine):
    def bracket(self, key):
        value = super().bracket(key)
        return -value if key.involution == "eta" else value


class SignDropped(Engine):
    def N(self, key):
        return super().bracket(key) if key.d % 2 else 0


class WrongComplex(Engine):
    def complex(self, key):
        value = super().complex(key)
        return value + 1 if value > 1 else value


@pytest.mark.parametrize("engine_cls", [EtaFlipped, SignDropped, WrongComplex])
def test_broken_engines_are_caught(engine_cls):
    rep = run_verification_suite(3, 5, 5, 100, seed=0, engine=engine_cls())
    assert not rep.passed


def test_sign_dropped_caught_by_count_normalization():
    key = RealKey(3, 3, "tau", (5, 5, 3))
    assert verify_count_normalization(key).passed
    assert not verify_count_normalization(key, SignDropped()).passed


def test_report_rendering():
    rep = VerificationReport("demo")
    rep.record({"x": 1}, 2, 2)
    rep.record({"x": 2}, 2, 3)
    assert not rep.passed and rep.cases == 2
    data = json.loads(rep.to_json())
    assert data["failures"] == [{"inputs": {"x": 2}, "left": 2, "right": 3}]
    assert rep.to_text().splitlines()[0] == "FAIL demo: 2 cases, 1 failures"


def test_sample_real_tuple_is_dimension_valid():
    rng = random.Random(3)
    for _ in range(50):
        t = sample_real_tuple(rng, 3, 5, 4)
        if t is not None:
            assert sum(t) == 3 * 6 - 2 + 4 and all(x % 2 for x in t)


def test_suite_uses_sign_factor(monkeypatch):
    monkeypatch.setattr(real_engine, "sign_factor", lambda n, d: 1)
    # verifier rebuilds brackets with the true sign, engine N now lacks it
    rep = run_verification_suite(3, 5, 5, 100, seed=0)
    assert not rep.passed

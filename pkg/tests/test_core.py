import io

import pytest
from hypothesis import given, strategies as st

from realgw.core import (
    CACHE_HEADER,
    CacheConflictError,
    CacheFormatError,
    ComplexKey,
    MemoStore,
    RealKey,
    cache_access,
    cache_dumps,
    cache_export,
    cache_import,
    cache_loads,
    cache_put,
    canonicalize,
    complex_dimension_matches,
    real_dimension_matches,
)


@pytest.mark.parametrize("raw, expected", [
    ([3, 1, 3], (3, 3, 1)),
    ([], ()),
    ([2, 2, 2], (2, 2, 2)),
])
def test_canonicalize(raw, expected):
    assert canonicalize(raw) == expected


def test_canonicalize_rejects_negative():
    with pytest.raises(ValueError):
        canonicalize([2, -1])


@given(st.lists(st.integers(0, 9), max_size=8), st.randoms())
def test_canonicalize_order_insensitive_and_idempotent(raw, rnd):
    shuffled = list(raw)
    rnd.shuffle(shuffled)
    assert canonicalize(shuffled) == canonicalize(raw)
    assert canonicalize(canonicalize(raw)) == canonicalize(raw)


def test_keys_are_canonical():
    assert ComplexKey(3, 1, [2, 3, 2]) == ComplexKey(3, 1, (3, 2, 2))
    assert RealKey(2, 3, "tau", [1, 3]).insertions == (3, 1)


@pytest.mark.parametrize("args", [(1, 1, ()), (3, -1, ())])
def test_complex_key_validation(args):
    with pytest.raises(ValueError):
        ComplexKey(*args)


@pytest.mark.parametrize("args", [(0, 1, "tau", ()), (2, 0, "tau", ()), (2, 1, "phi", ()),
                                  (2, 1, "tau", (3, 0))])
def test_real_key_validation(args):
    with pytest.raises(ValueError):
        RealKey(*args)


@pytest.mark.parametrize("m, d, ins, expected", [
    (3, 1, (3, 3), True),
    (3, 2, (2,) * 8, True),
    (3, 1, (3, 3, 3), False),
])
def test_complex_dimension(m, d, ins, expected):
    assert complex_dimension_matches(m, d, ins) is expected


@pytest.mark.parametrize("n, d, ins, expected", [
    (2, 1, (3,), True),
    (2, 3, (3, 3, 3), True),
    (2, 3, (3, 3), False),
])
def test_real_dimension(n, d, ins, expected):
    assert real_dimension_matches(n, d, ins) is expected


def test_cache_put_get():
    store = MemoStore()
    key = ComplexKey(3, 2, (2,) * 8)
    assert cache_access(store, key) is None
    cache_put(store, key, 92)
    assert cache_access(store, key) == 92
    cache_put(store, key, 92)
    with pytest.raises(CacheConflictError):
        cache_put(store, key, 91)
    assert cache_access(store, key) == 92


def test_export_one_complex_entry():
    store = MemoStore()
    store.put(ComplexKey(3, 1, (3, 3)), 1)
    assert cache_dumps(store) == f"{CACHE_HEADER}\nC|3|1|3,3|1\n"


def test_import_format_example():
    store = cache_loads("C|3|1|3,3|1")
    assert store.get(ComplexKey(3, 1, (3, 3))) == 1


def test_real_records_and_empty_insertions():
    store = cache_loads(f"{CACHE_HEADER}\nR|2|3|tau|3,3,3|1\nC|3|0||0\n")
    assert store.get(RealKey(2, 3, "tau", (3, 3, 3))) == 1
    assert store.get(ComplexKey(3, 0, ())) == 0


def test_malformed_line_reports_line_number():
    with pytest.raises(CacheFormatError) as info:
        cache_loads(f"{CACHE_HEADER}\nC|3|1|3,3|1\nC|3|x|3|1\n")
    assert info.value.lineno == 3


@pytest.mark.parametrize("text", ["Q|1|2", "C|3|1|3,3", "R|2|1|phi|3|-1", "C|3|1|3,a|1"])
def test_malformed_records(text):
    with pytest.raises(CacheFormatError):
        cache_loads(text)


def test_version_mismatch():
    with pytest.raises(CacheFormatError, match="version"):
        cache_loads("RGWCACHE 2\nC|3|1|3,3|1\n")


def test_conflicting_import_aborts():
    with pytest.raises(CacheConflictError):
        cache_loads("C|3|1|3,3|1\nC|3|1|3,3|2\n")


complex_keys = st.builds(lambda m, d, ins: ComplexKey(m, d, ins), st.integers(2, 6),
                         st.integers(0, 5), st.lists(st.integers(0, 6), max_size=6))
real_keys = st.builds(lambda n, d, phi, ins: RealKey(n, d, phi, ins), st.integers(1, 4),
                      st.integers(1, 9), st.sampled_from(["tau", "eta"]),
                      st.lists(st.integers(1, 7), max_size=6))
big = st.integers(-(10 ** 40), 10 ** 40)


@given(st.dictionaries(complex_keys, big, max_size=10), st.dictionaries(real_keys, big, max_size=10))
def test_round_trip(cdata, rdata):
    store = MemoStore()
    for k, v in {**cdata, **rdata}.items():
        store.put(k, v)
    text = cache_dumps(store)
    again = cache_loads(text)
    assert again == store
    assert cache_dumps(again) == text


def test_round_trip_through_file(tmp_path):
    store = MemoStore()
    store.put(ComplexKey(2, 9, (2,) * 26), 2 ** 70 + 1)
    store.put(RealKey(3, 5, "tau", (5, 5, 5, 5, 1)), -(2 ** 80))
    path = tmp_path / "cache.txt"
    cache_export(store, path)
    again = cache_import(path)
    assert again == store
    buf = io.StringIO()
    cache_export(again, buf)
    assert buf.getvalue().encode() == path.read_bytes()

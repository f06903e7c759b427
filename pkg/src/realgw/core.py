"""Keys, dimension predicates and the shared memo store.

Complex invariants of P^m and real invariants of P^(2n-1) are identified by
small frozen keys whose insertion tuples are kept sorted in descending order,
so that permuting the constraints never creates a new cache entry.
"""
from __future__ import annotations

import io
import os
import threading
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, Optional, Tuple, Union

__all__ = [
    "CACHE_HEADER",
    "CacheFormatError",
    "CacheConflictError",
    "ComplexKey",
    "RealKey",
    "MemoStore",
    "canonicalize",
    "complex_dimension_matches",
    "real_dimension_matches",
    "cache_access",
    "cache_put",
    "cache_export",
    "cache_import",
    "cache_loads",
    "cache_dumps",
]

CACHE_HEADER = "RGWCACHE 1"
INVOLUTIONS = ("tau", "eta")

Insertions = Tuple[int, ...]


class CacheConflictError(RuntimeError):
    """A key was re-inserted with a different value (engine bug)."""


class CacheFormatError(ValueError):
    """A cache file could not be parsed."""

    def __init__(self, message: str, lineno: Optional[int] = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


def canonicalize(raw: Iterable[int]) -> Insertions:
    """Return the insertions as a tuple sorted in descending order.

    >>> canonicalize([3, 1, 3])
    (3, 3, 1)
    """
    entries = tuple(int(c) for c in raw)
    for c in entries:
        if c < 0:
            raise ValueError(f"insertion codimensions must be >= 0, got {c}")
    return tuple(sorted(entries, reverse=True))


@dataclass(frozen=True, order=True)
class ComplexKey:
    """Key of the genus-0 invariant <c_1,...,c_k>_d of P^m."""

    m: int
    d: int
    insertions: Insertions

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"target P^m needs m >= 2, got m={self.m}")
        if self.d < 0:
            raise ValueError(f"degree must be >= 0, got d={self.d}")
        object.__setattr__(self, "insertions", canonicalize(self.insertions))

    @property
    def k(self) -> int:
        return len(self.insertions)


@dataclass(frozen=True, order=True)
class RealKey:
    """Key of the real invariant <c_1,...,c_k>_d^phi of P^(2n-1), phi in {tau, eta}."""

    n: int
    d: int
    involution: str
    insertions: Insertions

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"target P^(2n-1) needs n >= 1, got n={self.n}")
        if self.d < 1:
            raise ValueError(f"real invariants need d >= 1, got d={self.d}")
        if self.involution not in INVOLUTIONS:
            raise ValueError(f"involution must be 'tau' or 'eta', got {self.involution!r}")
        ins = canonicalize(self.insertions)
        if any(c < 1 for c in ins):
            raise ValueError("real insertions must be positive")
        object.__setattr__(self, "insertions", ins)

    @property
    def k(self) -> int:
        return len(self.insertions)

    def with_involution(self, involution: str) -> "RealKey":
        if involution == self.involution:
            return self
        return RealKey(self.n, self.d, involution, self.insertions)


Key = Union[ComplexKey, RealKey]


def complex_dimension_matches(m: int, d: int, insertions: Insertions) -> bool:
    return sum(insertions) == (m + 1) * d + m - 3 + len(insertions)


def real_dimension_matches(n: int, d: int, insertions: Insertions) -> bool:
    return sum(insertions) == n * (d + 1) - 2 + len(insertions)


class MemoStore:
    """Cache of exact invariant values.

    Reads are lock-free; writes go through a lock and use compare-and-insert
    semantics, so a conflicting re-insert raises instead of overwriting.
    """

    version = "1"

    def __init__(self):
        self.complex_map: Dict[ComplexKey, int] = {}
        self.real_map: Dict[RealKey, int] = {}
        self._lock = threading.Lock()

    def _map(self, key: Key) -> Dict:
        if isinstance(key, ComplexKey):
            return self.complex_map
        if isinstance(key, RealKey):
            return self.real_map
        raise TypeError(f"not a cache key: {key!r}")

    def get(self, key: Key) -> Optional[int]:
        return self._map(key).get(key)

    def put(self, key: Key, value: int) -> None:
        value = int(value)
        table = self._map(key)
        with self._lock:
            old = table.get(key)
            if old is None:
                table[key] = value
            elif old != value:
                raise CacheConflictError(
                    f"conflicting values for {key}: cached {old}, new {value}"
                )

    def update(self, other: "MemoStore") -> None:
        for key, value in other.items():
            self.put(key, value)

    def items(self) -> Iterator[Tuple[Key, int]]:
        yield from sorted(self.complex_map.items())
        yield from sorted(self.real_map.items())

    def __len__(self) -> int:
        return len(self.complex_map) + len(self.real_map)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MemoStore):
            return NotImplemented
        return self.complex_map == other.complex_map and self.real_map == other.real_map

    def __repr__(self) -> str:
        return f"MemoStore(complex={len(self.complex_map)}, real={len(self.real_map)})"


def cache_access(store: MemoStore, key: Key) -> Optional[int]:
    return store.get(key)


def cache_put(store: MemoStore, key: Key, value: int) -> None:
    store.put(key, value)


def _join(ins: Insertions) -> str:
    return ",".join(str(c) for c in ins)


def format_record(key: Key, value: int) -> str:
    if isinstance(key, ComplexKey):
        return f"C|{key.m}|{key.d}|{_join(key.insertions)}|{value}"
    return f"R|{key.n}|{key.d}|{key.involution}|{_join(key.insertions)}|{value}"


def _parse_insertions(text: str) -> Insertions:
    if text == "":
        return ()
    return tuple(int(c) for c in text.split(","))


def parse_record(line: str, lineno: Optional[int] = None) -> Tuple[Key, int]:
    fields = line.split("|")
    try:
        if fields[0] == "C" and len(fields) == 5:
            key = ComplexKey(int(fields[1]), int(fields[2]), _parse_insertions(fields[3]))
            return key, int(fields[4])
        if fields[0] == "R" and len(fields) == 6:
            key = RealKey(int(fields[1]), int(fields[2]), fields[3], _parse_insertions(fields[4]))
            return key, int(fields[5])
    except ValueError as exc:
        raise CacheFormatError(f"bad record {line!r}: {exc}", lineno) from None
    raise CacheFormatError(f"bad record {line!r}", lineno)


def cache_export(store: MemoStore, destination) -> None:
    """Write the store to a path or text stream in the line format.

    Records are sorted, so equal stores always export to identical bytes.
    """
    if isinstance(destination, (str, os.PathLike)):
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            cache_export(store, fh)
        return
    destination.write(CACHE_HEADER + "\n")
    for key, value in store.items():
        destination.write(format_record(key, value) + "\n")


def cache_import(source, store: Optional[MemoStore] = None) -> MemoStore:
    """Read a cache file (path or text stream) into a store.

    A missing header is tolerated so that bare record snippets load; a header
    with another version is an error.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8") as fh:
            return cache_import(fh, store)
    if store is None:
        store = MemoStore()
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        if line.startswith("RGWCACHE"):
            if lineno != 1:
                raise CacheFormatError("header must be the first line", lineno)
            if line != CACHE_HEADER:
                raise CacheFormatError(
                    f"unsupported cache version {line[len('RGWCACHE'):].strip()!r}, "
                    f"expected {MemoStore.version}",
                    lineno,
                )
            continue
        key, value = parse_record(line, lineno)
        store.put(key, value)
    return store


def cache_loads(text: str, store: Optional[MemoStore] = None) -> MemoStore:
    return cache_import(io.StringIO(text), store)


def cache_dumps(store: MemoStore) -> str:
    buf = io.StringIO()
    cache_export(store, buf)
    return buf.getvalue()

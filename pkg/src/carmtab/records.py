"""Carmichael records and the result file format.

A result file holds one record per line, ``n: p1 p2 ... pd`` with the primes
ascending and lines sorted by ``n``, followed by one summary line starting
with ``#``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Iterable, TextIO

from .arith import korselt_check


@dataclass(frozen=True, order=True)
class CarmichaelRecord:
    n: int
    primes: tuple[int, ...] = field(compare=False)

    def __post_init__(self):
        if len(self.primes) < 3:
            raise ValueError(f"{self.n}: a Carmichael number has at least 3 prime factors")
        if list(self.primes) != sorted(self.primes) or prod(self.primes) != self.n:
            raise ValueError(f"{self.n}: primes {self.primes} are not its factorization")
        if not korselt_check(self.n, self.primes):
            raise ValueError(f"{self.n} fails Korselt's criterion")

    def line(self) -> str:
        return f"{self.n}: " + " ".join(map(str, self.primes))


def merge(*groups: Iterable[CarmichaelRecord]) -> list[CarmichaelRecord]:
    """Sort and drop duplicate ``n`` across all groups."""
    seen = {}
    for group in groups:
        for rec in group:
            seen.setdefault(rec.n, rec)
    return [seen[n] for n in sorted(seen)]


def write_results(records, out: TextIO, summary: dict | None = None) -> None:
    for rec in records:
        out.write(rec.line() + "\n")
    items = {"count": len(records)}
    items.update(summary or {})
    out.write("# " + " ".join(f"{k}={v}" for k, v in items.items()) + "\n")


def parse_line(line: str) -> CarmichaelRecord:
    head, _, tail = line.partition(":")
    if not _:
        raise ValueError(f"malformed record line: {line!r}")
    return CarmichaelRecord(int(head), tuple(int(x) for x in tail.split()))


def read_results(src: TextIO) -> list[CarmichaelRecord]:
    records = []
    for line in src:
        line = line.strip()
        if line and not line.startswith("#"):
            records.append(parse_line(line))
    return records

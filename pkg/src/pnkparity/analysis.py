"""Exact parity statistics of p(n, k) over one minimal period.

Every quantity here is a limit over n -> infinity, but since the parity
sequence is purely periodic it equals an exact count over one period.
Fractions are reduced, so the answer does not depend on which period
(minimal or a multiple) is scanned.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from .engines import PartitionParams, mod_values, parity_stream
from .period import minimal_period

TWO_THIRDS = Fraction(2, 3)


def triangular(k: int) -> int:
    return k * (k + 1) // 2


@lru_cache(maxsize=None)
def parity_period(k: int) -> int:
    return minimal_period(k, 2)[0]


def parities(k: int, count: int, start: int = 0) -> np.ndarray:
    return parity_stream(k, start, count).bits()


def odd_density(k: int) -> Fraction:
    """Limiting fraction of n with p(n, k) odd."""
    L = parity_period(k)
    return Fraction(parity_stream(k, 0, L).popcount(), L)


def nonzero_density(k: int, m: int) -> Fraction:
    """Fraction of n with p(n, k) not divisible by m.

    An extension beyond parity; for m = 2 this equals :func:`odd_density`.
    """
    L = minimal_period(k, m)[0]
    vals = mod_values(PartitionParams(k, m), 0, L).values
    return Fraction(int(np.count_nonzero(vals)), L)


@dataclass(frozen=True)
class DensityReport:
    """Joint densities keyed (parity of p(n,k), parity of p(n,k-1))."""

    k: int
    period: int
    odd_density: Fraction
    odd_odd: Fraction
    odd_even: Fraction
    even_odd: Fraction
    even_even: Fraction

    @property
    def balanced(self) -> bool:
        """(odd, odd) and (even, odd) have equal density."""
        return self.odd_odd == self.even_odd

    @property
    def total(self) -> Fraction:
        return self.odd_odd + self.odd_even + self.even_odd + self.even_even


def joint_densities(k: int) -> DensityReport:
    if k < 2:
        raise ValueError("joint densities need k >= 2")
    L = math.lcm(parity_period(k), parity_period(k - 1))
    cur = parities(k, L).astype(bool)
    prev = parities(k - 1, L).astype(bool)

    def frac(mask):
        return Fraction(int(np.count_nonzero(mask)), L)

    return DensityReport(
        k=k,
        period=L,
        odd_density=frac(cur),
        odd_odd=frac(cur & prev),
        odd_even=frac(cur & ~prev),
        even_odd=frac(~cur & prev),
        even_even=frac(~cur & ~prev),
    )


def _runs(bits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Starts and lengths of maximal zero runs in a 0/1 array."""
    padded = np.concatenate(([1], bits, [1])).astype(np.int8)
    edges = np.diff(padded)
    starts = np.flatnonzero(edges == -1)
    ends = np.flatnonzero(edges == 1)
    return starts, ends - starts


@dataclass(frozen=True)
class RunReport:
    k: int
    period: int
    max_even_run: int
    positions: tuple[int, ...]  # residues mod period where a maximal run starts
    linear_max_even_run: int

    @property
    def bound(self) -> int:
        return triangular(self.k) - 1

    @property
    def within_bound(self) -> bool:
        return self.max_even_run <= self.bound

    @property
    def attains_bound(self) -> bool:
        return self.max_even_run == self.bound

    @property
    def at_period_end(self) -> bool:
        """A maximal run fills the last ``bound`` residues of the period."""
        if self.max_even_run == 0:
            return self.bound == 0
        return (self.period - self.max_even_run) % self.period in self.positions

    @property
    def consistent(self) -> bool:
        return self.max_even_run == self.linear_max_even_run


def max_even_run(k: int) -> RunReport:
    L = parity_period(k)
    bits = parities(k, 2 * L)
    one = bits[:L]
    if one.all():
        return RunReport(k, L, 0, (), 0)
    # rotate so the period starts right after an odd value: circular runs become linear
    pivot = int(np.flatnonzero(one)[-1]) + 1
    rotated = np.roll(one, -pivot)
    starts, lengths = _runs(rotated)
    best = int(lengths.max())
    positions = tuple(sorted(int((s + pivot) % L) for s, n in zip(starts, lengths) if n == best))
    _, lin = _runs(bits)
    return RunReport(k, L, best, positions, int(lin.max()) if lin.size else 0)


@dataclass(frozen=True)
class ImplicationRecord:
    k: int
    density: Fraction
    next_density: Fraction

    @property
    def premise(self) -> bool:
        return self.density > TWO_THIRDS

    @property
    def holds(self) -> bool:
        return not self.premise or self.next_density <= TWO_THIRDS


def check_density_implication(k_max: int) -> list[ImplicationRecord]:
    """For k < k_max: odd density above 2/3 at k forces at most 2/3 at k + 1."""
    if k_max < 2:
        raise ValueError("k_max must be at least 2")
    dens = {k: odd_density(k) for k in range(1, k_max + 1)}
    return [ImplicationRecord(k, dens[k], dens[k + 1]) for k in range(1, k_max)]


@dataclass(frozen=True)
class LowerBoundRecord:
    k: int
    density: Fraction
    bound: Fraction
    min_odd_in_window: int

    @property
    def density_ok(self) -> bool:
        return self.density >= self.bound

    @property
    def window_ok(self) -> bool:
        return self.min_odd_in_window >= 1

    @property
    def holds(self) -> bool:
        return self.density_ok and self.window_ok


def check_density_lower_bound(k: int) -> LowerBoundRecord:
    """odd density >= 2/(k(k+1)), and no k(k+1)/2 consecutive values are all even."""
    w = triangular(k)
    L = parity_period(k)
    bits = parities(k, L + w).astype(np.int64)
    csum = np.concatenate(([0], np.cumsum(bits)))
    window_counts = csum[w:w + L] - csum[:L]
    return LowerBoundRecord(k, odd_density(k), Fraction(2, k * (k + 1)), int(window_counts.min()))


# ---------------------------------------------------------------------------
# reports


CSV_COLUMNS = ("k", "L", "odd_num", "odd_den", "max_run", "run_at_period_end",
               "lemma31_holds", "thm13_holds")


@dataclass(frozen=True)
class SummaryRow:
    k: int
    L: int
    odd_num: int
    odd_den: int
    max_run: int
    run_at_period_end: bool
    lemma31_holds: Optional[bool]
    thm13_holds: bool


def summary_row(k: int) -> SummaryRow:
    d = odd_density(k)
    runs = max_even_run(k)
    balanced = joint_densities(k).balanced if k >= 2 else None
    return SummaryRow(k, parity_period(k), d.numerator, d.denominator, runs.max_even_run,
                      runs.at_period_end, balanced, check_density_lower_bound(k).holds)


def rows_to_csv(rows: Iterable[SummaryRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow(["" if v is None else (str(v).lower() if isinstance(v, bool) else v)
                         for v in (getattr(r, c) for c in CSV_COLUMNS)])
    return buf.getvalue()


def rows_to_json(rows: Iterable[SummaryRow]) -> str:
    return json.dumps([asdict(r) for r in rows], indent=2, sort_keys=True) + "\n"

"""Periods of p(n, k) mod m.

The sequence p(n, k) mod m is the power series expansion of 1/D(q) with
D(q) = (1 - q)(1 - q^2)...(1 - q^k) over Z/m.  Because D(0) = 1 the
sequence is purely periodic, and L is a period exactly when D divides
1 - q^L, i.e. when q^L = 1 in (Z/m)[q]/(D).  The minimal period is the
multiplicative order of q in that ring.  It is found by order descent
from the multiple m^(k-1) * k!.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from functools import reduce
from pathlib import Path
from typing import Mapping, Optional, Union

import numpy as np

from . import __version__
from .engines import PartitionParams, mod_values
from .polyring import ModPoly, denominator_poly, divrem, mul, pow_q_mod

CERTIFICATE_NOTE = (
    "Let e(n) = p(n+L,k) - p(n,k) mod m. Since D(q) * sum p(n,k) q^n = 1, for "
    "n >= deg D both p(n,k) and p(n+L,k) satisfy the order-deg(D) linear "
    "recurrence sum_i D_i x(n-i) = 0 with D_0 = 1, hence so does e(n). "
    "deg D = k(k+1)/2 consecutive zeros e(0..deg D - 1) therefore force e = 0, "
    "so matching evidence windows prove L is a period. Minimality: every "
    "period is a multiple of the least one, so L is minimal iff no L/p "
    "(p prime, p | L) is a period; each witness gives the first index n "
    "below deg D where p(n + L/p, k) and p(n, k) differ mod m."
)


# ---------------------------------------------------------------------------
# factored integers


def small_primes(limit: int) -> list[int]:
    if limit < 2:
        return []
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return np.flatnonzero(sieve).tolist()


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13):
        if n % p == 0:
            return n == p
    d = 17
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial division.  Fine for the smooth numbers that occur here."""
    if n < 1:
        raise ValueError("can only factor positive integers")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 5
    while d * d <= n:
        for p in (d, d + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        d += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def legendre(n: int, p: int) -> int:
    """Exponent of the prime p in n!."""
    e = 0
    while n:
        n //= p
        e += n
    return e


@dataclass(frozen=True)
class FactoredInteger:
    factors: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        items = dict(self.factors) if not isinstance(self.factors, Mapping) else self.factors
        clean = []
        for p, e in sorted(items.items()):
            if e < 0:
                raise ValueError("exponents must be non-negative")
            if e == 0:
                continue
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            clean.append((int(p), int(e)))
        object.__setattr__(self, "factors", tuple(clean))

    @classmethod
    def of(cls, n: int) -> "FactoredInteger":
        return cls(factorize(n))

    @property
    def value(self) -> int:
        return math.prod(p**e for p, e in self.factors)

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def __int__(self):
        return self.value

    def __mul__(self, other: "FactoredInteger") -> "FactoredInteger":
        out = self.as_dict()
        for p, e in other.factors:
            out[p] = out.get(p, 0) + e
        return FactoredInteger(out)

    def __pow__(self, n: int) -> "FactoredInteger":
        return FactoredInteger({p: e * n for p, e in self.factors})

    def divide(self, p: int) -> "FactoredInteger":
        out = self.as_dict()
        if out.get(p, 0) == 0:
            raise ValueError(f"{p} does not divide {self.value}")
        out[p] -= 1
        return FactoredInteger(out)

    def divides(self, n: int) -> bool:
        return n % self.value == 0


def factorial_factored(k: int) -> FactoredInteger:
    return FactoredInteger({p: legendre(k, p) for p in small_primes(k)})


def structural_bound(k: int, m: int) -> FactoredInteger:
    """m^(k-1) * k!, a period of p(n, k) mod m for every k and m."""
    PartitionParams(k, m)
    return FactoredInteger.of(m) ** (k - 1) * factorial_factored(k)


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class DivisorWitness:
    divisor: int
    index: int
    residue: int
    shifted_residue: int


@dataclass(frozen=True)
class PeriodCertificate:
    k: int
    m: int
    period: int
    minimal: bool
    base: tuple[int, ...]
    shifted: tuple[int, ...]
    witnesses: tuple[DivisorWitness, ...] = ()
    version: str = __version__
    note: str = field(default=CERTIFICATE_NOTE, compare=False)

    @property
    def window(self) -> int:
        return self.k * (self.k + 1) // 2

    def to_json(self) -> str:
        doc = {
            "k": self.k,
            "m": self.m,
            "L": self.period,
            "minimal": self.minimal,
            "evidence": {"base": list(self.base), "shifted": list(self.shifted)},
            "divisor_witnesses": [asdict(w) for w in self.witnesses],
            "tool_version": self.version,
            "justification": self.note,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "PeriodCertificate":
        doc = json.loads(text)
        return cls(
            k=int(doc["k"]),
            m=int(doc["m"]),
            period=int(doc["L"]),
            minimal=bool(doc["minimal"]),
            base=tuple(int(v) for v in doc["evidence"]["base"]),
            shifted=tuple(int(v) for v in doc["evidence"]["shifted"]),
            witnesses=tuple(DivisorWitness(**w) for w in doc.get("divisor_witnesses", [])),
            version=str(doc.get("tool_version", "")),
            note=str(doc.get("justification", CERTIFICATE_NOTE)),
        )

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.write_text(self.to_json())
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "PeriodCertificate":
        return cls.from_json(Path(path).read_text())


class PeriodComputationError(RuntimeError):
    """Order descent produced an exponent that is not a period."""


def _witness(params: PartitionParams, divisor: int, width: int) -> DivisorWitness:
    base = mod_values(params, 0, width).values
    shifted = mod_values(params, divisor, width).values
    diff = np.flatnonzero(base != shifted)
    if not diff.size:
        raise PeriodComputationError(f"L/p = {divisor} is a period; L is not minimal")
    i = int(diff[0])
    return DivisorWitness(divisor, i, int(base[i]), int(shifted[i]))


def order_of_q(divisor: ModPoly, multiple: FactoredInteger) -> FactoredInteger:
    """Multiplicative order of q modulo ``divisor`` given a known multiple."""
    if not pow_q_mod(divisor, multiple).is_one():
        raise PeriodComputationError(f"q^{multiple.value} is not 1; not a multiple of the order")
    n = multiple
    for p in multiple.primes:
        while n.as_dict().get(p, 0) and pow_q_mod(divisor, n.value // p).is_one():
            n = n.divide(p)
    return n


def make_certificate(k: int, m: int, period: int, minimal: bool = True) -> PeriodCertificate:
    params = PartitionParams(k, m)
    width = k * (k + 1) // 2
    base = mod_values(params, 0, width).values
    shifted = mod_values(params, period, width).values
    witnesses: tuple[DivisorWitness, ...] = ()
    if minimal:
        witnesses = tuple(_witness(params, period // p, width) for p in sorted(factorize(period))
                          if period > 1)
    return PeriodCertificate(k, m, period, minimal, tuple(map(int, base)),
                             tuple(map(int, shifted)), witnesses)


def minimal_period(k: int, m: int) -> tuple[int, PeriodCertificate]:
    """Least L with p(n + L, k) = p(n, k) mod m for all n, plus its certificate."""
    D = denominator_poly(k, m)
    order = order_of_q(D, structural_bound(k, m))
    L = order.value
    if not pow_q_mod(D, L).is_one():
        raise PeriodComputationError(f"descent result {L} fails q^L = 1")
    return L, make_certificate(k, m, L, minimal=True)


def gf2_period_formula(k: int) -> int:
    """Closed form for the minimal parity period, used only as a cross-check.

    Over GF(2), 1 - q^n = (1 + q^o)^(2^v) with n = 2^v * o, o odd, so the
    factor (1 + q) occurs c = sum_{n<=k} 2^v(n) times in D.  The order of q
    is then the least power of two >= c times lcm of the odd numbers <= k.
    """
    c = sum(n & -n for n in range(1, k + 1))
    odd_lcm = reduce(math.lcm, range(1, k + 1, 2), 1)
    return (1 << (c - 1).bit_length()) * odd_lcm


@dataclass(frozen=True)
class Verdict:
    ok: bool
    failure: Optional[str] = None

    def __bool__(self):
        return self.ok


def verify_certificate(cert: Union[PeriodCertificate, str, Path]) -> Verdict:
    """Re-check a certificate using only the residue engine and polyring.

    Accepts a certificate object or a path to its JSON document.
    """
    if not isinstance(cert, PeriodCertificate):
        cert = PeriodCertificate.load(cert)
    try:
        params = PartitionParams(cert.k, cert.m)
    except (ValueError, TypeError) as exc:
        return Verdict(False, f"bad parameters: {exc}")
    L = cert.period
    if L < 1:
        return Verdict(False, "period must be positive")
    w = cert.window
    if len(cert.base) != w or len(cert.shifted) != w:
        return Verdict(False, f"evidence windows must hold exactly {w} entries")

    base = mod_values(params, 0, w).values
    shifted = mod_values(params, L, w).values
    for label, claimed, actual in (("base", cert.base, base), ("shifted", cert.shifted, shifted)):
        bad = np.flatnonzero(np.asarray(claimed) != actual)
        if bad.size:
            return Verdict(False, f"{label} evidence wrong at n={int(bad[0])}")
    bad = np.flatnonzero(base != shifted)
    if bad.size:
        i = int(bad[0])
        return Verdict(False, f"p({i}) != p({i}+{L}) mod {cert.m}; {L} is not a period")

    if not cert.minimal:
        if cert.witnesses:
            return Verdict(False, "divisor witnesses present on a non-minimal claim")
        return Verdict(True)

    D = denominator_poly(cert.k, cert.m)
    expected = sorted(L // p for p in factorize(L)) if L > 1 else []
    if sorted(w_.divisor for w_ in cert.witnesses) != expected:
        return Verdict(False, f"witness divisors must be exactly {expected}")
    for wit in cert.witnesses:
        if pow_q_mod(D, wit.divisor).is_one():
            return Verdict(False, f"q^{wit.divisor} = 1: {wit.divisor} is a smaller period")
        if not 0 <= wit.index < w:
            return Verdict(False, f"witness index must lie in [0, {w})")
        # the witness must be the first disagreement, which makes it canonical
        lo = mod_values(params, 0, wit.index + 1).values
        hi = mod_values(params, wit.divisor, wit.index + 1).values
        first = np.flatnonzero(lo != hi)
        if not first.size or first[0] != wit.index:
            return Verdict(False, f"witness index for divisor {wit.divisor} is not the first mismatch")
        if (lo[-1], hi[-1]) != (wit.residue, wit.shifted_residue):
            return Verdict(False, f"witness residues for divisor {wit.divisor} are wrong")
    return Verdict(True)


# ---------------------------------------------------------------------------
# residual polynomial


@dataclass(frozen=True)
class ResidualPoly:
    """a(q) with sum p(n,k) q^n = a(q) / (1 - q^L) over GF(2)."""

    k: int
    period: int
    poly: ModPoly

    @property
    def degree(self) -> int:
        return int(self.poly.degree)

    @property
    def expected_degree(self) -> int:
        return self.period - self.k * (self.k + 1) // 2

    @property
    def degree_matches(self) -> bool:
        return self.degree == self.expected_degree


def residual_poly(k: int) -> ResidualPoly:
    L, _ = minimal_period(k, 2)
    D = denominator_poly(k, 2)
    target = ModPoly.from_bits((1 << L) | 1)
    a, rem = divrem(target, D)
    if not rem.is_zero():
        raise PeriodComputationError(f"1 - q^{L} is not divisible by D for k={k}")
    if mul(a, D) != target:
        raise PeriodComputationError("a(q) * D(q) does not reproduce 1 - q^L")
    return ResidualPoly(k, L, a)

"""Dense polynomials over Z/m and powers of q in (Z/m)[q]/(D).

Coefficients are stored lowest degree first.  For m = 2 the arithmetic
switches to a packed representation where a polynomial is a Python
integer (bit i = coefficient of q^i), so addition is XOR and
multiplication is a shift-and-XOR carry-less product.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

NEG_INF = float("-inf")


def _trim(coeffs: list[int]) -> tuple[int, ...]:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


@dataclass(frozen=True)
class ModPoly:
    """Polynomial with coefficients in Z/m, canonical (no trailing zeros)."""

    modulus: int
    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be >= 2")
        m = self.modulus
        object.__setattr__(self, "coeffs", _trim([int(c) % m for c in self.coeffs]))

    @classmethod
    def from_bits(cls, bits: int) -> "ModPoly":
        return cls(2, [int(c) for c in reversed(bin(bits)[2:])] if bits else [])

    @classmethod
    def monomial(cls, modulus: int, e: int, c: int = 1) -> "ModPoly":
        return cls(modulus, [0] * e + [c])

    @classmethod
    def one(cls, modulus: int) -> "ModPoly":
        return cls(modulus, [1])

    @property
    def degree(self) -> Union[int, float]:
        """Degree, or ``-inf`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def to_bits(self) -> int:
        if self.modulus != 2:
            raise ValueError("bit packing only applies to m = 2")
        return int("".join("1" if c else "0" for c in reversed(self.coeffs)) or "0", 2)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def __neg__(self):
        return ModPoly(self.modulus, [-c for c in self.coeffs])

    def __divmod__(self, other):
        return divrem(self, other)

    def __repr__(self):
        if not self.coeffs:
            return f"ModPoly(0 mod {self.modulus})"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "1" if i == 0 else ("q" if i == 1 else f"q^{i}")
            terms.append(mono if c == 1 and i else (str(c) if i == 0 else f"{c}*{mono}"))
        return f"ModPoly({' + '.join(terms)} mod {self.modulus})"


def _same_ring(a: ModPoly, b: ModPoly) -> int:
    if a.modulus != b.modulus:
        raise ValueError(f"modulus mismatch: {a.modulus} != {b.modulus}")
    return a.modulus


def add(a: ModPoly, b: ModPoly) -> ModPoly:
    m = _same_ring(a, b)
    n = max(len(a.coeffs), len(b.coeffs))
    return ModPoly(m, [a[i] + b[i] for i in range(n)])


def sub(a: ModPoly, b: ModPoly) -> ModPoly:
    m = _same_ring(a, b)
    n = max(len(a.coeffs), len(b.coeffs))
    return ModPoly(m, [a[i] - b[i] for i in range(n)])


# GF(2) kernels on packed integers

def clmul(a: int, b: int) -> int:
    """Carry-less product of two bit-packed GF(2) polynomials."""
    if a.bit_count() < b.bit_count():
        a, b = b, a
    out = 0
    i = 0
    while b:
        if b & 1:
            out ^= a << i
        b >>= 1
        i += 1
    return out


def gf2_divmod(a: int, d: int) -> tuple[int, int]:
    if d == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    dd = d.bit_length() - 1
    quo = 0
    while a.bit_length() - 1 >= dd:
        shift = a.bit_length() - 1 - dd
        quo |= 1 << shift
        a ^= d << shift
    return quo, a


def gf2_mulmod(a: int, b: int, d: int) -> int:
    return gf2_divmod(clmul(a, b), d)[1]


def mul_generic(a: ModPoly, b: ModPoly) -> ModPoly:
    """Schoolbook product over Z/m, without the GF(2) fast path."""
    m = _same_ring(a, b)
    if a.is_zero() or b.is_zero():
        return ModPoly(m)
    x, y = a.coeffs, b.coeffs
    if min(len(x), len(y)) * (m - 1) ** 2 < 2**62:
        prod = np.convolve(np.array(x, dtype=np.int64), np.array(y, dtype=np.int64)) % m
        return ModPoly(m, prod.tolist())
    out = [0] * (len(x) + len(y) - 1)
    for i, c in enumerate(x):
        if c:
            for j, e in enumerate(y):
                out[i + j] += c * e
    return ModPoly(m, out)


def mul(a: ModPoly, b: ModPoly) -> ModPoly:
    m = _same_ring(a, b)
    if m == 2:
        return ModPoly.from_bits(clmul(a.to_bits(), b.to_bits()))
    return mul_generic(a, b)


def divrem_generic(a: ModPoly, d: ModPoly) -> tuple[ModPoly, ModPoly]:
    """Long division over Z/m; the divisor's leading coefficient must be a unit."""
    m = _same_ring(a, d)
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    try:
        inv = pow(d.lead, -1, m)
    except ValueError:
        raise ValueError(f"leading coefficient {d.lead} is not invertible mod {m}") from None
    dd = len(d.coeffs) - 1
    rem = list(a.coeffs)
    if len(rem) <= dd:
        return ModPoly(m), a
    quo = [0] * (len(rem) - dd)
    dc = d.coeffs
    for i in range(len(rem) - 1, dd - 1, -1):
        c = rem[i] % m
        if c == 0:
            continue
        f = (c * inv) % m
        quo[i - dd] = f
        base = i - dd
        for t, e in enumerate(dc):
            rem[base + t] = (rem[base + t] - f * e) % m
    return ModPoly(m, quo), ModPoly(m, rem[:dd])


def divrem(a: ModPoly, d: ModPoly) -> tuple[ModPoly, ModPoly]:
    m = _same_ring(a, d)
    if m == 2:
        if d.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        q, r = gf2_divmod(a.to_bits(), d.to_bits())
        return ModPoly.from_bits(q), ModPoly.from_bits(r)
    return divrem_generic(a, d)


def denominator_poly(k: int, m: int) -> ModPoly:
    """The product (1 - q)(1 - q^2)...(1 - q^k) reduced mod m."""
    if k < 1:
        raise ValueError("k must be positive")
    out = ModPoly.one(m)
    for n in range(1, k + 1):
        out = mul(out, ModPoly(m, [1] + [0] * (n - 1) + [-1]))
    return out


# ---------------------------------------------------------------------------
# quotient ring


@dataclass(frozen=True)
class QuotientElement:
    """A residue class of (Z/m)[q] modulo ``divisor``, fully reduced."""

    divisor: ModPoly
    rep: ModPoly

    def __post_init__(self):
        if self.divisor.is_zero() or self.divisor.degree < 1:
            raise ValueError("quotient divisor must have positive degree")
        if self.rep.modulus != self.divisor.modulus:
            raise ValueError("modulus mismatch")
        if not self.rep.is_zero() and self.rep.degree >= self.divisor.degree:
            object.__setattr__(self, "rep", divrem(self.rep, self.divisor)[1])

    @property
    def modulus(self) -> int:
        return self.divisor.modulus

    def is_one(self) -> bool:
        return self.rep.coeffs == (1,)

    def __mul__(self, other: "QuotientElement") -> "QuotientElement":
        if other.divisor != self.divisor:
            raise ValueError("elements live in different quotient rings")
        return QuotientElement(self.divisor, mul(self.rep, other.rep))

    def __eq__(self, other):
        if not isinstance(other, QuotientElement):
            return NotImplemented
        return self.divisor == other.divisor and self.rep == other.rep

    def __hash__(self):
        return hash((self.divisor, self.rep))


def _exponent(e) -> int:
    value = getattr(e, "value", e)
    value = int(value)
    if value < 0:
        raise ValueError("exponent must be non-negative")
    return value


def _pow_q_gf2(d: int, e: int) -> int:
    dd = d.bit_length() - 1
    top = 1 << dd
    acc = 1
    for bit in bin(e)[2:]:
        acc = gf2_mulmod(acc, acc, d)
        if bit == "1":
            acc <<= 1
            if acc & top:
                acc ^= d
    return acc


def _times_q(coeffs: list[int], d: tuple[int, ...], inv_lead: int, m: int) -> list[int]:
    # multiply a reduced representative by q, then reduce once
    dd = len(d) - 1
    shifted = [0] + coeffs
    top = shifted[dd]
    if top:
        f = (top * inv_lead) % m
        shifted = [(shifted[i] - f * d[i]) % m for i in range(dd)]
    else:
        shifted = shifted[:dd]
    return shifted


def pow_q_mod(divisor: ModPoly, e) -> QuotientElement:
    """q^e in (Z/m)[q]/(divisor) by left-to-right square and multiply.

    ``e`` may be a plain integer or anything with an integer ``value``
    attribute (such as a factored integer).  Multiplication by q is a
    shift followed by a single reduction step, so each bit of ``e`` costs
    one modular squaring.
    """
    e = _exponent(e)
    m = divisor.modulus
    if divisor.is_zero() or divisor.degree < 1:
        raise ValueError("quotient divisor must have positive degree")
    try:
        inv = pow(divisor.lead, -1, m)
    except ValueError:
        raise ValueError(f"leading coefficient {divisor.lead} is not invertible mod {m}") from None
    if m == 2:
        return QuotientElement(divisor, ModPoly.from_bits(_pow_q_gf2(divisor.to_bits(), e)))
    dd = len(divisor.coeffs) - 1
    acc = ModPoly.one(m)
    for bit in bin(e)[2:] if e else "":
        acc = divrem_generic(mul_generic(acc, acc), divisor)[1]
        if bit == "1":
            coeffs = list(acc.coeffs) + [0] * (dd - len(acc.coeffs))
            acc = ModPoly(m, _times_q(coeffs, divisor.coeffs, inv, m))
    return QuotientElement(divisor, acc)


"""Exact signed base-Q fixed-point arithmetic with digit extraction.

A value is stored as ``mantissa * base**(-frac_digits)`` with an
arbitrary-precision integer mantissa, so sums and scalings never round and
carries are plain integer arithmetic.  Base-Q digits ("qits") are extracted
lazily from the mantissa; nothing in this module keeps a digit array.

The only operation that rounds is :func:`quantize_real`, which snaps a real
number to the nearest multiple of ``base**-frac_digits`` (ties away from
zero).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class QFixed:
    """An exact number ``mantissa * base**(-frac_digits)``."""

    base: int
    frac_digits: int
    mantissa: int

    def __post_init__(self):
        if self.base < 2:
            raise ValueError(f"base must be an integer >= 2, got {self.base!r}")
        if self.frac_digits < 0:
            raise ValueError(f"frac_digits must be >= 0, got {self.frac_digits!r}")

    def as_fraction(self) -> Fraction:
        return Fraction(self.mantissa, self.base**self.frac_digits)

    def __float__(self) -> float:
        return float(self.as_fraction())

    def __add__(self, other: "QFixed") -> "QFixed":
        return add(self, other)

    def __sub__(self, other: "QFixed") -> "QFixed":
        return sub(self, other)

    def __neg__(self) -> "QFixed":
        return QFixed(self.base, self.frac_digits, -self.mantissa)

    def __eq__(self, other) -> bool:
        # Value equality: [1 0]_8 with F=0 equals the same value at F=2.
        if not isinstance(other, QFixed):
            return NotImplemented
        if self.base != other.base:
            return False
        F, ma, mb = _aligned(self, other)
        return ma == mb

    def __hash__(self):
        return hash((self.base, self.as_fraction()))


def qfixed(Q: int, F: int, mantissa: int) -> QFixed:
    """Build the exact value ``mantissa * Q**-F``."""
    return QFixed(Q, F, mantissa)


def zero(Q: int, F: int = 0) -> QFixed:
    return QFixed(Q, F, 0)


def quantize_real(x, Q: int, F: int) -> QFixed:
    """Nearest multiple of ``Q**-F`` to x; ties round away from zero.

    The rounding decision is exact: x is converted to a Fraction first, so
    the result never depends on intermediate float error.
    """
    if isinstance(x, float) and not math.isfinite(x):
        raise ValueError(f"cannot quantize non-finite value {x!r}")
    if Q < 2 or F < 0:
        raise ValueError(f"invalid base/precision Q={Q!r}, F={F!r}")
    m = Fraction(x) * Q**F
    q, r = divmod(abs(m.numerator), m.denominator)
    if 2 * r >= m.denominator:
        q += 1
    return QFixed(Q, F, q if m >= 0 else -q)


def _aligned(a: QFixed, b: QFixed):
    if a.base != b.base:
        raise ValueError(f"incompatible operands: base {a.base} vs {b.base}")
    F = max(a.frac_digits, b.frac_digits)
    return (
        F,
        a.mantissa * a.base ** (F - a.frac_digits),
        b.mantissa * b.base ** (F - b.frac_digits),
    )


def add(a: QFixed, b: QFixed) -> QFixed:
    """Exact sum; frac_digits is the max of the operands'."""
    F, ma, mb = _aligned(a, b)
    return QFixed(a.base, F, ma + mb)


def sub(a: QFixed, b: QFixed) -> QFixed:
    F, ma, mb = _aligned(a, b)
    return QFixed(a.base, F, ma - mb)


def scale_by_power(a: QFixed, m: int) -> QFixed:
    """Multiply by ``Q**m`` exactly; shifts every digit up by m positions."""
    F = a.frac_digits - m
    if F >= 0:
        return QFixed(a.base, F, a.mantissa)
    return QFixed(a.base, 0, a.mantissa * a.base ** (-F))


def scale_by_int(a: QFixed, c: int) -> QFixed:
    """Exact integer multiple; digit carries happen implicitly."""
    return QFixed(a.base, a.frac_digits, a.mantissa * c)


def digit_at(a: QFixed, i: int) -> int:
    """The base-Q digit of a at position i (i=0 is the units digit).

    Defined for nonnegative values only; floor-division digits of negative
    numbers are meaningless for the alignment scheme, so callers clamp
    first.
    """
    if a.mantissa < 0:
        raise ValueError("digit_at is defined for nonnegative values only")
    e = a.frac_digits + i
    if e < 0:
        return 0
    return (a.mantissa // a.base**e) % a.base


def render(a: QFixed) -> str:
    """Human-readable digit string, e.g. ``[7 3.1 2]_8``."""
    Q, F = a.base, a.frac_digits
    mag = abs(a.mantissa)
    digits = []  # position -F upward
    while mag:
        mag, d = divmod(mag, Q)
        digits.append(d)
    n = max(len(digits), F + 1)
    digits += [0] * (n - len(digits))
    ints = " ".join(str(d) for d in reversed(digits[F:]))
    body = ints
    if F:
        fracs = " ".join(str(d) for d in reversed(digits[:F]))
        body = f"{ints}.{fracs}"
    sign = "-" if a.mantissa < 0 else ""
    return f"[{sign}{body}]_{Q}"


def decimal_str(a: QFixed) -> str:
    """Exact decimal string when the value has one, else 'num/den'."""
    fr = a.as_fraction()
    num, den = fr.numerator, fr.denominator
    d, shift2, shift5 = den, 0, 0
    while d % 2 == 0:
        d //= 2
        shift2 += 1
    while d % 5 == 0:
        d //= 5
        shift5 += 1
    if d != 1:
        return f"{num}/{den}"
    shift = max(shift2, shift5)
    scaled = abs(num) * 10**shift // den
    s = str(scaled).rjust(shift + 1, "0")
    sign = "-" if num < 0 else ""
    if shift:
        return f"{sign}{s[:-shift]}.{s[-shift:]}"
    return f"{sign}{s}"

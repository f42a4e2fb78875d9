"""Deterministic shift-XOR interference channel and the delay-slot analogy.

Each link shifts its input's bit levels down by a nonnegative amount and
the receiver sees the XOR of everything that lands on each level.  With
even shifts on desired links, odd shifts on interfering links, and
information placed only on even bit positions, the desired bits land on
even receive levels and all interference lands on odd levels, so decoding
is exact.

Receiver outputs keep the levels below position 0 (the ``low`` offset of
:class:`DetSymbol`), so a downshifted desired signal is recovered by
reading levels in the desired link's frame (``desired_shift``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence


@dataclass(frozen=True)
class DetSymbol:
    """A finite window of bit levels; bits[i] sits at level low + i."""

    bits: tuple[int, ...]
    low: int = 0

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("DetSymbol bits must be 0 or 1")

    @property
    def top(self) -> int:
        return self.low + len(self.bits) - 1

    def bit_at(self, level: int) -> int:
        i = level - self.low
        if 0 <= i < len(self.bits):
            return self.bits[i]
        return 0

    def to_int(self) -> int:
        v = 0
        for b in reversed(self.bits):
            v = (v << 1) | b
        return v

    @classmethod
    def from_int(cls, v: int, width: int, low: int = 0) -> "DetSymbol":
        return cls(tuple((v >> i) & 1 for i in range(width)), low)


@dataclass(frozen=True)
class DetSpec:
    """K users, N+1 bit levels per symbol, and a K x K shift matrix."""

    users: int
    width: int
    shifts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.users < 1:
            raise ValueError(f"users must be >= 1, got {self.users}")
        if self.width < 2:
            raise ValueError(f"width must be >= 2, got {self.width}")
        if len(self.shifts) != self.users or any(
            len(row) != self.users for row in self.shifts
        ):
            raise ValueError("shifts must be a users x users matrix")
        if any(s < 0 for row in self.shifts for s in row):
            raise ValueError("shifts must be nonnegative")

    @property
    def aligned(self) -> bool:
        """Even desired shifts and odd interfering shifts everywhere."""
        return all(
            self.shifts[k][j] % 2 == (0 if j == k else 1)
            for k in range(self.users)
            for j in range(self.users)
        )

    @classmethod
    def fig1(cls, users: int, width: int) -> "DetSpec":
        """Zero shift on desired links, one-bit shift on interfering links."""
        shifts = tuple(
            tuple(0 if j == k else 1 for j in range(users)) for k in range(users)
        )
        return cls(users, width, shifts)


def det_encode(info_bits: Sequence[int]) -> DetSymbol:
    """Place info bits on even levels 0, 2, ..., zero on all odd levels."""
    info = tuple(info_bits)
    if not info:
        raise ValueError("info_bits must be nonempty")
    if any(b not in (0, 1) for b in info):
        raise ValueError("info_bits must be 0 or 1")
    bits = [0] * (2 * len(info))
    bits[0::2] = info
    return DetSymbol(tuple(bits))


def det_output(spec: DetSpec, inputs: Sequence[DetSymbol]) -> list[DetSymbol]:
    """Mod-2 superposition per the shift matrix.

    Receiver k's window spans levels -max_j(shift[k][j]) .. width-1, so
    every transmitted bit lands inside it.
    """
    if len(inputs) != spec.users:
        raise ValueError(f"expected {spec.users} inputs, got {len(inputs)}")
    for x in inputs:
        if x.low != 0 or len(x.bits) != spec.width:
            raise ValueError("input symbols must have low=0 and spec width")
    xs = [x.to_int() for x in inputs]
    out = []
    for k in range(spec.users):
        drop = max(spec.shifts[k])
        acc = 0
        for j in range(spec.users):
            acc ^= xs[j] << (drop - spec.shifts[k][j])
        out.append(DetSymbol.from_int(acc, spec.width + drop, low=-drop))
    return out


def det_decode(
    y: DetSymbol, desired_shift: int = 0, num_bits: int | None = None
) -> tuple[int, ...]:
    """Read the even-level info bits in the desired link's frame.

    With a desired-link shift s, info bit m sits at receive level 2m - s.
    For the unshifted case this is just the even levels 0, 2, ..., N-1.
    """
    if num_bits is None:
        num_bits = (y.top + 1) // 2
    return tuple(y.bit_at(2 * m - desired_shift) for m in range(num_bits))


@dataclass
class DelayReport:
    """Per-receiver, per-slot arrival lists from the propagation-delay model."""

    horizon: int
    arrivals: list[list[list[tuple[int, object]]]]  # [receiver][slot] -> (user, payload)
    desired_alone_fraction: list[float] = field(default_factory=list)


def delay_sim(
    K: int,
    delays: Sequence[Sequence[int]],
    horizon: int,
    payloads: Sequence[Sequence[object]],
) -> DelayReport:
    """Slot-level simulation: transmitters emit only on even slots.

    Receiver k hears user j's m-th payload at slot 2m + delays[k][j].
    Reports, per receiver, the fraction of slots where the desired payload
    arrives with no interference present.
    """
    if len(delays) != K or any(len(row) != K for row in delays):
        raise ValueError("delays must be a K x K matrix")
    if any(d < 0 for row in delays for d in row):
        raise ValueError("delays must be nonnegative")
    if len(payloads) != K:
        raise ValueError(f"expected {K} payload streams, got {len(payloads)}")

    arrivals = [[[] for _ in range(horizon)] for _ in range(K)]
    for k, j in itertools.product(range(K), range(K)):
        d = delays[k][j]
        for m, payload in enumerate(payloads[j]):
            t = 2 * m + d
            if t < horizon:
                arrivals[k][t].append((j, payload))
    report = DelayReport(horizon, arrivals)
    for k in range(K):
        alone = sum(
            1
            for slot in arrivals[k]
            if slot and all(j == k for j, _ in slot)
        )
        report.desired_alone_fraction.append(alone / horizon)
    return report

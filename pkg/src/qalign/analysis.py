"""Power accounting, genie rates, and degrees-of-freedom estimation.

The transmit power P(N) = E[X^2] is computed as an exact rational, so the
scaling log_Q P(N) ~ 4N can be checked without floating-point overflow:
the base-Q log of the exact value is evaluated from integer bit lengths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .gauss import ChannelSpec, TrialStats, alphabet_bound, run_trials, subseed


def _log2_int(n: int) -> float:
    """log2 of a positive integer of any size."""
    if n <= 0:
        raise ValueError("log of non-positive integer")
    bl = n.bit_length()
    if bl <= 53:
        return math.log2(n)
    return (bl - 53) + math.log2(n >> (bl - 53))


def log_base(x: Fraction, Q: int) -> float:
    """log_Q of an exact positive rational, overflow-free."""
    return (_log2_int(x.numerator) - _log2_int(x.denominator)) / math.log2(Q)


def wilson_interval(errors: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score confidence interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    p = errors / trials
    denom = 1 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class PowerReport:
    N: int
    Q: int
    M: int
    exact_power: Fraction
    logq_power: float


def exact_power(N: int, Q: int, M: int) -> PowerReport:
    """Exact E[X^2] for N i.i.d. uniform qits on even positions.

    With e1 = E[qit] = (M-1)/2 and e2 = E[qit^2] = (M-1)(2M-1)/6:
    P = e2 * sum_i Q^{4i} + e1^2 * sum_{i != j} Q^{2i+2j}.
    """
    if M < 2 or N < 1:
        raise ValueError(f"need M >= 2 and N >= 1, got M={M}, N={N}")
    e1 = Fraction(M - 1, 2)
    e2 = Fraction((M - 1) * (2 * M - 1), 6)
    s2 = sum(Q ** (2 * i) for i in range(N))
    s4 = sum(Q ** (4 * i) for i in range(N))
    power = e2 * s4 + e1 * e1 * (s2 * s2 - s4)
    return PowerReport(N, Q, M, power, log_base(power, Q))


@dataclass(frozen=True)
class PowerScalingRow:
    N: int
    logq_power: float
    delta: float  # logq_power - 4N
    slope: float | None  # vs the previous N in the range


@dataclass(frozen=True)
class PowerScalingReport:
    rows: tuple[PowerScalingRow, ...]

    @property
    def max_abs_delta(self) -> float:
        return max(abs(r.delta) for r in self.rows)

    @property
    def delta_spread(self) -> float:
        deltas = [r.delta for r in self.rows]
        return max(deltas) - min(deltas)

    @property
    def final_slope(self) -> float:
        slopes = [r.slope for r in self.rows if r.slope is not None]
        if not slopes:
            raise ValueError("need at least two N values for a slope")
        return slopes[-1]


def power_scaling_check(Q: int, M: int, N_range: Sequence[int]) -> PowerScalingReport:
    """Deviation of log_Q P(N) from 4N and successive slopes over N_range."""
    Ns = sorted(N_range)
    if not Ns:
        raise ValueError("N_range must be nonempty")
    rows = []
    prev = None
    for N in Ns:
        lp = exact_power(N, Q, M).logq_power
        slope = None if prev is None else (lp - prev[1]) / (N - prev[0])
        rows.append(PowerScalingRow(N, lp, lp - 4 * N, slope))
        prev = (N, lp)
    return PowerScalingReport(tuple(rows))


@dataclass(frozen=True)
class RateReport:
    """Genie rates: positions whose raw error rate clears a threshold."""

    rates: tuple[float, ...]  # qits per channel use, per user
    threshold: float
    reliable_positions: tuple[tuple[int, ...], ...]


def genie_rate(stats: TrialStats, Q: int, K: int, threshold: float) -> RateReport:
    """R[k] = (#reliable even positions) * (1 - log_Q K) qits per use.

    Odd positions carry no information by construction and contribute 0.
    """
    if not 0 <= threshold < 1:
        raise ValueError(f"threshold must be in [0, 1), got {threshold}")
    per_qit = 1.0 - math.log(K) / math.log(Q)
    reliable = tuple(
        tuple(p for p in stats.positions if stats.error_rate(p, k) <= threshold)
        for k in range(stats.users)
    )
    rates = tuple(len(r) * per_qit for r in reliable)
    return RateReport(rates, threshold, reliable)


@dataclass(frozen=True)
class DofEstimate:
    dof_hat: float
    dof_theory: float
    epsilon_achieved: float


def dof_theory(K: int, Q: int) -> float:
    """The finite-Q degrees-of-freedom target (K/2)(1 - log_Q K)."""
    return (K / 2) * (1.0 - math.log(K) / math.log(Q))


def dof_estimate(rates: RateReport, power: PowerReport, K: int) -> DofEstimate:
    """dof_hat = sum_k R[k] / (log_Q P / 2), in the paper's base-Q units."""
    if power.logq_power <= 0:
        raise ValueError("power must exceed unity for a DoF estimate")
    dof_hat = sum(rates.rates) / (0.5 * power.logq_power)
    theory = dof_theory(K, power.Q)
    return DofEstimate(dof_hat, theory, 1.0 - dof_hat / (K / 2))


@dataclass(frozen=True)
class SweepRow:
    N: int
    Q: int
    K: int
    logq_power: float
    sum_rate_qits: float
    dof_hat: float
    dof_theory: float
    threshold: float
    trials: int
    seed: int


def sweep(
    spec: ChannelSpec,
    N_list: Sequence[int],
    trials: int,
    seed: int,
    threshold: float,
) -> list[SweepRow]:
    """One Monte Carlo + exact-power row per block length N."""
    rows = []
    for N in N_list:
        stats = run_trials(spec, N, trials, subseed(seed, "sweep", N))
        power = exact_power(N, spec.base, alphabet_bound(spec))
        rates = genie_rate(stats, spec.base, spec.users, threshold)
        est = dof_estimate(rates, power, spec.users)
        rows.append(
            SweepRow(
                N=N,
                Q=spec.base,
                K=spec.users,
                logq_power=power.logq_power,
                sum_rate_qits=sum(rates.rates),
                dof_hat=est.dof_hat,
                dof_theory=est.dof_theory,
                threshold=threshold,
                trials=trials,
                seed=seed,
            )
        )
    return rows

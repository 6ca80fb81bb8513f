"""Failure-rate inference and composition for reliability claims.

The centerpiece is conservative Bayesian inference: given only partial
prior knowledge (the failure rate is below g with probability theta,
and never below pl), the confidence that the rate is below a claimed
bound p after n failure-free demands is the worst case over every
prior satisfying that knowledge. The worst case is attained within a
two-atom family, searched here on a log-spaced grid.

Also here: the plain Bayesian posterior for a fully known discrete
prior, zero-failure sample-size bounds with and without a prior,
majority-verdict composition of independent checkers, and
disengagement-rate statistics with a Poisson upper bound.

All likelihood arithmetic runs in log space so tiny rates and large
trial counts do not underflow.
"""

from __future__ import annotations

import math
import statistics
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np

DEFAULT_GRID = 400
REQUIRED_N_CAP = 10**10


@dataclass(frozen=True, eq=False)
class DiscretePrior:
    """Probability masses on a finite set of failure rates.

    Atoms are sorted ascending and must be distinct, strictly inside
    (0, 1); masses are positive and sum to one.
    """

    atoms: tuple[float, ...]
    masses: tuple[float, ...]

    def __post_init__(self) -> None:
        pairs = sorted(zip(self.atoms, self.masses))
        atoms = tuple(float(x) for x, _ in pairs)
        masses = tuple(float(m) for _, m in pairs)
        if not atoms:
            raise ValueError("prior needs at least one atom")
        if len(set(atoms)) != len(atoms):
            raise ValueError("prior atoms must be distinct")
        for x in atoms:
            if not 0.0 < x < 1.0:
                raise ValueError(f"failure-rate atom {x!r} outside (0, 1)")
        for m in masses:
            if not 0.0 < m <= 1.0:
                raise ValueError(f"prior mass {m!r} outside (0, 1]")
        if abs(sum(masses) - 1.0) > 1e-9:
            raise ValueError("prior masses must sum to 1")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "masses", masses)


@dataclass(frozen=True, slots=True)
class PriorConstraint:
    """Partial prior knowledge: Pr(rate <= bound) = theta, and the
    rate is never below lower_bound."""

    theta: float
    bound: float
    lower_bound: float

    def __post_init__(self) -> None:
        if not 0.0 < self.theta < 1.0:
            raise ValueError("theta must lie strictly between 0 and 1")
        if not 0.0 < self.bound < 1.0:
            raise ValueError("bound must lie strictly between 0 and 1")
        if not 0.0 < self.lower_bound <= self.bound:
            raise ValueError("lower_bound must lie in (0, bound]")


@dataclass(frozen=True, slots=True)
class TestEvidence:
    """k failures observed over n demands (miles, missions, trials).

    n = 0 is allowed and means no testing yet.
    """

    failures: int
    demands: int

    def __post_init__(self) -> None:
        if self.failures < 0 or self.demands < 0:
            raise ValueError("counts must be non-negative")
        if self.failures > self.demands:
            raise ValueError("more failures than demands")


@dataclass(frozen=True, slots=True)
class RateBound:
    rate_per_million: float
    confidence: float


def _log_likelihoods(atoms: np.ndarray, evidence: TestEvidence) -> np.ndarray:
    k, n = evidence.failures, evidence.demands
    return k * np.log(atoms) + (n - k) * np.log1p(-atoms)


def _logsumexp(values: np.ndarray) -> float:
    peak = np.max(values)
    if peak == -math.inf:
        return -math.inf
    return float(peak + np.log(np.sum(np.exp(values - peak))))


def cbi_posterior(prior: DiscretePrior, evidence: TestEvidence, p: float) -> float:
    """Posterior probability that the failure rate is at most p."""
    atoms = np.asarray(prior.atoms)
    weights = np.log(np.asarray(prior.masses)) + _log_likelihoods(atoms, evidence)
    total = _logsumexp(weights)
    if total == -math.inf:
        raise ValueError("all posterior weight underflowed")
    below = weights[atoms <= p]
    if below.size == 0:
        return 0.0
    return float(math.exp(_logsumexp(below) - total))


def cbi_conservative(
    constraint: PriorConstraint,
    evidence: TestEvidence,
    p: float,
    grid: int = DEFAULT_GRID,
) -> float:
    """Worst-case posterior confidence that the rate is at most p.

    Minimises over two-atom priors honouring the constraint: one atom
    carrying mass theta anywhere in [lower_bound, bound], the other
    carrying the rest anywhere above the bound. Atom positions are
    searched on log-spaced grids of the given resolution per axis.
    """
    if grid < 2:
        raise ValueError("grid resolution must be at least 2")
    if not constraint.bound <= p < 1.0:
        raise ValueError(
            "claimed bound p must lie in [bound, 1); a claim tighter than "
            "the prior knowledge is not supported"
        )
    low = np.geomspace(constraint.lower_bound, constraint.bound, grid)
    high = np.geomspace(constraint.bound, 1.0, grid + 2)[1:-1]
    log_theta = math.log(constraint.theta)
    log_rest = math.log1p(-constraint.theta)
    w_low = log_theta + _log_likelihoods(low, evidence)
    w_high = log_rest + _log_likelihoods(high, evidence)
    ## a pair with both atoms at or below p has posterior 1 and cannot
    ## be the minimum, so only upper atoms beyond p matter
    w_high_beyond = w_high[high > p]
    if w_high_beyond.size == 0:
        return 1.0
    with np.errstate(over="ignore"):
        ratio = np.exp(w_high_beyond[None, :] - w_low[:, None])
    posteriors = 1.0 / (1.0 + ratio)
    return float(np.min(posteriors))


def required_n(
    constraint: PriorConstraint,
    p: float,
    target_confidence: float,
    grid: int = DEFAULT_GRID,
) -> int:
    """Failure-free demands needed to reach the target confidence.

    Exploits that the conservative posterior only grows with n under
    zero failures: doubles an upper bracket, then bisects. Raises if
    the target is still out of reach at 10^10 demands.
    """
    if not 0.0 < target_confidence < 1.0:
        raise ValueError("target confidence must lie strictly between 0 and 1")

    def confidence_at(n: int) -> float:
        return cbi_conservative(constraint, TestEvidence(0, n), p, grid)

    if confidence_at(0) >= target_confidence:
        return 0
    hi = 1
    while confidence_at(hi) < target_confidence:
        hi *= 2
        if hi > REQUIRED_N_CAP:
            raise ValueError(
                f"target confidence unreachable within {REQUIRED_N_CAP} demands"
            )
    lo = hi // 2  # confidence_at(lo) known insufficient
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if confidence_at(mid) >= target_confidence:
            hi = mid
        else:
            lo = mid
    return hi


def no_prior_required_n(p: float, confidence: float) -> int:
    """Classical zero-failure bound: smallest n with
    (1 - p)^n <= 1 - confidence."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie strictly between 0 and 1")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must lie strictly between 0 and 1")
    return math.ceil(math.log1p(-confidence) / math.log1p(-p))


def majority_vote_performance(voters: int, per_voter: float) -> float:
    """Probability that an odd panel of independent equally good
    voters returns the right majority verdict.

    Independence is an assumption the caller must justify; correlated
    voters can do much worse.
    """
    if voters < 1 or voters % 2 == 0:
        raise ValueError("voter count must be odd and positive")
    if not 0.0 <= per_voter <= 1.0:
        raise ValueError("per-voter performance must lie in [0, 1]")
    need = voters // 2 + 1
    return float(
        sum(
            math.comb(voters, i) * per_voter**i * (1.0 - per_voter) ** (voters - i)
            for i in range(need, voters + 1)
        )
    )


def disengagement_rate(events: int, miles: float) -> float:
    """Raw event rate per million miles."""
    if events < 0:
        raise ValueError("event count must be non-negative")
    if miles <= 0:
        raise ValueError("miles must be positive")
    return events / miles * 1e6


def poisson_rate_upper_bound(events: int, miles: float, confidence: float) -> RateBound:
    """One-sided upper confidence bound on the event rate per million
    miles, from the Poisson count model.

    Uses the chi-square quantile with 2(events+1) degrees of freedom,
    approximated by the Wilson-Hilferty cube formula (accurate to a
    fraction of a percent at these degrees of freedom).
    """
    if events < 0:
        raise ValueError("event count must be non-negative")
    if miles <= 0:
        raise ValueError("miles must be positive")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must lie strictly between 0 and 1")
    df = 2 * (events + 1)
    z = statistics.NormalDist().inv_cdf(confidence)
    spread = 2.0 / (9.0 * df)
    quantile = df * (1.0 - spread + z * math.sqrt(spread)) ** 3
    return RateBound(quantile / 2.0 / miles * 1e6, confidence)


__all__ = [
    "DEFAULT_GRID",
    "REQUIRED_N_CAP",
    "DiscretePrior",
    "PriorConstraint",
    "TestEvidence",
    "RateBound",
    "cbi_posterior",
    "cbi_conservative",
    "required_n",
    "no_prior_required_n",
    "majority_vote_performance",
    "disengagement_rate",
    "poisson_rate_upper_bound",
]

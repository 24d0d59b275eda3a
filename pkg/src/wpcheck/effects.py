"""Voter effects, outcome/vote covariances and aggregation reports.

The effect of voter i is

    e_i = sum_j [ P(f = j | X_i = j) - P(f = j | X_i != j) ]

with j over all k alternatives. Undefined conditionals are handled per
term: a term with P(X_i = j) = 0 contributes 0 (the voter never backs j);
when P(X_i = j) = 1 the missing second conditional is taken as 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .dist import (
    Distribution,
    ProductDistribution,
    expected_weights,
    format_rational,
    iter_support,
    marginal_matrix,
    sample_many,
)
from .errors import NotAWeightedPlurality, TooLarge, WPCheckError
from .scf import TABLE_GUARD, WeightedPluralityRule, normalize_weights

ZERO = Fraction(0)
CHUNK = 1 << 15


class AggregationViolation(WPCheckError):
    """delta * P(f not in A) exceeded the covariance sum. Signals a bug."""


@dataclass
class MonteCarlo:
    samples: int
    seed: int

    def __post_init__(self):
        if self.samples <= 0:
            raise ValueError("samples must be positive")


@dataclass
class EffectVector:
    values: list
    stderr: list[float] | None = None
    method: str = "exact"
    samples: int | None = None
    seed: int | None = None

    def to_json(self) -> dict:
        if self.method == "exact":
            return {"method": "exact", "values": [format_rational(v) for v in self.values]}
        return {
            "method": "monte-carlo",
            "samples": self.samples,
            "seed": self.seed,
            "values": [float(v) for v in self.values],
            "stderr": [float(s) for s in self.stderr],
        }


@dataclass
class JointLaw:
    """Exact joint law of (X_i, f(X)): ``joint[i][c][j] = P(X_i = c, f = j)``."""

    joint: list
    outcome: list  # P(f = j)

    @property
    def n(self):
        return len(self.joint)

    @property
    def k(self):
        return len(self.outcome)

    def vote_marginal(self, i, c):
        return sum(self.joint[i][c], ZERO)

    def covariance(self, i, j):
        """Cov(1{f = j}, 1{X_i = j})."""
        return self.joint[i][j][j] - self.outcome[j] * self.vote_marginal(i, j)

    def effect(self, i):
        total = ZERO
        for j in range(self.k):
            rho = self.vote_marginal(i, j)
            if rho == 0:
                continue
            hit = self.joint[i][j][j]
            term = hit / rho
            if rho != 1:
                term -= (self.outcome[j] - hit) / (1 - rho)
            total += term
        return total


def _check_dims(f, P):
    if f.k != P.k or f.n != P.n:
        raise ValueError(f"function is on [{f.k}]^{f.n} but distribution on [{P.k}]^{P.n}")


def joint_law(f, P: Distribution, guard: int = TABLE_GUARD) -> JointLaw:
    """Enumerate the support of P exactly. ``f`` is a table or a rule with ``winners``."""
    _check_dims(f, P)
    k, n = P.k, P.n
    if isinstance(P, ProductDistribution) and k**n > guard:
        raise TooLarge(f"k^n = {k**n} exceeds exact enumeration guard {guard}")
    support = list(iter_support(P, guard))
    digits = np.array([x for x, _ in support], dtype=np.int64).reshape(len(support), n)
    winners = f.winners(digits).tolist()
    joint = [[[ZERO] * k for _ in range(k)] for _ in range(n)]
    outcome = [ZERO] * k
    for (x, p), j in zip(support, winners):
        outcome[j] += p
        for i, c in enumerate(x):
            joint[i][c][j] += p
    return JointLaw(joint, outcome)


def _effect_coefficients(rho: Sequence[float], k: int) -> np.ndarray:
    """L[c, j] such that e_i = sum_{c,j} L[c, j] P(f = j | X_i = c)."""
    L = np.zeros((k, k))
    for j in range(k):
        if rho[j] == 0:
            continue
        L[j, j] = 1.0
        if rho[j] < 1:
            for c in range(k):
                if c != j:
                    L[c, j] = -rho[c] / (1.0 - rho[j])
    return L


def _stratified_estimate(counts: np.ndarray, rho: Sequence[float]) -> tuple[float, float]:
    """Effect estimate and standard error from a (k, k) table of (vote, outcome) counts."""
    L = _effect_coefficients(rho, len(rho))
    est, var = 0.0, 0.0
    for c in range(len(rho)):
        nc = counts[c].sum()
        if nc == 0 or not L[c].any():
            continue
        pi = counts[c] / nc
        mean = float(L[c] @ pi)
        est += mean
        var += (float((L[c] ** 2) @ pi) - mean**2) / nc
    return est, math.sqrt(max(var, 0.0))


def _monte_carlo_effects(f, P: Distribution, mc: MonteCarlo) -> EffectVector:
    """Stratify on X_i with the exact vote marginals as strata weights.

    Given the stratum counts, the estimate is linear in independent
    multinomial proportions, which gives the standard error in closed form.
    """
    _check_dims(f, P)
    k, n = P.k, P.n
    rng = np.random.default_rng(mc.seed)
    counts = np.zeros(n * k * k, dtype=np.int64)
    offsets = (np.arange(n) * k * k)[None, :]
    done = 0
    while done < mc.samples:
        size = min(CHUNK, mc.samples - done)
        X = sample_many(P, rng, size)
        win = f.winners(X)
        codes = offsets + X * k + win[:, None]
        counts += np.bincount(codes.ravel(), minlength=n * k * k)
        done += size
    counts = counts.reshape(n, k, k)
    rho_all = [[float(p) for p in row] for row in marginal_matrix(P)]
    values, errors = [], []
    for i in range(n):
        est, se = _stratified_estimate(counts[i], rho_all[i])
        values.append(est)
        errors.append(se)
    return EffectVector(values, errors, "monte-carlo", mc.samples, mc.seed)


def effect_vector(f, P: Distribution, method="exact") -> EffectVector:
    """Effects of every voter, exactly (``method="exact"``) or by ``MonteCarlo``."""
    if isinstance(method, MonteCarlo):
        return _monte_carlo_effects(f, P, method)
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")
    law = joint_law(f, P)
    return EffectVector([law.effect(i) for i in range(P.n)])


def covariance_matrix(f, P: Distribution) -> list[list[Fraction]]:
    """``cov[i][j] = Cov(1{f = j}, 1{X_i = j})``, exactly."""
    law = joint_law(f, P)
    return [[law.covariance(i, j) for j in range(P.k)] for i in range(P.n)]


def covariance_sum(f, P: Distribution, w: Sequence) -> Fraction:
    """sum_{i,j} w_i Cov(1{f = j}, 1{X_i = j})."""
    w = [Fraction(v) for v in w]
    cov = covariance_matrix(f, P)
    return sum((w[i] * sum(row, ZERO) for i, row in enumerate(cov)), ZERO)


@dataclass
class AggregationReport:
    A: tuple[int, ...]
    delta: Fraction
    p_not_a: Fraction
    cov_sum: Fraction
    effect_bound: Fraction
    effects: list[Fraction]
    covariances_nonnegative: bool
    chain_holds: bool | None
    bound_holds: bool | None
    expected_weights: list[Fraction] = field(default_factory=list)

    @property
    def vacuous(self) -> bool:
        return self.delta <= 0

    @property
    def ok(self) -> bool:
        """All applicable inequalities hold (vacuous reports pass)."""
        if self.vacuous:
            return True
        if not self.chain_holds:
            return False
        return self.bound_holds or not self.covariances_nonnegative

    def to_json(self) -> dict:
        fr = format_rational
        return {
            "A": list(self.A),
            "delta": fr(self.delta),
            "expectedWeights": [fr(v) for v in self.expected_weights],
            "pNotA": fr(self.p_not_a),
            "covSum": fr(self.cov_sum),
            "effectBound": fr(self.effect_bound),
            "effects": [fr(v) for v in self.effects],
            "covariancesNonnegative": self.covariances_nonnegative,
            "inequalities": {
                "deltaTimesPNotA_le_covSum": self.chain_holds,
                "pNotA_le_effectBound_over_delta": self.bound_holds,
            },
            "vacuous": self.vacuous,
            "ok": self.ok,
        }


def aggregation_report(f, w: Sequence, P: Distribution, A) -> AggregationReport:
    """Exact check of the aggregation chain for a weighted plurality f with weights w.

    With delta = min_{a in A} E W_a - max_{b not in A} E W_b > 0,
    delta * P(f not in A) <= sum_{i,j} w_i Cov(1{f=j}, 1{X_i=j}) always holds
    for a weighted plurality and is asserted. The effect bound
    P(f not in A) <= sum_i w_i e_i / (4 delta) is reported.
    """
    from .decide import verify_weights

    w = normalize_weights(w, f.n)
    A = tuple(sorted({int(a) for a in A}))
    if not A or len(A) >= f.k or any(not 0 <= a < f.k for a in A):
        raise ValueError(f"A must be a nonempty proper subset of [0, {f.k})")
    if not verify_weights(f, w):
        raise NotAWeightedPlurality("weights do not realize the function as a weighted plurality")
    _check_dims(f, P)

    ew = expected_weights(P, w)
    rest = [j for j in range(f.k) if j not in A]
    delta = min(ew[a] for a in A) - max(ew[b] for b in rest)

    law = joint_law(f, P)
    p_not_a = sum((law.outcome[j] for j in rest), ZERO)
    cov = [[law.covariance(i, j) for j in range(f.k)] for i in range(f.n)]
    cov_sum = sum((w[i] * sum(cov[i], ZERO) for i in range(f.n)), ZERO)
    effects = [law.effect(i) for i in range(f.n)]
    effect_bound = sum((w[i] * effects[i] for i in range(f.n)), ZERO) / 4
    nonneg = all(v >= 0 for row in cov for v in row)

    chain = bound = None
    if delta > 0:
        chain = delta * p_not_a <= cov_sum
        if not chain:
            raise AggregationViolation(
                f"delta*P(f not in A) = {delta * p_not_a} exceeds covariance sum {cov_sum}"
            )
        bound = p_not_a <= effect_bound / delta
    return AggregationReport(A, delta, p_not_a, cov_sum, effect_bound, effects, nonneg, chain, bound, ew)


def biased_row(k: int, delta, favored: int = 1) -> list[Fraction]:
    """Single-voter law where ``favored`` leads every other alternative by exactly delta."""
    delta = Fraction(delta)
    rest = (1 - delta) / k
    if rest < 0:
        raise ValueError("delta too large for a probability vector")
    row = [rest] * k
    row[favored] = rest + delta
    return row


def family_row(k: int, family: str, delta=None) -> list[Fraction]:
    if family == "uniform":
        return [Fraction(1, k)] * k
    if family == "biased":
        if delta is None:
            raise ValueError("biased family needs delta")
        return biased_row(k, delta)
    raise ValueError(f"unknown family {family!r}")


def iid_plurality_effect(k: int, n: int, row: Sequence) -> Fraction:
    """Exact effect of voter 1 for unweighted first-match plurality under iid votes.

    Sums over vote counts of the other n - 1 voters. When voter 1 is not in
    the tied set, exchangeability makes each tied alternative equally likely
    to be the first-matching vote.
    """
    row = [Fraction(p) for p in row]
    if len(row) != k:
        raise ValueError("row length must equal k")
    # cond[c][j] = P(f = j | X_1 = c)
    cond = [[ZERO] * k for _ in range(k)]
    m = n - 1
    for counts in _compositions(m, k):
        coef = math.factorial(m)
        for c in counts:
            coef //= math.factorial(c)
        prob = Fraction(coef)
        for p, c in zip(row, counts):
            if c:
                prob *= p**c
        if prob == 0:
            continue
        for first in range(k):
            total = list(counts)
            total[first] += 1
            top = max(total)
            tied = [j for j in range(k) if total[j] == top]
            if first in tied:
                cond[first][first] += prob
            else:
                share = prob / len(tied)
                for j in tied:
                    cond[first][j] += share
    total = ZERO
    for j in range(k):
        rho = row[j]
        if rho == 0:
            continue
        term = cond[j][j]
        if rho != 1:
            other = sum((row[c] * cond[c][j] for c in range(k) if c != j), ZERO)
            term -= other / (1 - rho)
        total += term
    return total


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


@dataclass
class ExperimentPoint:
    n: int
    estimate: float
    stderr: float


def effect_scaling_experiment(
    k: int,
    family: str,
    n_list: Sequence[int],
    samples: int,
    seed: int,
    delta=None,
    weights_for=None,
) -> list[ExperimentPoint]:
    """Monte Carlo effect of voter 1 for plurality under iid votes, one point per n.

    ``weights_for(n)`` may supply weights; unweighted plurality otherwise.
    Each n gets its own stream seeded from (seed, n).
    """
    if list(n_list) != sorted(n_list):
        raise ValueError("n_list must be ascending")
    row = family_row(k, family, delta)
    out = []
    for n in n_list:
        rule = (
            WeightedPluralityRule.unweighted(k, n)
            if weights_for is None
            else WeightedPluralityRule(k, weights_for(n))
        )
        P = ProductDistribution.iid(row, n)
        est, se = _first_voter_effect(rule, P, samples, np.random.default_rng([seed, n]))
        out.append(ExperimentPoint(n, est, se))
    return out


def _first_voter_effect(rule, P, samples, rng):
    k = P.k
    counts = np.zeros((k, k), dtype=np.int64)
    done = 0
    while done < samples:
        size = min(CHUNK, samples - done)
        X = sample_many(P, rng, size)
        win = rule.winners(X)
        counts += np.bincount(X[:, 0] * k + win, minlength=k * k).reshape(k, k)
        done += size
    return _stratified_estimate(counts, [float(p) for p in P.marginals[0]])


def experiment_csv(points: Sequence[ExperimentPoint]) -> str:
    lines = ["n,estimate,stderr"]
    lines += [f"{p.n},{p.estimate!r},{p.stderr!r}" for p in points]
    return "\n".join(lines) + "\n"

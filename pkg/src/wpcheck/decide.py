"""Weighted-plurality recognition by linear programming.

For a label pair (a, b) the primal LP is

    maximize  t+ - t-
    s.t.      sum_i w_i = 1
              sum_{i: x_i=a} w_i - sum_{i: x_i=b} w_i - g_x - (t+ - t-) = 0   for f(x) = a
              all variables >= 0

and f is a weighted plurality (for neutral f) iff the optimum is >= 0.
A negative optimum yields, through the constraint multipliers q_x, a
distribution supported on f^-1(a) under which every voter is strictly
more likely to vote b than a. General mode adds one row per (x, b) with
b != f(x), which is the weighted-plurality condition verbatim.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .dist import ExplicitDistribution, distribution_to_json, format_rational, marginal_matrix
from .errors import DegenerateFunction, NotNeutral, SolverInconsistency
from .lp import StandardFormLP, Status, solve
from .scf import (
    SocialChoiceFunction,
    _integer_weights,
    all_profiles,
    is_neutral,
    profile_from_index,
    profile_index,
    weight_scores,
)

ONE = Fraction(1)


class Verdict(enum.Enum):
    WP = "wp"
    NOT_WP = "not-wp"


def canonical_labels(k: int) -> tuple[int, int]:
    return (1, 2) if k >= 3 else (1, 0)


@dataclass
class PluralityLP(StandardFormLP):
    """Standard-form LP plus the (profile index, rival) key behind each comparison row."""

    keys: list = field(default_factory=list)
    labels: tuple[int, int] | None = None


def _comparison_keys(f: SocialChoiceFunction, labels):
    if labels is None:
        return [(int(idx), b) for idx in range(f.table.size) for b in range(f.k) if b != f.table[idx]]
    a, b = _check_labels(f, labels)
    pre = f.preimage(a)
    if pre.size == 0:
        raise DegenerateFunction(f"no profile maps to alternative {a}")
    return [(int(idx), b) for idx in pre]


def _check_labels(f, labels):
    a, b = (int(v) for v in labels)
    if a == b or not (0 <= a < f.k and 0 <= b < f.k):
        raise ValueError(f"labels must be two distinct alternatives in [0, {f.k}), got {labels}")
    return a, b


def _row_coeffs(x, winner, rival, n):
    return [int(x[i] == winner) - int(x[i] == rival) for i in range(n)]


def build_primal(f: SocialChoiceFunction, labels: Sequence[int] | None) -> PluralityLP:
    """Primal LP for one label pair, or for all pairs when ``labels`` is None."""
    keys = _comparison_keys(f, labels)
    n, nk = f.n, len(keys)
    m = 2 + n + nk
    c = [ONE, -ONE] + [Fraction(0)] * (n + nk)
    A = [[0, 0] + [1] * n + [0] * nk]
    for r, (idx, rival) in enumerate(keys):
        x = profile_from_index(idx, f.k, n)
        row = [-1, 1] + _row_coeffs(x, int(f.table[idx]), rival, n) + [0] * nk
        row[2 + n + r] = -1
        A.append(row)
    var_names = ["t+", "t-"] + [f"w{i + 1}" for i in range(n)] + [f"g[{_key_name(k_, labels)}]" for k_ in keys]
    con_names = ["sum_w"] + [_key_name(k_, labels) for k_ in keys]
    assert len(var_names) == m
    return PluralityLP(
        c, A, [ONE] + [0] * nk, var_names, con_names, keys=keys,
        labels=None if labels is None else tuple(labels),
    )


def _key_name(key, labels):
    idx, rival = key
    return f"x={idx}" if labels is not None else f"x={idx},b={rival}"


def build_dual(f: SocialChoiceFunction, labels: Sequence[int] | None) -> PluralityLP:
    """Dual LP in standard form.

    Variables a+, a-, p_x = -q_x >= 0 and one slack per voter:

        maximize  -(a+ - a-)
        s.t.      sum_x p_x = 1
                  (a+ - a-) - sum_x p_x (1{x_i = a} - 1{x_i = b}) - s_i = 0   for each voter i

    so the dual value a* is minus the reported objective.
    """
    keys = _comparison_keys(f, labels)
    n, nk = f.n, len(keys)
    c = [-ONE, ONE] + [Fraction(0)] * (nk + n)
    A = [[0, 0] + [1] * nk + [0] * n]
    cols = []
    for idx, rival in keys:
        x = profile_from_index(idx, f.k, n)
        cols.append(_row_coeffs(x, int(f.table[idx]), rival, n))
    for i in range(n):
        row = [1, -1] + [-col[i] for col in cols] + [0] * n
        row[2 + nk + i] = -1
        A.append(row)
    var_names = ["a+", "a-"] + [f"p[{_key_name(k_, labels)}]" for k_ in keys] + [f"s{i + 1}" for i in range(n)]
    con_names = ["sum_p"] + [f"voter{i + 1}" for i in range(n)]
    return PluralityLP(
        c, A, [ONE] + [0] * n, var_names, con_names, keys=keys,
        labels=None if labels is None else tuple(labels),
    )


def primal_value(f, labels) -> Fraction:
    sol = solve(build_primal(f, labels))
    if sol.status is not Status.OPTIMAL:
        raise SolverInconsistency(f"primal LP reported {sol.status.value}")
    return sol.objective


def dual_value(f, labels) -> Fraction:
    sol = solve(build_dual(f, labels))
    if sol.status is not Status.OPTIMAL:
        raise SolverInconsistency(f"dual LP reported {sol.status.value}")
    return -sol.objective


@dataclass(frozen=True)
class RivalWitness:
    """Distribution over (profile, rival) pairs with every voter more likely to
    back the rival than the winner. Certifies failure of the weighted-plurality
    condition when no single label pair does."""

    k: int
    n: int
    support: dict

    def to_json(self):
        return {
            "type": "rival",
            "support": [
                {"x": list(x), "rival": b, "p": format_rational(p)}
                for (x, b), p in sorted(self.support.items())
            ],
        }


@dataclass
class DecisionOutcome:
    verdict: Verdict
    optimum: Fraction
    labels: tuple[int, int] | None
    mode: str
    weights: tuple[Fraction, ...] | None = None
    witness: ExplicitDistribution | RivalWitness | None = None

    @property
    def is_weighted_plurality(self) -> bool:
        return self.verdict is Verdict.WP

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict.value,
            "optimum": format_rational(self.optimum),
            "labels": list(self.labels) if self.labels is not None else None,
            "mode": self.mode,
        }
        if self.weights is not None:
            out["weights"] = [format_rational(w) for w in self.weights]
        if self.witness is not None:
            if isinstance(self.witness, RivalWitness):
                out["witness"] = self.witness.to_json()
            else:
                out["witness"] = distribution_to_json(self.witness)
        return out


def verify_weights(f: SocialChoiceFunction, w: Sequence) -> bool:
    """True iff the winner's weight is >= every alternative's weight at every profile."""
    try:
        w = [Fraction(v) for v in w]
    except (TypeError, ValueError):
        return False
    if len(w) != f.n or any(v < 0 for v in w) or sum(w) != 1:
        return False
    iw = _integer_weights(w)
    digits = all_profiles(f.k, f.n)
    rows = np.arange(digits.shape[0])
    scores = weight_scores(digits, f.k, iw)
    return bool(np.all(scores[rows, f.table] >= scores.max(axis=1)))


def verify_witness(f: SocialChoiceFunction, P: ExplicitDistribution, labels: Sequence[int]) -> bool:
    """True iff f(X) = a almost surely and P(X_i = b) > P(X_i = a) for every voter."""
    a, b = (int(v) for v in labels)
    if P.k != f.k or P.n != f.n:
        return False
    if sum(P.support.values()) != 1:
        return False
    for x, p in P.support.items():
        if p <= 0 or int(f.table[profile_index(x, f.k)]) != a:
            return False
    m = marginal_matrix(P)
    return all(row[b] > row[a] for row in m)


def verify_rival_witness(f: SocialChoiceFunction, W: RivalWitness) -> bool:
    if W.k != f.k or W.n != f.n or not W.support:
        return False
    if sum(W.support.values()) != 1:
        return False
    gap = [Fraction(0)] * f.n
    for (x, b), p in W.support.items():
        winner = int(f.table[profile_index(x, f.k)])
        if p <= 0 or b == winner:
            return False
        for i, coeff in enumerate(_row_coeffs(x, winner, b, f.n)):
            gap[i] += p * coeff
    return all(g < 0 for g in gap)


def extract_witness(dual_values: Sequence, f: SocialChoiceFunction, labels: Sequence[int]) -> ExplicitDistribution:
    """Normalize nonpositive multipliers q_x (one per x in f^-1(a), ascending
    index order) into the distribution p_x = q_x / sum(q)."""
    a, _ = _check_labels(f, labels)
    pre = f.preimage(a)
    q = [Fraction(v) for v in dual_values]
    if len(q) != pre.size:
        raise SolverInconsistency(f"expected {pre.size} multipliers, got {len(q)}")
    total = sum(q, Fraction(0))
    if any(v > 0 for v in q) or total >= 0:
        raise SolverInconsistency("multipliers must be nonpositive with negative sum")
    support = {
        profile_from_index(int(idx), f.k, f.n): v / total for idx, v in zip(pre, q) if v
    }
    return ExplicitDistribution(f.k, f.n, support)


def _extract_rival_witness(dual_values, f, keys) -> RivalWitness:
    q = [Fraction(v) for v in dual_values]
    total = sum(q, Fraction(0))
    if any(v > 0 for v in q) or total >= 0:
        raise SolverInconsistency("multipliers must be nonpositive with negative sum")
    support = {}
    for (idx, b), v in zip(keys, q):
        if v:
            support[(profile_from_index(idx, f.k, f.n), b)] = v / total
    return RivalWitness(f.k, f.n, support)


def _solve_pair(f, labels):
    lp = build_primal(f, labels)
    sol = solve(lp)
    if sol.status is not Status.OPTIMAL:
        raise SolverInconsistency(f"primal LP reported {sol.status.value}")
    return lp, sol


def _weights_from(sol, n):
    return tuple(sol.primal[2 : 2 + n])


def decide(
    f: SocialChoiceFunction, mode: str = "neutral", labels: Sequence[int] | None = None
) -> DecisionOutcome:
    """Decide whether f is a weighted plurality and return a verified certificate.

    ``mode="neutral"`` solves the single label-pair LP and requires f neutral.
    ``mode="general"`` solves the all-pairs LP and accepts any f.
    """
    if mode == "neutral":
        ok, bad = is_neutral(f)
        if not ok:
            raise NotNeutral(*bad)
        labels = canonical_labels(f.k) if labels is None else _check_labels(f, labels)
        lp, sol = _solve_pair(f, labels)
        if sol.objective >= 0:
            return _wp_outcome(f, sol, labels, mode)
        witness = extract_witness(sol.dual[1:], f, labels)
        if not verify_witness(f, witness, labels):
            raise SolverInconsistency("extracted witness failed verification")
        return DecisionOutcome(Verdict.NOT_WP, sol.objective, labels, mode, witness=witness)

    if mode != "general":
        raise ValueError(f"unknown mode {mode!r}")
    lp, sol = _solve_pair(f, None)
    if sol.objective >= 0:
        return _wp_outcome(f, sol, None, mode)
    # prefer a single-pair witness; fall back to the (profile, rival) form
    pairs = [(a, b) for a in range(f.k) for b in range(f.k) if a != b]
    if labels is not None:
        pairs.insert(0, _check_labels(f, labels))
    for pair in pairs:
        if f.preimage(pair[0]).size == 0:
            continue
        _, psol = _solve_pair(f, pair)
        if psol.objective < 0:
            witness = extract_witness(psol.dual[1:], f, pair)
            if not verify_witness(f, witness, pair):
                raise SolverInconsistency("extracted witness failed verification")
            return DecisionOutcome(Verdict.NOT_WP, sol.objective, pair, mode, witness=witness)
    witness = _extract_rival_witness(sol.dual[1:], f, lp.keys)
    if not verify_rival_witness(f, witness):
        raise SolverInconsistency("rival witness failed verification")
    return DecisionOutcome(Verdict.NOT_WP, sol.objective, None, mode, witness=witness)


def _wp_outcome(f, sol, labels, mode):
    w = _weights_from(sol, f.n)
    if not verify_weights(f, w):
        raise SolverInconsistency("LP weights failed the weighted-plurality check")
    return DecisionOutcome(Verdict.WP, sol.objective, labels, mode, weights=w)

"""Social choice functions on [k]^n stored as dense truth tables.

Profiles are encoded little-endian mixed radix: voter 0 is the least
significant digit, so ``index(x) = sum(x[i] * k**i)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    InvalidPermutation,
    InvalidProfile,
    InvalidWeights,
    TooLarge,
)

TABLE_GUARD = 10**7
RANDOM_GUARD = 10**6


def profile_index(x: Sequence[int], k: int) -> int:
    idx = 0
    for v in reversed(x):
        idx = idx * k + int(v)
    return idx


def profile_from_index(index: int, k: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        index, r = divmod(index, k)
        out.append(r)
    return tuple(out)


def all_profiles(k: int, n: int) -> np.ndarray:
    """Every profile as a (k**n, n) array, row r holding the profile with index r."""
    size = k**n
    if size > TABLE_GUARD:
        raise TooLarge(f"k^n = {size} exceeds table guard {TABLE_GUARD}")
    idx = np.arange(size, dtype=np.int64)
    digits = np.empty((size, n), dtype=np.int64)
    for i in range(n):
        digits[:, i] = idx % k
        idx //= k
    return digits


def _powers(k: int, n: int) -> np.ndarray:
    return k ** np.arange(n, dtype=np.int64)


@dataclass(frozen=True)
class FirstMatchingVoter:
    """Among tied alternatives, the vote of the earliest voter in the tied set wins."""

    def __str__(self):
        return "first-match"


@dataclass(frozen=True)
class FixedWinner:
    """Ties go to ``winner`` when it is among the tied alternatives.

    Ties that exclude ``winner`` fall back to first-matching-voter.
    """

    winner: int

    def __str__(self):
        return f"fixed:{self.winner}"


TieBreakRule = FirstMatchingVoter | FixedWinner


def parse_tiebreak(text: str) -> TieBreakRule:
    if text in ("first-match", "first"):
        return FirstMatchingVoter()
    if text.startswith("fixed:"):
        return FixedWinner(int(text.split(":", 1)[1]))
    raise ValueError(f"unknown tie-break rule {text!r}")


class SocialChoiceFunction:
    """A map f: [k]^n -> [k] held as a read-only table in profile-index order."""

    __slots__ = ("k", "n", "table")

    def __init__(self, k: int, n: int, table: Iterable[int]):
        if k < 2 or n < 1:
            raise ValueError(f"need k >= 2 and n >= 1, got k={k}, n={n}")
        if k**n > TABLE_GUARD:
            raise TooLarge(f"k^n = {k**n} exceeds table guard {TABLE_GUARD}")
        arr = np.array(table, dtype=np.int64).reshape(-1)
        if arr.size != k**n:
            raise ValueError(f"table has {arr.size} entries, expected {k**n}")
        if arr.size and (arr.min() < 0 or arr.max() >= k):
            raise ValueError(f"table entries must lie in [0, {k})")
        arr.setflags(write=False)
        self.k = k
        self.n = n
        self.table = arr

    def __eq__(self, other):
        if not isinstance(other, SocialChoiceFunction):
            return NotImplemented
        return (self.k, self.n) == (other.k, other.n) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.k, self.n, self.table.tobytes()))

    def __repr__(self):
        if self.table.size <= 32:
            body = "".join(map(str, self.table.tolist())) if self.k <= 10 else self.table.tolist()
        else:
            body = f"<{self.table.size} entries>"
        return f"SocialChoiceFunction(k={self.k}, n={self.n}, table={body})"

    def __call__(self, x: Sequence[int]) -> int:
        return evaluate(self, x)

    def winners(self, digits: np.ndarray) -> np.ndarray:
        """Vectorized evaluation over the rows of a (rows, n) profile array."""
        return self.table[digits @ _powers(self.k, self.n)]

    def preimage(self, a: int) -> np.ndarray:
        """Indices of profiles x with f(x) = a, ascending."""
        return np.flatnonzero(self.table == a)


def _check_profile(k: int, n: int, x: Sequence[int]) -> None:
    if len(x) != n:
        raise InvalidProfile(f"profile has length {len(x)}, expected {n}")
    for v in x:
        if not 0 <= int(v) < k:
            raise InvalidProfile(f"profile entry {v} outside [0, {k})")


def evaluate(f: SocialChoiceFunction, x: Sequence[int]) -> int:
    _check_profile(f.k, f.n, x)
    return int(f.table[profile_index(x, f.k)])


def _check_permutation(sigma: Sequence[int], k: int) -> tuple[int, ...]:
    sigma = tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(k)):
        raise InvalidPermutation(f"{list(sigma)} is not a permutation of [0, {k})")
    return sigma


def permute_alternatives(f: SocialChoiceFunction, sigma: Sequence[int]) -> SocialChoiceFunction:
    """Return g with g(sigma(x)) = sigma(f(x)) for every profile x."""
    sig = np.array(_check_permutation(sigma, f.k), dtype=np.int64)
    digits = all_profiles(f.k, f.n)
    target = sig[digits] @ _powers(f.k, f.n)
    out = np.empty_like(f.table)
    out[target] = sig[f.table]
    return SocialChoiceFunction(f.k, f.n, out)


def _generators(k: int) -> list[tuple[int, ...]]:
    swap = (1, 0) + tuple(range(2, k))
    cycle = tuple((j + 1) % k for j in range(k))
    return [swap] if k == 2 else [swap, cycle]


def neutrality_violation(f: SocialChoiceFunction, sigmas: Iterable[Sequence[int]]):
    """First (sigma, x) with f(sigma(x)) != sigma(f(x)), or None."""
    digits = all_profiles(f.k, f.n)
    powers = _powers(f.k, f.n)
    for sigma in sigmas:
        sig = np.array(_check_permutation(sigma, f.k), dtype=np.int64)
        lhs = f.table[sig[digits] @ powers]
        rhs = sig[f.table]
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            return tuple(int(s) for s in sig), tuple(int(v) for v in digits[bad[0]])
    return None


def is_neutral(f: SocialChoiceFunction) -> tuple[bool, tuple | None]:
    """Check neutrality against the transposition (0 1) and the full cycle.

    These two permutations generate the symmetric group and the set of
    permutations f commutes with is a subgroup, so checking them suffices.
    Returns ``(True, None)`` or ``(False, (sigma, x))``.
    """
    bad = neutrality_violation(f, _generators(f.k))
    return (bad is None, bad)


def normalize_weights(weights: Sequence, n: int | None = None) -> tuple[Fraction, ...]:
    """Validate a weight vector: n nonnegative rationals summing to exactly 1."""
    try:
        w = tuple(Fraction(v) for v in weights)
    except (TypeError, ValueError) as exc:
        raise InvalidWeights(f"weights must be rationals: {exc}") from None
    if n is not None and len(w) != n:
        raise InvalidWeights(f"expected {n} weights, got {len(w)}")
    if not w:
        raise InvalidWeights("empty weight vector")
    if any(v < 0 for v in w):
        raise InvalidWeights("weights must be nonnegative")
    if sum(w) != 1:
        raise InvalidWeights(f"weights sum to {sum(w)}, not 1")
    return w


def _integer_weights(w: Sequence[Fraction]) -> np.ndarray:
    denom = math.lcm(*(v.denominator for v in w))
    ints = [int(v * denom) for v in w]
    # object dtype keeps big denominators exact
    dtype = np.int64 if denom < 2**40 else object
    return np.array(ints, dtype=dtype)


def weight_scores(digits: np.ndarray, k: int, iw: np.ndarray) -> np.ndarray:
    """Total (integer-scaled) weight behind each alternative, shape (rows, k)."""
    return np.stack([(digits == j).astype(iw.dtype) @ iw for j in range(k)], axis=1)


def plurality_winners(
    digits: np.ndarray, k: int, weights: Sequence[Fraction], tb: TieBreakRule
) -> np.ndarray:
    """Vectorized weighted plurality over a batch of profiles (rows of ``digits``)."""
    iw = _integer_weights(weights)
    rows = np.arange(digits.shape[0])
    scores = weight_scores(digits, k, iw)
    best = scores.max(axis=1)
    tied = scores == best[:, None]
    in_tied = tied[rows[:, None], digits]
    # voters with zero weight still count for first-match tie-breaking
    winners = digits[rows, np.argmax(in_tied, axis=1)]
    if isinstance(tb, FixedWinner):
        if not 0 <= tb.winner < k:
            raise ValueError(f"fixed winner {tb.winner} outside [0, {k})")
        winners = np.where(tied[:, tb.winner], tb.winner, winners)
    return winners.astype(np.int64)


def build_weighted_plurality(
    k: int, n: int, w: Sequence, tb: TieBreakRule | None = None
) -> SocialChoiceFunction:
    w = normalize_weights(w, n)
    tb = FirstMatchingVoter() if tb is None else tb
    if isinstance(tb, FixedWinner) and not 0 <= tb.winner < k:
        raise ValueError(f"fixed winner {tb.winner} outside [0, {k})")
    digits = all_profiles(k, n)
    return SocialChoiceFunction(k, n, plurality_winners(digits, k, w, tb))


def plurality(k: int, n: int, tb: TieBreakRule | None = None) -> SocialChoiceFunction:
    return build_weighted_plurality(k, n, [Fraction(1, n)] * n, tb)


def dictator(k: int, n: int, voter: int = 0) -> SocialChoiceFunction:
    digits = all_profiles(k, n)
    return SocialChoiceFunction(k, n, digits[:, voter])


def parity(n: int) -> SocialChoiceFunction:
    digits = all_profiles(2, n)
    return SocialChoiceFunction(2, n, digits.sum(axis=1) % 2)


def constant(k: int, n: int, value: int) -> SocialChoiceFunction:
    return SocialChoiceFunction(k, n, np.full(k**n, value))


def _canonical_forms(digits: np.ndarray, k: int):
    """Relabel each profile by order of first appearance.

    Returns (canonical digits, label map value->label, number of labels used).
    Values absent from a profile get label -1, except that a single absent
    value receives label k-1 so the map stays a bijection.
    """
    size, n = digits.shape
    rows = np.arange(size)
    label = np.full((size, k), -1, dtype=np.int64)
    used = np.zeros(size, dtype=np.int64)
    canon = np.empty_like(digits)
    for i in range(n):
        v = digits[:, i]
        fresh = label[rows, v] == -1
        label[rows[fresh], v[fresh]] = used[fresh]
        used[fresh] += 1
        canon[:, i] = label[rows, v]
    one_missing = used == k - 1
    miss_rows, miss_vals = np.nonzero((label == -1) & one_missing[:, None])
    label[miss_rows, miss_vals] = k - 1
    return canon, label, used


def random_neutral_function(k: int, n: int, seed) -> SocialChoiceFunction:
    """Uniformly random neutral function: one free value per orbit of [k]^n under S_k.

    A profile using m distinct alternatives may be sent to any alternative
    it uses, or to the single unused one when m = k - 1; any other choice
    conflicts with the profile's stabilizer.
    """
    if k > 4 or k**n > RANDOM_GUARD:
        raise TooLarge(f"random neutral generation needs k <= 4 and k^n <= {RANDOM_GUARD}")
    rng = np.random.default_rng(seed)
    digits = all_profiles(k, n)
    canon, label, used = _canonical_forms(digits, k)
    canon_idx = canon @ _powers(k, n)
    reps, inverse = np.unique(canon_idx, return_inverse=True)
    rep_used = np.empty(reps.size, dtype=np.int64)
    rep_used[inverse] = used
    allowed = np.where(rep_used >= k - 1, k, rep_used)
    rep_value = np.floor(rng.random(reps.size) * allowed).astype(np.int64)
    want = rep_value[inverse]
    # map the canonical label back to the profile's alternative
    hit = label == want[:, None]
    table = np.argmax(hit, axis=1)
    return SocialChoiceFunction(k, n, table)


class WeightedPluralityRule:
    """Weighted plurality evaluated directly, without a truth table.

    Used where k^n is too large to tabulate (Monte Carlo experiments).
    """

    def __init__(self, k: int, weights: Sequence, tb: TieBreakRule | None = None):
        self.k = k
        self.weights = normalize_weights(weights)
        self.n = len(self.weights)
        self.tb = FirstMatchingVoter() if tb is None else tb

    @classmethod
    def unweighted(cls, k: int, n: int, tb: TieBreakRule | None = None):
        return cls(k, [Fraction(1, n)] * n, tb)

    def winners(self, digits: np.ndarray) -> np.ndarray:
        return plurality_winners(np.asarray(digits, dtype=np.int64), self.k, self.weights, self.tb)

    def __call__(self, x: Sequence[int]) -> int:
        _check_profile(self.k, self.n, x)
        return int(self.winners(np.array([x]))[0])

    def to_function(self) -> SocialChoiceFunction:
        return build_weighted_plurality(self.k, self.n, self.weights, self.tb)

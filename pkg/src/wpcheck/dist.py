"""Exact probability distributions on [k]^n.

Probabilities are ``fractions.Fraction`` throughout. Floats only appear in
the cached sampling tables, which never feed an exact verdict.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import InvalidDistribution, InvalidProfile, TooLarge
from .scf import TABLE_GUARD

Profile = tuple[int, ...]


def to_rational(value) -> Fraction:
    """Exact conversion from int, Fraction, ``"a/b"`` or a decimal string."""
    if isinstance(value, float):
        raise InvalidDistribution(f"refusing inexact float {value!r}; pass a string")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidDistribution(f"not a rational: {value!r} ({exc})") from None


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class ProductDistribution:
    """Independent voters; ``marginals[i][j] = P(X_i = j)``."""

    marginals: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(to_rational(p) for p in row) for row in self.marginals)
        if not rows:
            raise InvalidDistribution("product distribution needs at least one voter")
        k = len(rows[0])
        if k < 2:
            raise InvalidDistribution("need at least two alternatives")
        for i, row in enumerate(rows):
            if len(row) != k:
                raise InvalidDistribution(f"row {i} has {len(row)} entries, expected {k}")
            if any(p < 0 or p > 1 for p in row):
                raise InvalidDistribution(f"row {i} has an entry outside [0, 1]")
            if sum(row) != 1:
                raise InvalidDistribution(f"row {i} sums to {sum(row)}, not 1")
        object.__setattr__(self, "marginals", rows)

    @property
    def n(self) -> int:
        return len(self.marginals)

    @property
    def k(self) -> int:
        return len(self.marginals[0])

    @classmethod
    def iid(cls, row: Sequence, n: int) -> ProductDistribution:
        return cls(tuple(tuple(row) for _ in range(n)))

    @classmethod
    def uniform(cls, k: int, n: int) -> ProductDistribution:
        return cls.iid([Fraction(1, k)] * k, n)

    @cached_property
    def _cdf(self) -> np.ndarray:
        return np.cumsum(np.array([[float(p) for p in row] for row in self.marginals]), axis=1)


@dataclass(frozen=True)
class ExplicitDistribution:
    """Finite-support measure given as a map profile -> probability."""

    k: int
    n: int
    support: Mapping[Profile, Fraction]

    def __post_init__(self):
        clean: dict[Profile, Fraction] = {}
        for x, p in self.support.items():
            x = tuple(int(v) for v in x)
            if len(x) != self.n or any(not 0 <= v < self.k for v in x):
                raise InvalidDistribution(f"profile {list(x)} inconsistent with k={self.k}, n={self.n}")
            p = to_rational(p)
            if p <= 0:
                raise InvalidDistribution(f"profile {list(x)} has nonpositive mass {p}")
            if x in clean:
                raise InvalidDistribution(f"profile {list(x)} listed twice")
            clean[x] = p
        if not clean:
            raise InvalidDistribution("empty support")
        if sum(clean.values()) != 1:
            raise InvalidDistribution(f"masses sum to {sum(clean.values())}, not 1")
        object.__setattr__(self, "support", dict(sorted(clean.items())))

    @classmethod
    def point_mass(cls, k: int, x: Sequence[int]) -> ExplicitDistribution:
        return cls(k, len(x), {tuple(x): Fraction(1)})

    @classmethod
    def uniform_on(cls, k: int, profiles: Sequence[Sequence[int]]) -> ExplicitDistribution:
        profiles = [tuple(x) for x in profiles]
        return cls(k, len(profiles[0]), {x: Fraction(1, len(profiles)) for x in profiles})

    @classmethod
    def all_equal(cls, k: int, n: int, row: Sequence | None = None) -> ExplicitDistribution:
        """X_1 = ... = X_n almost surely, with common law ``row`` (uniform by default)."""
        row = [Fraction(1, k)] * k if row is None else [to_rational(p) for p in row]
        return cls(k, n, {(j,) * n: p for j, p in enumerate(row) if p > 0})

    @cached_property
    def _sampling_table(self):
        profiles = np.array(list(self.support.keys()), dtype=np.int64)
        cdf = np.cumsum([float(p) for p in self.support.values()])
        return profiles, cdf


Distribution = ProductDistribution | ExplicitDistribution


def _check_voter(P: Distribution, i: int, j: int) -> None:
    if not 0 <= i < P.n:
        raise IndexError(f"voter {i} outside [0, {P.n})")
    if not 0 <= j < P.k:
        raise IndexError(f"alternative {j} outside [0, {P.k})")


def marginal(P: Distribution, i: int, j: int) -> Fraction:
    """Exact P(X_i = j); voters are 0-based."""
    _check_voter(P, i, j)
    if isinstance(P, ProductDistribution):
        return P.marginals[i][j]
    return sum((p for x, p in P.support.items() if x[i] == j), Fraction(0))


def marginal_matrix(P: Distribution) -> list[list[Fraction]]:
    if isinstance(P, ProductDistribution):
        return [list(row) for row in P.marginals]
    out = [[Fraction(0)] * P.k for _ in range(P.n)]
    for x, p in P.support.items():
        for i, v in enumerate(x):
            out[i][v] += p
    return out


def probability_of(P: Distribution, x: Sequence[int]) -> Fraction:
    if len(x) != P.n or any(not 0 <= int(v) < P.k for v in x):
        raise InvalidProfile(f"profile {list(x)} inconsistent with k={P.k}, n={P.n}")
    if isinstance(P, ProductDistribution):
        out = Fraction(1)
        for row, v in zip(P.marginals, x):
            out *= row[int(v)]
        return out
    return P.support.get(tuple(int(v) for v in x), Fraction(0))


def iter_support(P: Distribution, guard: int = TABLE_GUARD) -> Iterator[tuple[Profile, Fraction]]:
    """Yield (profile, probability) over all profiles of positive mass."""
    if isinstance(P, ExplicitDistribution):
        yield from P.support.items()
        return
    if P.k**P.n > guard:
        raise TooLarge(f"k^n = {P.k**P.n} exceeds enumeration guard {guard}")
    choices = [[(j, p) for j, p in enumerate(row) if p > 0] for row in P.marginals]
    for combo in itertools.product(*choices):
        prob = Fraction(1)
        for _, p in combo:
            prob *= p
        yield tuple(j for j, _ in combo), prob


def expected_weights(P: Distribution, w: Sequence) -> list[Fraction]:
    """E W_j = sum_i w_i P(X_i = j) for each alternative j."""
    w = [to_rational(v) for v in w]
    if len(w) != P.n:
        raise InvalidProfile(f"expected {P.n} weights, got {len(w)}")
    m = marginal_matrix(P)
    return [sum((w[i] * m[i][j] for i in range(P.n)), Fraction(0)) for j in range(P.k)]


def sample_many(P: Distribution, rng: np.random.Generator, size: int) -> np.ndarray:
    """Draw ``size`` profiles as a (size, n) integer array."""
    if isinstance(P, ProductDistribution):
        cdf = P._cdf
        u = rng.random((size, P.n))
        # float rounding can leave the last cdf entry below 1
        out = (u[:, :, None] >= cdf[None, :, :]).sum(axis=2)
        return np.minimum(out, P.k - 1)
    profiles, cdf = P._sampling_table
    idx = np.searchsorted(cdf, rng.random(size) * cdf[-1], side="right")
    return profiles[np.minimum(idx, len(profiles) - 1)]


def sample(P: Distribution, rng: np.random.Generator) -> Profile:
    return tuple(int(v) for v in sample_many(P, rng, 1)[0])


def distribution_to_json(P: Distribution) -> dict:
    if isinstance(P, ProductDistribution):
        return {"type": "product", "p": [[format_rational(v) for v in row] for row in P.marginals]}
    return {
        "type": "explicit",
        "k": P.k,
        "n": P.n,
        "support": [{"x": list(x), "p": format_rational(p)} for x, p in P.support.items()],
    }

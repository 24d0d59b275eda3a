"""Readers and writers for truth tables (.tt), distributions, weights and reports."""
from __future__ import annotations

import json
from pathlib import Path

from .dist import (
    Distribution,
    ExplicitDistribution,
    ProductDistribution,
    distribution_to_json,
    to_rational,
)
from .errors import InvalidDistribution
from .scf import SocialChoiceFunction


class ParseError(ValueError):
    pass


def parse_tt(text: str) -> SocialChoiceFunction:
    """Parse ``k n`` followed by k^n table entries.

    For k <= 10 the entries may be one undelimited digit string.
    """
    tokens = text.split()
    if len(tokens) < 3:
        raise ParseError("truth table needs a 'k n' header and a table")
    try:
        k, n = int(tokens[0]), int(tokens[1])
    except ValueError:
        raise ParseError(f"bad header {tokens[:2]}") from None
    if k < 2 or n < 1:
        raise ParseError(f"need k >= 2 and n >= 1, got k={k}, n={n}")
    body = tokens[2:]
    size = k**n
    if len(body) == 1 and size > 1 and k <= 10 and len(body[0]) == size:
        body = list(body[0])
    if len(body) != size:
        raise ParseError(f"expected {size} table entries, found {len(body)}")
    try:
        table = [int(t) for t in body]
    except ValueError:
        raise ParseError("table entries must be integers") from None
    if any(not 0 <= v < k for v in table):
        raise ParseError(f"table entries must lie in [0, {k})")
    return SocialChoiceFunction(k, n, table)


def format_tt(f: SocialChoiceFunction, compact: bool = False) -> str:
    values = f.table.tolist()
    if compact and f.k <= 10:
        body = "".join(map(str, values))
    else:
        body = " ".join(map(str, values))
    return f"{f.k} {f.n}\n{body}\n"


def read_tt(path) -> SocialChoiceFunction:
    return parse_tt(Path(path).read_text())


def write_tt(f: SocialChoiceFunction, path, compact: bool = False) -> None:
    Path(path).write_text(format_tt(f, compact))


def distribution_from_json(data: dict, k: int | None = None) -> Distribution:
    kind = data.get("type")
    if kind == "product":
        return ProductDistribution(tuple(tuple(row) for row in data["p"]))
    if kind == "explicit":
        support = {}
        for entry in data["support"]:
            x = tuple(int(v) for v in entry["x"])
            if x in support:
                raise InvalidDistribution(f"profile {list(x)} listed twice")
            support[x] = to_rational(entry["p"])
        if not support:
            raise InvalidDistribution("empty support")
        n = data.get("n", len(next(iter(support))))
        k = data.get("k", k)
        if k is None:
            k = max(max(x) for x in support) + 1
        return ExplicitDistribution(int(k), int(n), support)
    raise InvalidDistribution(f"unknown distribution type {kind!r}")


def _load(path):
    # decimal literals stay exact: 0.1 is read as "0.1", never as a binary float
    return json.loads(Path(path).read_text(), parse_float=str)


def read_distribution(path, k: int | None = None) -> Distribution:
    return distribution_from_json(_load(path), k)


def read_weights(path) -> list:
    """Weights file: a JSON list of rationals, or ``{"weights": [...]}``."""
    data = _load(path)
    if isinstance(data, dict):
        data = data["weights"]
    return [to_rational(v) for v in data]


def dump_json(data, path=None) -> str:
    text = json.dumps(data, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text

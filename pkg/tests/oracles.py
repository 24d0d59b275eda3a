"""Brute-force reference computations, deliberately independent of the library paths.

Plain Python loops over itertools.product, no numpy, no shared helpers.
"""
import itertools
from fractions import Fraction


def table_lookup(table, k, x):
    idx = 0
    for v in reversed(x):
        idx = idx * k + v
    return table[idx]


def neutral_all_permutations(table, k, n):
    for sigma in itertools.permutations(range(k)):
        for x in itertools.product(range(k), repeat=n):
            sx = tuple(sigma[v] for v in x)
            if table_lookup(table, k, sx) != sigma[table_lookup(table, k, x)]:
                return False
    return True


def weighted_plurality_table(k, n, w, fixed=None):
    """Loop-based weighted plurality with first-match (or fixed-winner) ties."""
    table = []
    for idx in range(k**n):
        x, r = [], idx
        for _ in range(n):
            r, d = divmod(r, k)
            x.append(d)
        score = [sum((w[i] for i in range(n) if x[i] == j), Fraction(0)) for j in range(k)]
        top = max(score)
        tied = {j for j in range(k) if score[j] == top}
        if fixed is not None and fixed in tied:
            table.append(fixed)
            continue
        table.append(next(v for v in x if v in tied))
    return table


def satisfies_definition(table, k, n, w):
    for x in itertools.product(range(k), repeat=n):
        a = table_lookup(table, k, x)
        wa = sum(w[i] for i in range(n) if x[i] == a)
        for b in range(k):
            if wa < sum(w[i] for i in range(n) if x[i] == b):
                return False
    return True


def product_law(rows):
    """Enumerate (x, P(x)) for a product measure given as a list of rows."""
    n, k = len(rows), len(rows[0])
    for x in itertools.product(range(k), repeat=n):
        p = Fraction(1)
        for i, v in enumerate(x):
            p *= Fraction(rows[i][v])
        yield x, p


def effect_bruteforce(table, k, n, law):
    """Voter effects straight from the conditional-probability definition.

    A term with P(X_i = j) = 0 contributes 0; with P(X_i = j) = 1 the
    second conditional is taken as 0.
    """
    law = list(law)
    out = []
    for i in range(n):
        e = Fraction(0)
        for j in range(k):
            pj = sum((p for x, p in law if x[i] == j), Fraction(0))
            if pj == 0:
                continue
            both = sum((p for x, p in law if x[i] == j and table_lookup(table, k, x) == j), Fraction(0))
            e += both / pj
            if pj != 1:
                other = sum((p for x, p in law if x[i] != j and table_lookup(table, k, x) == j), Fraction(0))
                e -= other / (1 - pj)
        out.append(e)
    return out


def covariance_bruteforce(table, k, n, law):
    law = list(law)
    cov = []
    for i in range(n):
        row = []
        for j in range(k):
            ef = sum((p for x, p in law if table_lookup(table, k, x) == j), Fraction(0))
            ex = sum((p for x, p in law if x[i] == j), Fraction(0))
            exy = sum((p for x, p in law if x[i] == j and table_lookup(table, k, x) == j), Fraction(0))
            row.append(exy - ef * ex)
        cov.append(row)
    return cov


def witness_holds(table, k, n, support, a, b):
    """Every supported profile elects a, yet each voter backs b more often than a."""
    if sum(support.values(), Fraction(0)) != 1 or any(p < 0 for p in support.values()):
        return False
    if any(table_lookup(table, k, x) != a for x, p in support.items() if p > 0):
        return False
    for i in range(n):
        pa = sum((p for x, p in support.items() if x[i] == a), Fraction(0))
        pb = sum((p for x, p in support.items() if x[i] == b), Fraction(0))
        if pb <= pa:
            return False
    return True

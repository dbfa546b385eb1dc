"""Independent reference implementations used only by the tests."""

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product


def det(m):
    """Leibniz determinant; fine for the tiny matrices used here."""
    n = len(m)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(-1 if inv % 2 else 1)
        for i in range(n):
            term *= m[i][perm[i]]
            if term == 0:
                break
        total += term
    return total


def rank(vectors):
    """Rank of a list of equal-length vectors via nonvanishing minors."""
    if not vectors:
        return 0
    dim = len(vectors[0])
    for k in range(min(dim, len(vectors)), 0, -1):
        for rows in combinations(range(dim), k):
            for cols in combinations(range(len(vectors)), k):
                if det([[vectors[c][r] for c in cols] for r in rows]) != 0:
                    return k
    return 0


def ordered_partitions(items):
    items = tuple(items)
    if not items:
        yield ()
        return
    for size in range(1, len(items) + 1):
        for first in combinations(items, size):
            rest = tuple(i for i in items if i not in first)
            for tail in ordered_partitions(rest):
                yield (first,) + tail


def vsum(vectors, dim):
    return tuple(sum((v[r] for v in vectors), Fraction(0)) for r in range(dim))


@lru_cache(maxsize=None)
def _columns_condition_sorted(cols):
    dim = len(cols[0])
    zero = (Fraction(0),) * dim
    for part in ordered_partitions(range(len(cols))):
        if vsum([cols[i] for i in part[0]], dim) != zero:
            continue
        used = list(part[0])
        ok = True
        for block in part[1:]:
            base = [cols[i] for i in used]
            s = vsum([cols[i] for i in block], dim)
            if rank(base + [s]) != rank(base):
                ok = False
                break
            used.extend(block)
        if ok:
            return True
    return False


def brute_columns_condition(rows):
    """True iff some ordered partition of the columns satisfies the columns condition.

    The answer does not depend on the column order, so results are cached per
    sorted column multiset.
    """
    cols = tuple(sorted(tuple(Fraction(r[j]) for r in rows) for j in range(len(rows[0]))))
    return _columns_condition_sorted(cols)


def brute_subset_sum(coeffs):
    for size in range(1, len(coeffs) + 1):
        for J in combinations(range(len(coeffs)), size):
            if sum(coeffs[j] for j in J) == 0:
                return True
    return False


def all_colorings_avoid(n, edges, r):
    """Every coloring (as tuple) of range(n) with r colors and no monochromatic edge."""
    return [c for c in product(range(r), repeat=n) if all(len({c[i] for i in e}) > 1 for e in edges)]

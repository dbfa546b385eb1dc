"""Dense univariate polynomials over Q (coefficient lists, lowest degree first).

Only what the constant-solution analysis needs: exact gcd, Sturm sequences and
bisection-based isolation of positive real roots.
"""

from __future__ import annotations

from fractions import Fraction


def trim(p):
    p = [Fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p) -> int:
    return len(p) - 1


def evaluate(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p):
    return trim([i * c for i, c in enumerate(p)][1:])


def monic(p):
    p = trim(p)
    if not p:
        return p
    lead = p[-1]
    return [c / lead for c in p]


def divmod_(a, b):
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lead = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        f = r[-1] / lead
        q[shift] = f
        for i, c in enumerate(b):
            r[shift + i] -= f * c
        r = trim(r)
    return trim(q), r


def gcd(a, b):
    """Monic gcd; the zero polynomial ``[]`` is the identity (gcd(0, q) = q)."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_(a, b)[1]
    return monic(a)


def squarefree(p):
    p = trim(p)
    d = derivative(p)
    if not d:
        return monic(p)
    return monic(divmod_(p, gcd(p, d))[0])


def sturm_sequence(p):
    p = trim(p)
    seq = [p, derivative(p)]
    while seq[-1]:
        r = divmod_(seq[-2], seq[-1])[1]
        seq.append([-c for c in r])
    return seq[:-1]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations(signs) -> int:
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def variations_at(seq, x) -> int:
    return _variations([_sign(evaluate(q, x)) for q in seq])


def variations_at_infinity(seq) -> int:
    return _variations([_sign(q[-1]) for q in seq if q])


def strip_zero_roots(p):
    p = trim(p)
    while p and p[0] == 0:
        p = p[1:]
    return p


def cauchy_bound(p) -> Fraction:
    """Every complex root has absolute value strictly below this bound."""
    p = trim(p)
    lead = abs(p[-1])
    return 1 + max((abs(c) / lead for c in p[:-1]), default=Fraction(0))


def count_roots(p, lo, hi) -> int:
    """Distinct real roots in the open interval (lo, hi); lo and hi must not be roots."""
    s = squarefree(p)
    if len(s) <= 1:
        return 0
    seq = sturm_sequence(s)
    return variations_at(seq, lo) - variations_at(seq, hi)


def count_positive_roots(p) -> int:
    """Distinct real roots in (0, oo)."""
    s = strip_zero_roots(squarefree(p))
    if len(s) <= 1:
        return 0
    seq = sturm_sequence(s)
    return variations_at(seq, Fraction(0)) - variations_at_infinity(seq)


def isolate_positive_root(p, max_width=None):
    """Rational closed interval [lo, hi] holding exactly one positive root of ``p``,
    namely the smallest.  ``lo`` is never a root.

    Returns ``(r, r)`` when bisection lands on that root exactly.  Raises
    ``ValueError`` if ``p`` has no positive root.
    """
    s = strip_zero_roots(squarefree(p))
    if len(s) <= 1:
        raise ValueError("no positive root")
    seq = sturm_sequence(s)
    lo, hi = Fraction(0), cauchy_bound(s)
    if variations_at(seq, lo) - variations_at(seq, hi) == 0:
        raise ValueError("no positive root")
    while True:
        n = variations_at(seq, lo) - variations_at(seq, hi)
        if n == 1 and (max_width is None or hi - lo <= max_width):
            return lo, hi
        mid = (lo + hi) / 2
        if evaluate(s, mid) == 0:
            # V(lo) - V(mid) counts roots in (lo, mid], mid included.
            if variations_at(seq, lo) - variations_at(seq, mid) == 1:
                return mid, mid
            hi = mid
            continue
        if variations_at(seq, lo) - variations_at(seq, mid) >= 1:
            hi = mid
        else:
            lo = mid

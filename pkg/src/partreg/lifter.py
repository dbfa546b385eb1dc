"""Lifting solutions of a linear form to solutions of its lev-family polynomial.

Given sum_i c_i a_i = 0 and multipliers b_1..b_m, the values
d_i = a_i * prod_{j not in F_i} b_j solve sum_i c_i x_i prod_{j in F_i} y_j = 0
at (x, y) = (d, b), because every term picks up the same factor prod_j b_j.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import prod
from random import Random
from typing import Iterable, Sequence

from .algebra import as_fraction
from .transforms import LevSpec, lev_family


class LiftPreconditionError(ValueError):
    pass


class LiftIdentityError(RuntimeError):
    """The telescoping identity failed; this can only be an implementation bug."""


@dataclass(frozen=True)
class LiftInstance:
    spec: LevSpec
    a: tuple
    b: tuple

    def __post_init__(self):
        a = tuple(as_fraction(x) for x in self.a)
        b = tuple(as_fraction(x) for x in self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if len(a) != self.spec.n:
            raise LiftPreconditionError(f"expected {self.spec.n} linear-solution values, got {len(a)}")
        if len(b) != self.spec.m:
            raise LiftPreconditionError(f"expected {self.spec.m} multipliers, got {len(b)}")
        if any(x <= 0 for x in a + b):
            raise LiftPreconditionError("a and b must be positive")
        s = sum((c * x for c, x in zip(self.spec.coeffs, a)), Fraction(0))
        if s != 0:
            raise LiftPreconditionError(f"sum c_i a_i = {s}, not 0")

    def to_json(self):
        return {
            "spec": self.spec.to_json(),
            "a": [str(x) for x in self.a],
            "b": [str(x) for x in self.b],
        }

    @classmethod
    def from_json(cls, data) -> LiftInstance:
        if set(data) != {"spec", "a", "b"}:
            raise ValueError(f"lift instance fields must be exactly spec, a, b; got {sorted(data)}")
        return cls(LevSpec.from_json(data["spec"]), tuple(data["a"]), tuple(data["b"]))


@dataclass(frozen=True)
class LiftResult:
    d: tuple
    b: tuple
    value: Fraction

    def to_json(self):
        return {"d": [str(x) for x in self.d], "b": [str(x) for x in self.b], "value": str(self.value)}


def lifted_values(spec: LevSpec, a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple:
    everything = frozenset(range(1, spec.m + 1))
    return tuple(
        ai * prod((b[j - 1] for j in sorted(everything - F)), start=Fraction(1))
        for ai, F in zip(a, spec.subsets)
    )


def lift(inst: LiftInstance) -> LiftResult:
    spec, a, b = inst.spec, inst.a, inst.b
    d = lifted_values(spec, a, b)
    lhs = sum(
        (c * di * prod((b[j - 1] for j in F), start=Fraction(1)) for c, di, F in zip(spec.coeffs, d, spec.subsets)),
        Fraction(0),
    )
    rhs = prod(b, start=Fraction(1)) * sum((c * x for c, x in zip(spec.coeffs, a)), Fraction(0))
    if lhs != rhs or rhs != 0:
        raise LiftIdentityError(f"telescoping identity failed: {lhs} vs {rhs}")
    point = dict(zip(spec.x_names(), d)) | dict(zip(spec.y_names(), b))
    value = lev_family(spec).evaluate(point)
    if value != 0:
        raise LiftIdentityError(f"lev polynomial evaluates to {value} at the lifted point")
    return LiftResult(d, b, value)


@dataclass(frozen=True)
class ChainReport:
    ok: bool
    violations: tuple  # of dicts

    def to_json(self):
        return {"ok": self.ok, "violations": list(self.violations)}


def verify_chain(chain: Sequence[Iterable], a: Sequence, b: Sequence) -> ChainReport:
    """Check the two membership claims for a finite chain B_0 >= B_1 >= ... >= B_m.

    (1) b_k in B_{m-k} for k = 1..m;
    (2) a_i * prod_{j in G} b_j in B_{m - max G} for every i and every G within {1..m},
        with max of the empty set taken as 0.
    """
    sets = [frozenset(as_fraction(x) for x in B) for B in chain]
    a = [as_fraction(x) for x in a]
    b = [as_fraction(x) for x in b]
    m = len(sets) - 1
    if m < 0:
        raise ValueError("chain needs at least B_0")
    if len(b) != m:
        raise ValueError(f"chain has length {m + 1}, so exactly {m} multipliers are needed")
    violations = []
    for k in range(1, m + 1):
        if not sets[k] <= sets[k - 1]:
            violations.append({"kind": "nesting", "level": k,
                               "extra": sorted(str(x) for x in sets[k] - sets[k - 1])})
    for k in range(1, m + 1):
        if b[k - 1] not in sets[m - k]:
            violations.append({"kind": "multiplier", "k": k, "value": str(b[k - 1]), "set": m - k})
    for i, ai in enumerate(a, start=1):
        for size in range(m + 1):
            for G in combinations(range(1, m + 1), size):
                level = m - (max(G) if G else 0)
                val = ai * prod((b[j - 1] for j in G), start=Fraction(1))
                if val not in sets[level]:
                    violations.append({"kind": "product", "i": i, "G": list(G),
                                       "value": str(val), "set": level})
    return ChainReport(not violations, tuple(violations))


def required_chain(a: Sequence, b: Sequence) -> list[frozenset]:
    """Smallest chain B_0 >= ... >= B_m satisfying both claims for (a, b)."""
    a = [as_fraction(x) for x in a]
    b = [as_fraction(x) for x in b]
    m = len(b)
    need: dict[Fraction, int] = {}

    def require(x, level):
        need[x] = max(need.get(x, 0), level)

    for k in range(1, m + 1):
        require(b[k - 1], m - k)
    for ai in a:
        for size in range(m + 1):
            for G in combinations(range(1, m + 1), size):
                require(ai * prod((b[j - 1] for j in G), start=Fraction(1)), m - (max(G) if G else 0))
    return [frozenset(x for x, lvl in need.items() if lvl >= k) for k in range(m + 1)]


@dataclass(frozen=True)
class LiftWitness:
    a: tuple
    b: tuple
    d: tuple

    def to_json(self):
        return {k: [str(x) for x in getattr(self, k)] for k in ("a", "b", "d")}


def find_lift_in_set(A: Iterable, spec: LevSpec) -> LiftWitness | None:
    """First (a, b) in lexicographic order (A sorted ascending) with sum c_i a_i = 0,
    a in A^n, b in A^m and every lifted d_i in A.  The witness is re-checked by :func:`lift`.
    """
    elems = sorted({as_fraction(x) for x in A})
    if not elems:
        raise ValueError("A must be nonempty")
    if elems[0] <= 0:
        raise ValueError("A must contain only positive rationals")
    members = set(elems)
    c = spec.coeffs
    n = spec.n
    for head in product(elems, repeat=n - 1):
        partial = sum((ci * x for ci, x in zip(c, head)), Fraction(0))
        last = -partial / c[-1]
        if last not in members:
            continue
        a = head + (last,)
        for b in product(elems, repeat=spec.m):
            d = lifted_values(spec, a, b)
            if all(x in members for x in d):
                lift(LiftInstance(spec, a, b))
                return LiftWitness(a, b, d)
    return None


def random_lift_instance(rng: Random, max_n: int = 5, max_m: int = 4) -> LiftInstance:
    """A random valid instance: pick a_1..a_{n-1}, signed coefficients, and solve for the last
    coefficient so that sum c_i a_i = 0."""
    n = rng.randint(2, max_n)
    m = rng.randint(0, max_m)
    a = [Fraction(rng.randint(1, 30), rng.randint(1, 12)) for _ in range(n)]
    coeffs = [Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 5)) for _ in range(n - 1)]
    partial = sum(c * x for c, x in zip(coeffs, a))
    if partial == 0:
        coeffs[0] += 1
        partial = sum(c * x for c, x in zip(coeffs, a))
    coeffs.append(-partial / a[-1])
    subsets = [frozenset(j for j in range(1, m + 1) if rng.random() < 0.5) for _ in range(n)]
    b = [Fraction(rng.randint(1, 20), rng.randint(1, 7)) for _ in range(m)]
    return LiftInstance(LevSpec(tuple(coeffs), tuple(subsets), m), tuple(a), tuple(b))

"""Arithmetic in Q[g] for a formal transcendental generator g, and sample-level
checks of the Q-infinitesimal and HL semigroup axioms.

Because g is transcendental, two elements are equal exactly when their
coefficients agree, so equality never needs numerics.  Numerics enter only when
an element is compared with 1, through a nested rational enclosure of g.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Iterable, Mapping

from .algebra import as_fraction, parse_polynomial

LESS, EQUAL, GREATER = "Less", "Equal", "Greater"


class RefinementBudgetExceeded(RuntimeError):
    def __init__(self, element, interval, rounds):
        self.interval = interval
        self.rounds = rounds
        super().__init__(
            f"could not separate {element} from 1 after {rounds} refinements; "
            f"value enclosed in [{interval[0]}, {interval[1]}]"
        )


class ExtendedElement:
    """Finite sum of q_z g^z with rational q_z and integer z >= 0."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, object] | None = None):
        clean = {}
        for z, q in (terms or {}).items():
            if not isinstance(z, int) or z < 0:
                raise ValueError(f"exponent {z!r} must be a nonnegative integer")
            q = as_fraction(q)
            if q != 0:
                clean[z] = q
        self._terms = clean

    @classmethod
    def rational(cls, q) -> ExtendedElement:
        return cls({0: q})

    @classmethod
    def monomial(cls, q, z: int) -> ExtendedElement:
        return cls({z: q})

    @classmethod
    def parse(cls, text: str, generator: str = "g") -> ExtendedElement:
        """Literals such as ``"1/2 + 1/8*g^1"``."""
        poly = parse_polynomial(text)
        stray = poly.variables() - {generator}
        if stray:
            raise ValueError(f"unknown symbol(s) {sorted(stray)}; only {generator!r} is allowed")
        return cls({dict(key).get(generator, 0): c for key, c in poly.items()})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return all(z == 0 for z in self._terms)

    def __eq__(self, other):
        if isinstance(other, ExtendedElement):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other):
        other = _coerce(other)
        acc = dict(self._terms)
        for z, q in other._terms.items():
            acc[z] = acc.get(z, 0) + q
        return ExtendedElement(acc)

    __radd__ = __add__

    def __neg__(self):
        return ExtendedElement({z: -q for z, q in self._terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        acc: dict = {}
        for z1, q1 in self._terms.items():
            for z2, q2 in other._terms.items():
                acc[z1 + z2] = acc.get(z1 + z2, 0) + q1 * q2
        return ExtendedElement(acc)

    __rmul__ = __mul__

    def interval_value(self, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
        """Enclosure of the value for any g in [lo, hi], assuming 0 < lo."""
        low = high = Fraction(0)
        for z, q in self._terms.items():
            a, b = q * lo ** z, q * hi ** z
            low += min(a, b)
            high += max(a, b)
        return low, high

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for z in sorted(self._terms):
            q = self._terms[z]
            power = "g" if z == 1 else f"g^{z}"
            body = str(abs(q)) if z == 0 else (f"{abs(q)}*{power}" if abs(q) != 1 else power)
            if not parts:
                parts.append(("-" if q < 0 else "") + body)
            else:
                parts.append((" - " if q < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"ExtendedElement({str(self)!r})"


def _coerce(x) -> ExtendedElement:
    if isinstance(x, ExtendedElement):
        return x
    return ExtendedElement.rational(x)


def elem_add(x: ExtendedElement, y: ExtendedElement) -> ExtendedElement:
    return x + y


def elem_mul(x: ExtendedElement, y: ExtendedElement) -> ExtendedElement:
    return x * y


# ---------------------------------------------------------------------------
# Enclosures


def _arctan_inv_bounds(k: int, terms: int) -> tuple[Fraction, Fraction]:
    """arctan(1/k) lies between consecutive partial sums of its alternating series."""
    x = Fraction(1, k)
    x2 = x * x
    s = Fraction(0)
    power = x
    for i in range(terms):
        s += (power if i % 2 == 0 else -power) / (2 * i + 1)
        power *= x2
    nxt = s + ((power if terms % 2 == 0 else -power) / (2 * terms + 1))
    return min(s, nxt), max(s, nxt)


def machin_pi_bounds(terms: int) -> tuple[Fraction, Fraction]:
    """pi = 16 arctan(1/5) - 4 arctan(1/239), enclosed using ``terms`` series terms each."""
    lo5, hi5 = _arctan_inv_bounds(5, terms)
    lo239, hi239 = _arctan_inv_bounds(239, terms)
    return 16 * lo5 - 4 * hi239, 16 * hi5 - 4 * lo239


@dataclass(frozen=True)
class GeneratorEnclosure:
    """Immutable rational interval [lower, upper] around the generator.

    :meth:`refine` returns a new enclosure nested inside this one and at most
    half as wide; ``level`` is the refinement state handed to ``bounds``.
    """

    lower: Fraction
    upper: Fraction
    bounds: Callable[[int], tuple] = machin_pi_bounds
    level: int = 0

    def __post_init__(self):
        object.__setattr__(self, "lower", as_fraction(self.lower))
        object.__setattr__(self, "upper", as_fraction(self.upper))
        if not 0 < self.lower < self.upper:
            raise ValueError("enclosure needs 0 < lower < upper")

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def refine(self) -> GeneratorEnclosure:
        level = self.level
        while True:
            level += 1
            lo, hi = self.bounds(level)
            lo, hi = max(lo, self.lower), min(hi, self.upper)
            if lo > hi:
                raise ValueError("refinement is inconsistent with the current enclosure")
            if hi - lo <= self.width / 2:
                if lo == hi:
                    raise ValueError("enclosure collapsed to a point; generator is not transcendental")
                return GeneratorEnclosure(lo, hi, self.bounds, level)


def pi_enclosure(lower=Fraction(3), upper=Fraction(22, 7)) -> GeneratorEnclosure:
    return GeneratorEnclosure(Fraction(lower), Fraction(upper), machin_pi_bounds, 0)


def compare_to_one(x: ExtendedElement, e: GeneratorEnclosure | None = None, max_rounds: int = 64) -> str:
    x = _coerce(x)
    if x.is_rational():
        q = x.terms.get(0, Fraction(0))
        return EQUAL if q == 1 else (LESS if q < 1 else GREATER)
    # A term with g^z, z >= 1, makes x transcendental, hence never equal to 1.
    e = e or pi_enclosure()
    for _ in range(max_rounds + 1):
        lo, hi = x.interval_value(e.lower, e.upper)
        if hi < 1:
            return LESS
        if lo > 1:
            return GREATER
        last = (lo, hi)
        e = e.refine()
    raise RefinementBudgetExceeded(x, last, max_rounds)


# ---------------------------------------------------------------------------
# Semigroups

PI_STYLE = "pi_style_multiplicative"
RATIONAL_UNIT = "rational_unit_interval"

_COUNT_WORDS = {2: "two", 3: "three", 4: "four", 5: "five"}


@dataclass(frozen=True)
class SemigroupSpec:
    """``pi_style_multiplicative``: {q g^z : q in Q+, z >= 0} inside (0, 1).
    ``rational_unit_interval``: Q inside (0, 1)."""

    kind: str = PI_STYLE

    def __post_init__(self):
        if self.kind not in (PI_STYLE, RATIONAL_UNIT):
            raise ValueError(f"unknown semigroup kind {self.kind!r}")


@dataclass(frozen=True)
class Membership:
    member: bool
    reason: str

    def __bool__(self):
        return self.member


def membership(x: ExtendedElement, s: SemigroupSpec = SemigroupSpec(),
               e: GeneratorEnclosure | None = None, max_rounds: int = 64) -> Membership:
    x = _coerce(x)
    if x.is_zero():
        return Membership(False, "zero element")
    if len(x) > 1:
        word = _COUNT_WORDS.get(len(x), str(len(x)))
        return Membership(False, f"{word} terms")
    (z, q), = x.terms.items()
    if q <= 0:
        return Membership(False, "nonpositive coefficient")
    if s.kind == RATIONAL_UNIT and z != 0:
        return Membership(False, "not rational")
    cmp = compare_to_one(x, e, max_rounds)
    if cmp != LESS:
        return Membership(False, "not below 1")
    return Membership(True, "single positive term below 1")


@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    checks: tuple  # dicts, in evaluation order
    violation: dict | None = None

    def to_json(self):
        return {"ok": self.ok, "checks": list(self.checks), "violation": self.violation}


def check_q_infinitesimal(s: SemigroupSpec, samples: Iterable[tuple], e: GeneratorEnclosure | None = None,
                          max_rounds: int = 64) -> AxiomReport:
    """For each (q, x): if q*x < 1 then q*x must be a member."""
    checks = []
    violation = None
    for q, x in samples:
        q = as_fraction(q)
        x = _coerce(x)
        if q <= 0:
            raise ValueError("q must be a positive rational")
        if not membership(x, s, e, max_rounds):
            raise ValueError(f"sample {x} is not a member of the semigroup")
        y = x * q
        if compare_to_one(y, e, max_rounds) != LESS:
            checks.append({"q": str(q), "x": str(x), "product": str(y), "status": "skipped"})
            continue
        m = membership(y, s, e, max_rounds)
        status = "pass" if m else "violation"
        entry = {"q": str(q), "x": str(x), "product": str(y), "status": status}
        if not m:
            entry["reason"] = m.reason
            violation = violation or entry
        checks.append(entry)
    return AxiomReport(violation is None, tuple(checks), violation)


def _quotient(x: ExtendedElement, y: ExtendedElement):
    """x / y for single-term elements; returns (coefficient, exponent), exponent possibly negative."""
    (zx, qx), = x.terms.items()
    (zy, qy), = y.terms.items()
    return qx / qy, zx - zy


def check_hl_axioms(samples: Iterable[ExtendedElement], e: GeneratorEnclosure | None = None,
                    s: SemigroupSpec = SemigroupSpec(), max_rounds: int = 64) -> AxiomReport:
    """Sample-level refutation of the HL conditions on S inside (0, 1).

    For every pair (x, y) of samples (with repetition, in sample order) checks:
    additive closure (x + y a member whenever it lies below 1), multiplicative
    closure (x y a member) and the quotient condition (x / y a member whenever
    it lies below 1).  Stops at the first violation.  Passing proves nothing;
    density has no finite certificate.
    """
    samples = [_coerce(x) for x in samples]
    for x in samples:
        if not membership(x, s, e, max_rounds):
            raise ValueError(f"sample {x} is not a member of the semigroup")
    checks = []
    for x, y in combinations_with_replacement(samples, 2):
        total = x + y
        cmp = compare_to_one(total, e, max_rounds)
        if cmp == LESS:
            m = membership(total, s, e, max_rounds)
            entry = {"axiom": "additive closure", "x": str(x), "y": str(y), "value": str(total),
                     "status": "pass" if m else "violation"}
            checks.append(entry)
            if not m:
                entry["reason"] = m.reason
                return AxiomReport(False, tuple(checks), entry)
        else:
            checks.append({"axiom": "additive closure", "x": str(x), "y": str(y), "value": str(total),
                           "status": "skipped"})
        product_ = x * y
        m = membership(product_, s, e, max_rounds)
        entry = {"axiom": "multiplicative closure", "x": str(x), "y": str(y), "value": str(product_),
                 "status": "pass" if m else "violation"}
        checks.append(entry)
        if not m:
            entry["reason"] = m.reason
            return AxiomReport(False, tuple(checks), entry)
        for num, den in ((x, y), (y, x)) if x != y else ((x, y),):
            q, z = _quotient(num, den)
            if z >= 0:
                value = ExtendedElement.monomial(q, z)
                if compare_to_one(value, e, max_rounds) != LESS:
                    continue
                m = membership(value, s, e, max_rounds)
                entry = {"axiom": "quotient", "x": str(num), "y": str(den), "value": str(value),
                         "status": "pass" if m else "violation"}
                if not m:
                    entry["reason"] = m.reason
            else:
                # q g^z with z < 0: decide whether it lies below 1, i.e. q < g^{-z}.
                if compare_to_one(ExtendedElement.monomial(1 / q, -z), e, max_rounds) != GREATER:
                    continue
                entry = {"axiom": "quotient", "x": str(num), "y": str(den), "value": f"{q}*g^{z}",
                         "status": "violation", "reason": "negative generator exponent"}
            checks.append(entry)
            if entry["status"] == "violation":
                return AxiomReport(False, tuple(checks), entry)
    return AxiomReport(True, tuple(checks))

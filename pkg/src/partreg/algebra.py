"""Exact sparse multivariate polynomials over Q, systems of them, and a text parser.

Scalars are :class:`fractions.Fraction` throughout.  A polynomial is stored as a
mapping from a monomial key (a tuple of ``(variable, exponent)`` pairs sorted by
variable name) to a nonzero coefficient, so two polynomials compare equal exactly
when they are mathematically equal.  Display order is graded lexicographic with
respect to a variable order supplied by the owning :class:`PolySystem`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from . import univariate as up

IDENT_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*\Z")

MonoKey = tuple  # tuple[tuple[str, int], ...]


class ParseError(ValueError):
    """Malformed system text.  ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int, token: str | None = None):
        self.position = position
        self.token = token
        where = f" at position {position}"
        if token is not None:
            where += f" (token {token!r})"
        super().__init__(message + where)


class MissingBindingError(ValueError):
    pass


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and strings like ``"2/3"`` to a Fraction.

    Floats are rejected: every value in this package is exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def _mul_keys(a: MonoKey, b: MonoKey) -> MonoKey:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for var, e in b:
        exps[var] = exps.get(var, 0) + e
    return tuple(sorted(exps.items()))


@dataclass(frozen=True)
class Monomial:
    coefficient: Fraction
    exponents: tuple  # ((var, exp), ...) sorted by variable name

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exponents)

    def exponent(self, var: str) -> int:
        for v, e in self.exponents:
            if v == var:
                return e
        return 0


class Polynomial:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[MonoKey, Fraction] | None = None):
        clean = {}
        for key, c in (terms or {}).items():
            if c != 0:
                clean[key] = Fraction(c)
        self._terms = clean
        self._hash = None

    # -- construction -------------------------------------------------------

    @classmethod
    def constant(cls, c) -> Polynomial:
        return cls({(): as_fraction(c)})

    @classmethod
    def variable(cls, name: str) -> Polynomial:
        if not IDENT_RE.match(name):
            raise ValueError(f"invalid variable name {name!r}")
        return cls({((name, 1),): Fraction(1)})

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[Mapping[str, int], object]]) -> Polynomial:
        """Build from ``(exponent map, coefficient)`` pairs; like terms are combined."""
        acc: dict = {}
        for exps, c in terms:
            for var, e in exps.items():
                if e < 0:
                    raise ValueError("negative exponent")
            key = tuple(sorted((v, e) for v, e in exps.items() if e))
            acc[key] = acc.get(key, Fraction(0)) + as_fraction(c)
        return cls(acc)

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not key for key in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get((), Fraction(0))

    def variables(self) -> set[str]:
        return {v for key in self._terms for v, _ in key}

    def total_degree(self) -> int:
        return max((sum(e for _, e in key) for key in self._terms), default=-1)

    def degree_in(self, var: str) -> int:
        return max((dict(key).get(var, 0) for key in self._terms), default=0)

    def monomials(self, order: Iterable[str] | None = None) -> list[Monomial]:
        """Monomials in graded lexicographic order (highest first) for ``order``."""
        order = list(order) if order is not None else sorted(self.variables())
        extra = sorted(self.variables() - set(order))
        rank = {v: i for i, v in enumerate(order + extra)}
        width = len(rank)

        def sort_key(key):
            vec = [0] * width
            for v, e in key:
                vec[rank[v]] = e
            return (-sum(vec), [-x for x in vec])

        return [Monomial(self._terms[k], k) for k in sorted(self._terms, key=sort_key)]

    # -- arithmetic ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == Polynomial.constant(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    @staticmethod
    def _lift(x) -> Polynomial:
        return x if isinstance(x, Polynomial) else Polynomial.constant(x)

    def __add__(self, other):
        other = self._lift(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, 0) + c
        return Polynomial(acc)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        acc: dict = {}
        for ka, ca in self._terms.items():
            for kb, cb in other._terms.items():
                k = _mul_keys(ka, kb)
                acc[k] = acc.get(k, 0) + ca * cb
        return Polynomial(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- evaluation / substitution -------------------------------------------

    def evaluate(self, assignment: Mapping[str, object]) -> Fraction:
        total = Fraction(0)
        for key, c in self._terms.items():
            term = c
            for var, e in key:
                try:
                    val = assignment[var]
                except KeyError:
                    raise MissingBindingError(f"no value bound for variable {var!r}") from None
                term *= as_fraction(val) ** e
            total += term
        return total

    def substitute(self, mapping: Mapping[str, Polynomial]) -> Polynomial:
        """Replace variables by polynomials; unmapped variables are left alone."""
        result = Polynomial()
        for key, c in self._terms.items():
            term = Polynomial.constant(c)
            for var, e in key:
                if var in mapping:
                    term = term * (self._lift(mapping[var]) ** e)
                else:
                    term = term * Polynomial({((var, e),): Fraction(1)})
            result = result + term
        return result

    def diagonal(self) -> list[Fraction]:
        """Coefficients (low to high) of q(t) = P(t, ..., t)."""
        deg = max(self.total_degree(), 0)
        coeffs = [Fraction(0)] * (deg + 1)
        for key, c in self._terms.items():
            coeffs[sum(e for _, e in key)] += c
        return up.trim(coeffs)

    def format(self, order: Iterable[str] | None = None) -> str:
        return format_polynomial(self, order)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"

    def __str__(self):
        return format_polynomial(self)


def format_polynomial(p: Polynomial, order: Iterable[str] | None = None) -> str:
    monos = p.monomials(order)
    if not monos:
        return "0"
    pieces = []
    for i, m in enumerate(monos):
        c = m.coefficient
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        factors = []
        if order is not None:
            rank = {v: j for j, v in enumerate(order)}
            ordered = sorted(m.exponents, key=lambda ve: (rank.get(ve[0], len(rank)), ve[0]))
        else:
            ordered = list(m.exponents)
        for var, e in ordered:
            factors.append(var if e == 1 else f"{var}^{e}")
        if mag != 1 or not factors:
            factors.insert(0, str(mag))
        body = "*".join(factors)
        if i == 0:
            pieces.append(("-" if sign == "-" else "") + body)
        else:
            pieces.append(f" {sign} {body}")
    return "".join(pieces)


@dataclass(frozen=True)
class PolySystem:
    """An ordered list of polynomial equations ``P_j = 0`` over named variables."""

    variables: tuple
    polynomials: tuple

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "polynomials", tuple(self.polynomials))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        for v in self.variables:
            if not IDENT_RE.match(v):
                raise ValueError(f"invalid variable name {v!r}")
        known = set(self.variables)
        for i, p in enumerate(self.polynomials):
            if not isinstance(p, Polynomial):
                raise TypeError("polynomials must be Polynomial instances")
            if p.is_zero():
                raise ValueError(f"equation {i + 1} is identically zero")
            missing = p.variables() - known
            if missing:
                raise ValueError(f"equation {i + 1} uses undeclared variables {sorted(missing)}")

    @classmethod
    def from_polynomials(cls, polys: Iterable[Polynomial], variables: Iterable[str] | None = None):
        """Variables default to first appearance in the given polynomials' printed form."""
        polys = list(polys)
        if variables is None:
            seen: list[str] = []
            for p in polys:
                for m in p.monomials(seen):
                    for var, _ in m.exponents:
                        if var not in seen:
                            seen.append(var)
            variables = seen
        return cls(tuple(variables), tuple(polys))

    def __len__(self):
        return len(self.polynomials)

    def format(self, separator: str = "; ") -> str:
        body = [format_polynomial(p, self.variables) for p in self.polynomials]
        text = separator.join(body)
        if _first_appearance(self.polynomials, self.variables) != list(self.variables):
            decl = "vars: " + ", ".join(self.variables)
            return decl + (separator + text if text else "")
        return text

    def __str__(self):
        return self.format()

    def evaluate(self, assignment: Mapping[str, object]) -> list[Fraction]:
        return evaluate(self, assignment)

    def is_solution(self, assignment: Mapping[str, object]) -> bool:
        return all(v == 0 for v in evaluate(self, assignment))

    def rename(self, mapping: Mapping[str, str]) -> PolySystem:
        subs = {old: Polynomial.variable(new) for old, new in mapping.items()}
        return PolySystem(
            tuple(mapping.get(v, v) for v in self.variables),
            tuple(p.substitute(subs) for p in self.polynomials),
        )


def _first_appearance(polys, order) -> list[str]:
    seen: list[str] = []
    rank = {v: i for i, v in enumerate(order)}
    for p in polys:
        for m in p.monomials(order):
            for var, _ in sorted(m.exponents, key=lambda ve: rank.get(ve[0], len(rank))):
                if var not in seen:
                    seen.append(var)
    return seen


def evaluate(sys: PolySystem, assignment: Mapping[str, object]) -> list[Fraction]:
    """Exact value of every polynomial of ``sys`` at ``assignment``."""
    missing = [v for v in sys.variables if v not in assignment]
    if missing:
        raise MissingBindingError(f"no value bound for variable(s) {missing}")
    return [p.evaluate(assignment) for p in sys.polynomials]


# ---------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<num>\d+)
  | (?P<ident>[a-zA-Z][a-zA-Z0-9_]*)
  | (?P<op>\*\*|[-+*/^()=;:,])
    """,
    re.VERBOSE,
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError("unexpected character", pos, text[pos])
        kind = m.lastgroup
        value = m.group()
        if kind == "nl":
            tokens.append(("sep", value, pos))
        elif kind == "op":
            if value == ";":
                tokens.append(("sep", value, pos))
            else:
                tokens.append(("op", "^" if value == "**" else value, pos))
        elif kind != "ws":
            tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens, order: list[str]):
        self.tokens = tokens
        self.i = 0
        self.order = order

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, tok[2], tok[1] or "end of input")

    def expect_op(self, op):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != op:
            self.error(f"expected {op!r}")
        return self.take()

    def statement(self) -> Polynomial:
        lhs = self.expr()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "=":
            self.take()
            lhs = lhs - self.expr()
        return lhs

    def expr(self) -> Polynomial:
        result = self.term()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                rhs = self.term()
                result = result + rhs if tok[1] == "+" else result - rhs
            else:
                return result

    def term(self) -> Polynomial:
        result = self.unary()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                result = result * self.unary()
            elif tok[0] == "op" and tok[1] == "/":
                self.take()
                divisor_tok = self.peek()
                divisor = self.unary()
                if not divisor.is_constant() or divisor.is_zero():
                    self.error("division only by a nonzero constant", divisor_tok)
                result = result * Polynomial.constant(1 / divisor.constant_value())
            elif tok[0] in ("num", "ident") or (tok[0] == "op" and tok[1] == "("):
                result = result * self.power()
            else:
                return result

    def unary(self) -> Polynomial:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            inner = self.unary()
            return -inner if tok[1] == "-" else inner
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            exp_tok = self.peek()
            if exp_tok[0] != "num":
                self.error("exponent must be a nonnegative integer literal")
            self.take()
            return base ** int(exp_tok[1])
        return base

    def atom(self) -> Polynomial:
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            return Polynomial.constant(int(tok[1]))
        if tok[0] == "ident":
            self.take()
            if tok[1] not in self.order:
                self.order.append(tok[1])
            return Polynomial.variable(tok[1])
        if tok[0] == "op" and tok[1] == "(":
            self.take()
            inner = self.expr()
            self.expect_op(")")
            return inner
        self.error("unexpected token")


def _split_statements(tokens):
    stmts, cur = [], []
    for tok in tokens:
        if tok[0] in ("sep", "end"):
            if cur:
                stmts.append(cur + [("end", "", tok[2])])
            cur = []
        else:
            cur.append(tok)
    return stmts


def parse_polynomial(text: str, order: list[str] | None = None) -> Polynomial:
    """Parse a single expression (``lhs = rhs`` allowed)."""
    tokens = _tokenize(text)
    stmts = _split_statements(tokens)
    if len(stmts) != 1:
        raise ParseError("expected exactly one expression", 0)
    parser = _Parser(stmts[0], order if order is not None else [])
    poly = parser.statement()
    if parser.peek()[0] != "end":
        parser.error("unexpected token")
    return poly


def parse_system(text: str) -> PolySystem:
    """Parse ``;``/newline separated equations into a canonical :class:`PolySystem`.

    An optional leading ``vars: x, y, z`` statement fixes the variable order;
    otherwise variables are ordered by first appearance in the text.
    """
    stmts = _split_statements(_tokenize(text))
    if not stmts:
        raise ParseError("empty input", 0)
    order: list[str] = []
    declared = None
    if len(stmts[0]) >= 2 and stmts[0][0][:2] == ("ident", "vars") and stmts[0][1][:2] == ("op", ":"):
        decl = stmts.pop(0)
        declared = []
        expect_name = True
        for tok in decl[2:-1]:
            if expect_name:
                if tok[0] != "ident":
                    raise ParseError("expected variable name in declaration", tok[2], tok[1])
                if tok[1] in declared:
                    raise ParseError("duplicate variable in declaration", tok[2], tok[1])
                declared.append(tok[1])
            elif tok[:2] != ("op", ","):
                raise ParseError("expected ',' in declaration", tok[2], tok[1])
            expect_name = not expect_name
        if not declared or expect_name:
            raise ParseError("malformed variable declaration", decl[0][2])
        order = list(declared)
        if not stmts:
            return PolySystem(tuple(declared), ())
    polys = []
    for stmt in stmts:
        parser = _Parser(stmt, order)
        poly = parser.statement()
        if parser.peek()[0] != "end":
            parser.error("unexpected token")
        if poly.is_zero():
            raise ParseError("equation is identically zero", stmt[0][2], stmt[0][1])
        polys.append(poly)
    if declared is not None and len(order) != len(declared):
        extra = order[len(declared):]
        raise ParseError(f"undeclared variable(s) {extra}", 0)
    # Canonical variable order is first appearance in the source text, which the
    # parser recorded while reading.
    return PolySystem(tuple(order), tuple(polys))


# ---------------------------------------------------------------------------
# Structural analysis


@dataclass(frozen=True)
class HomogeneityVerdict:
    homogeneous: bool
    degrees: tuple  # per polynomial: common total degree, or None where it fails
    failure: tuple | None = None  # (poly index, monomial text, monomial text)

    def __bool__(self):
        return self.homogeneous

    def to_dict(self):
        d = {"homogeneous": self.homogeneous, "degrees": list(self.degrees)}
        if self.failure is not None:
            idx, m1, m2 = self.failure
            d["failure"] = {"equation": idx + 1, "monomials": [m1, m2]}
        return d


def is_homogeneous(sys: PolySystem) -> HomogeneityVerdict:
    """Syntactic check: every polynomial has all monomials of one total degree."""
    degrees = []
    failure = None
    for idx, p in enumerate(sys.polynomials):
        monos = p.monomials(sys.variables)
        first = monos[0]
        bad = next((m for m in monos[1:] if m.degree != first.degree), None)
        if bad is None:
            degrees.append(first.degree)
        else:
            degrees.append(None)
            if failure is None:
                failure = (
                    idx,
                    format_polynomial(Polynomial({first.exponents: first.coefficient}), sys.variables),
                    format_polynomial(Polynomial({bad.exponents: bad.coefficient}), sys.variables),
                )
    return HomogeneityVerdict(failure is None, tuple(degrees), failure)


@dataclass(frozen=True)
class ConstantSolutionReport:
    """Outcome of searching for t > 0 with P_i(t, ..., t) = 0 for every i.

    ``kind`` is ``"none"``, ``"interval"`` (``interval`` isolates one positive
    root of the gcd) or ``"all"`` (every diagonal restriction vanishes).
    """

    kind: str
    interval: tuple | None = None
    gcd: tuple = ()
    positive_roots: int | None = None

    def to_dict(self):
        d = {"kind": self.kind, "gcd": [str(c) for c in self.gcd]}
        if self.interval is not None:
            d["interval"] = [str(self.interval[0]), str(self.interval[1])]
        if self.positive_roots is not None:
            d["positive_roots"] = self.positive_roots
        return d


def has_constant_positive_solution(sys: PolySystem) -> ConstantSolutionReport:
    diag = [p.diagonal() for p in sys.polynomials]
    nonzero = [q for q in diag if q]
    if not nonzero:
        return ConstantSolutionReport("all")
    g: list = []
    for q in nonzero:
        g = up.gcd(g, q)
    count = up.count_positive_roots(g)
    if count == 0:
        return ConstantSolutionReport("none", None, tuple(g), 0)
    return ConstantSolutionReport("interval", up.isolate_positive_root(g), tuple(g), count)


def substitute_system(sys: PolySystem, mapping: Mapping[str, Polynomial],
                      variables: Iterable[str] | None = None) -> PolySystem:
    """Substitute polynomials for variables throughout ``sys``.

    Equations that collapse to 0 are dropped.  The new variable list keeps the
    surviving original order followed by any new names, unless given explicitly.
    """
    polys = [p.substitute(mapping) for p in sys.polynomials]
    polys = [p for p in polys if not p.is_zero()]
    if variables is None:
        used = set().union(*(p.variables() for p in polys)) if polys else set()
        keep = [v for v in sys.variables if v not in mapping or v in used]
        new = []
        for p in polys:
            for m in p.monomials(keep + new):
                for var, _ in m.exponents:
                    if var not in keep and var not in new:
                        new.append(var)
        variables = keep + new
    return PolySystem(tuple(variables), tuple(polys))


def identify_variables(sys: PolySystem, pairs: Mapping[str, str]) -> PolySystem:
    """Identify variables: every ``old`` in ``pairs`` is replaced by ``pairs[old]``."""
    for old, new in pairs.items():
        if old not in sys.variables or new not in sys.variables:
            raise ValueError(f"cannot identify {old!r} with {new!r}: unknown variable")
    mapping = {old: Polynomial.variable(new) for old, new in pairs.items()}
    variables = [v for v in sys.variables if v not in pairs]
    return substitute_system(sys, mapping, variables)

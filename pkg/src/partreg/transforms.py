"""Derived systems: reciprocal transform, power substitution, lev families,
merged systems and the AP / finite-sums generator systems."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .algebra import (
    ConstantSolutionReport,
    Polynomial,
    PolySystem,
    as_fraction,
    has_constant_positive_solution,
)
from .rado import RationalMatrix


@dataclass(frozen=True)
class TransformReport:
    name: str
    input: tuple  # input systems
    output: PolySystem
    correspondence: dict
    solution_map: str
    constant_solution: ConstantSolutionReport | None = None
    renamed: dict = field(default_factory=dict)

    def to_json(self):
        d = {
            "transform": self.name,
            "input": [s.format() for s in self.input],
            "output": self.output.format(),
            "variables": list(self.output.variables),
            "correspondence": dict(self.correspondence),
            "solution_map": self.solution_map,
        }
        if self.constant_solution is not None:
            d["constant_solution"] = self.constant_solution.to_dict()
        if self.renamed:
            d["renamed"] = dict(self.renamed)
        return d


def reciprocal_polynomial(p: Polynomial) -> Polynomial:
    """P(1/x_1, ..., 1/x_n) times prod x_i^{d_i}, d_i the top power of x_i in P."""
    top = {v: p.degree_in(v) for v in p.variables()}
    acc = {}
    for key, c in p.items():
        exps = dict(key)
        new = tuple(sorted((v, d - exps.get(v, 0)) for v, d in top.items() if d - exps.get(v, 0)))
        acc[new] = c
    return Polynomial(acc)


def reciprocal_transform(sys: PolySystem) -> TransformReport:
    out = PolySystem(sys.variables, tuple(reciprocal_polynomial(p) for p in sys.polynomials))
    return TransformReport(
        name="reciprocal",
        input=(sys,),
        output=out,
        correspondence={v: f"1/{v}" for v in sys.variables},
        solution_map="positive tuple (a_1..a_n) solves output iff (1/a_1..1/a_n) solves input",
        constant_solution=has_constant_positive_solution(sys),
    )


def power_substitution(A: RationalMatrix, r: int) -> PolySystem:
    """The system ``A x^r = 0`` over variables x1..xv.  Zero rows are dropped."""
    if not isinstance(r, int) or r < 1:
        raise ValueError("r must be a positive integer")
    names = tuple(f"x{j + 1}" for j in range(A.v))
    polys = []
    for row in A.rows:
        p = Polynomial({((names[j], r),): c for j, c in enumerate(row) if c != 0})
        if not p.is_zero():
            polys.append(p)
    return PolySystem(names, tuple(polys))


@dataclass(frozen=True)
class LevSpec:
    """sum_i a_i x_i prod_{j in F_i} y_j, with F_i given as 1-based subsets of {1..m}."""

    coeffs: tuple
    subsets: tuple
    m: int

    def __post_init__(self):
        coeffs = tuple(as_fraction(c) for c in self.coeffs)
        subsets = tuple(frozenset(int(j) for j in F) for F in self.subsets)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "subsets", subsets)
        if len(coeffs) < 2:
            raise ValueError("need n >= 2 x-variables")
        if len(subsets) != len(coeffs):
            raise ValueError("one subset F_i per coefficient")
        if any(c == 0 for c in coeffs):
            raise ValueError("coefficients must be nonzero")
        if self.m < 0:
            raise ValueError("m must be >= 0")
        for F in subsets:
            if any(not 1 <= j <= self.m for j in F):
                raise ValueError(f"subset {sorted(F)} is not inside 1..{self.m}")

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def x_names(self):
        return tuple(f"x{i + 1}" for i in range(self.n))

    def y_names(self):
        return tuple(f"y{j + 1}" for j in range(self.m))

    def to_json(self):
        return {
            "coeffs": [str(c) for c in self.coeffs],
            "subsets": [sorted(F) for F in self.subsets],
            "m": self.m,
        }

    @classmethod
    def from_json(cls, data) -> LevSpec:
        if set(data) != {"coeffs", "subsets", "m"}:
            raise ValueError(f"lev spec fields must be exactly coeffs, subsets, m; got {sorted(data)}")
        return cls(tuple(data["coeffs"]), tuple(tuple(F) for F in data["subsets"]), int(data["m"]))


def lev_family(spec: LevSpec) -> Polynomial:
    xs, ys = spec.x_names(), spec.y_names()
    terms = []
    for a, x, F in zip(spec.coeffs, xs, spec.subsets):
        exps = {x: 1}
        for j in F:
            exps[ys[j - 1]] = 1
        terms.append((exps, a))
    return Polynomial.from_terms(terms)


def lev_system(spec: LevSpec) -> PolySystem:
    return PolySystem(spec.x_names() + spec.y_names(), (lev_family(spec),))


def _fresh_name(base: str, taken: set[str]) -> str:
    k = 2
    while f"{base}_{k}" in taken:
        k += 1
    return f"{base}_{k}"


def merge_systems(sys1: PolySystem, sys2: PolySystem, link: tuple[str, str] | None = None) -> TransformReport:
    """Both systems plus the linking equation ``x - y``.

    By default ``x`` and ``y`` are the first declared variables of each system.
    Names of ``sys2`` clashing with ``sys1`` get a ``_2`` (or ``_3``...) suffix;
    ``link[1]`` refers to the name *before* renaming.
    """
    if not sys1.variables or not sys2.variables:
        raise ValueError("both systems need at least one variable")
    left, right = link if link is not None else (sys1.variables[0], sys2.variables[0])
    if left not in sys1.variables:
        raise ValueError(f"{left!r} is not a variable of the first system")
    if right not in sys2.variables:
        raise ValueError(f"{right!r} is not a variable of the second system")
    taken = set(sys1.variables) | set(sys2.variables)
    renamed = {}
    for v in sys2.variables:
        if v in sys1.variables:
            new = _fresh_name(v, taken)
            taken.add(new)
            renamed[v] = new
    sys2r = sys2.rename(renamed) if renamed else sys2
    right_r = renamed.get(right, right)
    linking = Polynomial.variable(left) - Polynomial.variable(right_r)
    out = PolySystem(sys1.variables + sys2r.variables, sys1.polynomials + sys2r.polynomials + (linking,))
    return TransformReport(
        name="merge",
        input=(sys1, sys2),
        output=out,
        correspondence={left: right_r},
        solution_map="solutions of the output restrict to solutions of both inputs with "
                     f"{left} = {right_r}",
        renamed=renamed,
    )


def ap_system(k: int) -> PolySystem:
    """t_i = a + i d for i = 1..k; the monochromatic tuple is (a, d, t_1..t_k)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    a, d = Polynomial.variable("a"), Polynomial.variable("d")
    ts = [f"t{i}" for i in range(1, k + 1)]
    polys = tuple(Polynomial.variable(t) - a - i * d for i, t in enumerate(ts, start=1))
    return PolySystem(("a", "d", *ts), polys)


def _fs_name(F, m) -> str:
    if m < 10:
        return "s" + "".join(str(j) for j in F)
    return "s_" + "_".join(str(j) for j in F)


def fs_system(m: int) -> PolySystem:
    """s_F = sum_{j in F} y_j for every F with |F| >= 2."""
    if m < 1:
        raise ValueError("m must be >= 1")
    ys = [f"y{j}" for j in range(1, m + 1)]
    names, polys = [], []
    for size in range(2, m + 1):
        for F in combinations(range(1, m + 1), size):
            name = _fs_name(F, m)
            names.append(name)
            p = Polynomial.variable(name)
            for j in F:
                p = p - Polynomial.variable(ys[j - 1])
            polys.append(p)
    return PolySystem(tuple(ys + names), tuple(polys))


def power_matrix_report(A: RationalMatrix, r: int) -> TransformReport:
    out = power_substitution(A, r)
    return TransformReport(
        name="power",
        input=(),
        output=out,
        correspondence={v: f"{v}^{r}" for v in out.variables},
        solution_map=f"(a_1..a_v) solves output iff (a_1^{r}..a_v^{r}) solves A x = 0",
    )

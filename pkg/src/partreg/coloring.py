"""Finite evidence for partition regularity: solution hypergraphs over finite
ground sets and a backtracking search for colorings with no monochromatic solution.

An *avoiding* coloring is a finite refutation certificate at one ground set;
an *exhausted* search says every r-coloring of that ground set has a
monochromatic solution.  Neither says anything about the infinite statement.
"""

from __future__ import annotations

import math
import sys
import time
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from .algebra import Polynomial, PolySystem, as_fraction, is_homogeneous

DEFAULT_TUPLE_CAP = 10 ** 8
DEFAULT_MAX_ENUM_VARS = 6
SPLIT_ELEMENTS = 8  # fixed prefix length for subproblem decomposition


class TupleCapExceeded(RuntimeError):
    def __init__(self, needed, cap):
        self.needed = needed
        self.cap = cap
        super().__init__(f"enumeration needs {needed} candidate tuples, cap is {cap}")


class NotHomogeneousError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Ground sets


@dataclass(frozen=True)
class GroundSet:
    kind: str
    params: tuple
    elements: tuple

    def __post_init__(self):
        elems = tuple(as_fraction(x) for x in self.elements)
        object.__setattr__(self, "elements", elems)
        if any(x <= 0 for x in elems):
            raise ValueError("ground set elements must be positive")
        if any(a >= b for a, b in zip(elems, elems[1:])):
            raise ValueError("ground set elements must be strictly increasing")

    @classmethod
    def integer_range(cls, n: int) -> GroundSet:
        return cls("integer_range", (("N", n),), tuple(Fraction(k) for k in range(1, n + 1)))

    @classmethod
    def rational_grid(cls, denominator: int, size: int, epsilon=None) -> GroundSet:
        """{k/D : 1 <= k <= M, k/D < epsilon}."""
        if denominator < 1 or size < 0:
            raise ValueError("grid needs D >= 1 and M >= 0")
        eps = None if epsilon is None else as_fraction(epsilon)
        elems = [Fraction(k, denominator) for k in range(1, size + 1)]
        if eps is not None:
            elems = [x for x in elems if x < eps]
        params = (("D", denominator), ("M", size), ("epsilon", None if eps is None else str(eps)))
        return cls("rational_grid", params, tuple(elems))

    @classmethod
    def geometric(cls, base, kmax: int, epsilon=None) -> GroundSet:
        """{base^k : 1 <= k <= kmax, base^k < epsilon} for 0 < base < 1, listed increasingly."""
        base = as_fraction(base)
        if not 0 < base < 1:
            raise ValueError("geometric grid needs 0 < base < 1")
        eps = None if epsilon is None else as_fraction(epsilon)
        elems = [base ** k for k in range(kmax, 0, -1)]
        if eps is not None:
            elems = [x for x in elems if x < eps]
        params = (("base", str(base)), ("kmax", kmax), ("epsilon", None if eps is None else str(eps)))
        return cls("geometric", params, tuple(elems))

    @classmethod
    def explicit(cls, elements: Iterable) -> GroundSet:
        return cls("explicit", (), tuple(sorted({as_fraction(x) for x in elements})))

    def scaled(self, lam) -> GroundSet:
        lam = as_fraction(lam)
        if lam <= 0:
            raise ValueError("scale factor must be positive")
        return GroundSet("scaled", (("base_kind", self.kind), ("lambda", str(lam))) + self.params,
                         tuple(lam * x for x in self.elements))

    def __len__(self):
        return len(self.elements)

    @cached_property
    def index(self) -> dict:
        return {x: i for i, x in enumerate(self.elements)}

    def describe(self) -> dict:
        return {"kind": self.kind, "params": {k: v for k, v in self.params}, "size": len(self.elements)}


# ---------------------------------------------------------------------------
# Solution enumeration


@dataclass(frozen=True)
class SolutionHypergraph:
    system: PolySystem
    ground: GroundSet
    tuples: tuple  # index vectors in system variable order, sorted
    edges: tuple  # sorted tuples of distinct indices, deduplicated, sorted

    @property
    def forced(self) -> tuple:
        return tuple(e for e in self.edges if len(e) == 1)

    def values(self, t: Sequence[int]) -> tuple:
        return tuple(self.ground.elements[i] for i in t)


def _compile(p: Polynomial, rank: dict) -> list:
    return [(c, tuple((rank[v], e) for v, e in key)) for key, c in p.items()]


def _eval_compiled(terms, vals) -> Fraction:
    total = 0
    for c, factors in terms:
        t = c
        for i, e in factors:
            t = t * (vals[i] if e == 1 else vals[i] ** e)
        total += t
    return total


def _split_on(p: Polynomial, var: str):
    """Write p = L * var^k + R with L, R free of var; None if var enters with two powers."""
    k = p.degree_in(var)
    if k == 0:
        return None
    lead, rest = {}, {}
    for key, c in p.items():
        exps = dict(key)
        e = exps.pop(var, 0)
        if e == k:
            lead[tuple(sorted(exps.items()))] = c
        elif e == 0:
            rest[key] = c
        else:
            return None
    return k, Polynomial(lead), Polynomial(rest)


def _int_root(n: int, k: int) -> int | None:
    if n < 0:
        return None
    if k == 1:
        return n
    if k == 2:
        r = math.isqrt(n)
    else:
        r = int(round(n ** (1.0 / k))) if n < 2 ** 1000 else _int_root_newton(n, k)
        while r ** k > n:
            r -= 1
        while (r + 1) ** k <= n:
            r += 1
    return r if r ** k == n else None


def _int_root_newton(n: int, k: int) -> int:
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _positive_root(value: Fraction, k: int) -> Fraction | None:
    if value <= 0:
        return None
    num = _int_root(value.numerator, k)
    den = _int_root(value.denominator, k)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _plan(sys: PolySystem):
    """Greedy evaluation plan: enumerate variables in declared order, but solve a
    variable from an equation as soon as it is that equation's only unknown."""
    rank = {v: i for i, v in enumerate(sys.variables)}
    assigned: set[str] = set()
    used_eqs: set[int] = set()
    checked: set[int] = set()
    steps = []
    eq_vars = [p.variables() for p in sys.polynomials]

    def add_checks():
        ready = [j for j, vs in enumerate(eq_vars) if j not in used_eqs and j not in checked and vs <= assigned]
        for j in ready:
            checked.add(j)
        return tuple(_compile(sys.polynomials[j], rank) for j in ready)

    initial_checks = add_checks()
    while len(assigned) < len(sys.variables):
        step = None
        for j, vs in enumerate(eq_vars):
            if j in used_eqs or j in checked:
                continue
            unknown = vs - assigned
            if len(unknown) == 1:
                (var,) = unknown
                split = _split_on(sys.polynomials[j], var)
                if split is not None:
                    k, lead, rest = split
                    step = ("solve", rank[var], k, _compile(lead, rank), _compile(rest, rank))
                    used_eqs.add(j)
                    assigned.add(var)
                    break
        if step is None:
            var = next(v for v in sys.variables if v not in assigned)
            step = ("enum", rank[var])
            assigned.add(var)
        steps.append(step + (add_checks(),))
    return initial_checks, steps


def enumerate_solutions(sys: PolySystem, g: GroundSet, cap: int = DEFAULT_TUPLE_CAP,
                        max_enum_vars: int = DEFAULT_MAX_ENUM_VARS) -> SolutionHypergraph:
    """Every tuple over the ground set solving all equations exactly.

    A variable that is the last unknown of some equation, entering it as
    L * x^k + R, is solved for (an exact rational k-th root) instead of enumerated.
    """
    if not g.elements:
        raise ValueError("ground set is empty")
    initial_checks, steps = _plan(sys)
    n_enum = sum(1 for s in steps if s[0] == "enum")
    if n_enum > max_enum_vars:
        raise ValueError(f"{n_enum} variables must be brute-forced; limit is {max_enum_vars}")
    needed = len(g) ** n_enum
    if needed > cap:
        raise TupleCapExceeded(needed, cap)
    elems = g.elements
    index = g.index
    nvars = len(sys.variables)
    vals = [None] * nvars
    idx = [0] * nvars
    found = []

    def passes(checks):
        return all(_eval_compiled(c, vals) == 0 for c in checks)

    def rec(depth):
        if depth == len(steps):
            found.append(tuple(idx))
            return
        step = steps[depth]
        checks = step[-1]
        if step[0] == "enum":
            pos = step[1]
            for i, x in enumerate(elems):
                vals[pos] = x
                idx[pos] = i
                if passes(checks):
                    rec(depth + 1)
            return
        _, pos, k, lead, rest = step[:5]
        L = _eval_compiled(lead, vals)
        R = _eval_compiled(rest, vals)
        if L == 0:
            candidates = enumerate(elems) if R == 0 else ()
        else:
            x = _positive_root(Fraction(-R) / L, k)
            candidates = ((index[x], x),) if x is not None and x in index else ()
        for i, x in candidates:
            vals[pos] = x
            idx[pos] = i
            if passes(checks):
                rec(depth + 1)

    if all(_eval_compiled(c, vals) == 0 for c in initial_checks):
        rec(0)
    found.sort()
    for t in found:
        point = {v: elems[i] for v, i in zip(sys.variables, t)}
        if not sys.is_solution(point):  # pragma: no cover - guards the solver plan
            raise AssertionError(f"enumerated non-solution {point}")
    edges = sorted({tuple(sorted(set(t))) for t in found})
    return SolutionHypergraph(sys, g, tuple(found), tuple(edges))


# ---------------------------------------------------------------------------
# Coloring search

AVOIDING, EXHAUSTED, TIMEOUT = "avoiding", "exhausted", "timeout"


@dataclass(frozen=True)
class ColoringCertificate:
    r: int
    colors: tuple  # colors[i] in 1..r for ground element i

    def classes(self) -> list[list[int]]:
        out = [[] for _ in range(self.r)]
        for i, c in enumerate(self.colors):
            out[c - 1].append(i)
        return out

    def monochromatic_edges(self, edges) -> list:
        return [e for e in edges if len({self.colors[i] for i in e}) == 1]

    def to_json(self, ground: GroundSet):
        return {
            "r": self.r,
            "colors": [[str(ground.elements[i]), c] for i, c in enumerate(self.colors)],
            "classes": [[str(ground.elements[i]) for i in cls] for cls in self.classes()],
        }


@dataclass(frozen=True)
class SearchResult:
    status: str
    r: int
    ground: GroundSet
    certificate: ColoringCertificate | None = None
    stats: dict = field(default_factory=dict)

    @property
    def avoiding(self) -> bool:
        return self.status == AVOIDING

    @property
    def exhausted(self) -> bool:
        return self.status == EXHAUSTED

    def to_json(self):
        d = {"status": self.status, "r": self.r, "ground": self.ground.describe(), "stats": dict(self.stats)}
        if self.certificate is not None:
            d["certificate"] = self.certificate.to_json(self.ground)
        return d


class _Timeout(Exception):
    pass


class _Search:
    """Backtracking over elements in ascending order with not-all-equal edges.

    ``domain[i]`` is a bitmask of still-allowed colors (bit c for color c).
    After each assignment, an edge whose colored members share one color and
    which has exactly one uncolored member removes that color from the
    uncolored member's domain.
    """

    def __init__(self, n: int, edges: Sequence[tuple], r: int, deadline: float | None = None):
        self.n = n
        self.r = r
        self.edges = [tuple(e) for e in edges]
        self.incidence = [[] for _ in range(n)]
        for k, e in enumerate(self.edges):
            for i in e:
                self.incidence[i].append(k)
        self.color = [0] * n
        self.full = ((1 << (r + 1)) - 1) & ~1
        self.domain = [self.full] * n
        self.trail: list[tuple[int, int]] = []
        self.nodes = 0
        self.deadline = deadline

    def assign(self, i: int, c: int) -> bool:
        self.color[i] = c
        color = self.color
        for k in self.incidence[i]:
            uncolored = -1
            n_unc = 0
            seen = 0
            for j in self.edges[k]:
                cj = color[j]
                if cj:
                    seen |= 1 << cj
                else:
                    n_unc += 1
                    uncolored = j
            if seen & (seen - 1):
                continue  # two colors present: edge satisfied
            if n_unc == 0:
                return False
            if n_unc == 1:
                dom = self.domain[uncolored]
                if dom & seen:
                    self.trail.append((uncolored, dom))
                    dom &= ~seen
                    self.domain[uncolored] = dom
                    if not dom:
                        return False
        return True

    def undo(self, i: int, mark: int):
        self.color[i] = 0
        trail = self.trail
        while len(trail) > mark:
            j, dom = trail.pop()
            self.domain[j] = dom

    def allowed(self, i: int, maxused: int) -> list[int]:
        top = min(self.r, maxused + 1)
        dom = self.domain[i]
        return [c for c in range(1, top + 1) if dom >> c & 1]

    def dfs(self, i: int, maxused: int) -> bool:
        self.nodes += 1
        if self.deadline is not None and self.nodes & 1023 == 0 and time.monotonic() > self.deadline:
            raise _Timeout
        if i == self.n:
            return True
        for c in self.allowed(i, maxused):
            mark = len(self.trail)
            if self.assign(i, c) and self.dfs(i + 1, max(maxused, c)):
                return True
            self.undo(i, mark)
        return False

    def prefixes(self, depth: int) -> list[tuple]:
        """All consistent colorings of the first ``depth`` elements, in search order."""
        out = []

        def rec(i, maxused, acc):
            self.nodes += 1
            if i == depth:
                out.append(tuple(acc))
                return
            for c in self.allowed(i, maxused):
                mark = len(self.trail)
                if self.assign(i, c):
                    acc.append(c)
                    rec(i + 1, max(maxused, c), acc)
                    acc.pop()
                self.undo(i, mark)

        rec(0, 0, [])
        return out


def _solve_prefix(n, edges, r, prefix, budget):
    """Worker entry point: extend one prefix coloring to a full avoiding coloring."""
    deadline = None if budget is None else time.monotonic() + budget
    s = _Search(n, edges, r, deadline)
    maxused = 0
    for i, c in enumerate(prefix):
        if not s.assign(i, c):  # pragma: no cover - prefixes are generated consistent
            raise AssertionError("inconsistent prefix")
        maxused = max(maxused, c)
    old = sys.getrecursionlimit()
    if n + 100 > old:
        sys.setrecursionlimit(n + 100)
    try:
        ok = s.dfs(len(prefix), maxused)
    except _Timeout:
        return "timeout", None, s.nodes
    finally:
        sys.setrecursionlimit(old)
    return ("found", tuple(s.color), s.nodes) if ok else ("none", None, s.nodes)


def _make_executor(workers: int) -> Executor | None:
    return ProcessPoolExecutor(max_workers=workers) if workers > 1 else None


def find_avoiding_coloring(h: SolutionHypergraph, r: int, timeout: float | None = None,
                           workers: int = 1, executor: Executor | None = None) -> SearchResult:
    """Search for an r-coloring of the ground set with no monochromatic edge.

    Symmetry breaking: the first element gets color 1 and a color c > 1 is only
    used once c - 1 is.  The search is split into subproblems by coloring the
    first few elements; subproblems may run in parallel, and results are merged
    in subproblem order, so the outcome and statistics do not depend on ``workers``.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    n = len(h.ground)
    forced = h.forced
    if forced:
        i = forced[0][0]
        witness = next(t for t in h.tuples if set(t) == {i})
        return SearchResult(EXHAUSTED, r, h.ground, None, {
            "reason": "constant solution",
            "forced_tuple": [str(x) for x in h.values(witness)],
            "nodes": 0,
        })
    start = time.monotonic()
    deadline = None if timeout is None else start + timeout
    root = _Search(n, h.edges, r)
    depth = min(n, SPLIT_ELEMENTS)
    frontier = root.prefixes(depth)
    stats = {"frontier": len(frontier), "prefix_nodes": root.nodes}
    own = None
    if executor is None and workers > 1 and len(frontier) > 1:
        executor = own = _make_executor(workers)
    try:
        outcome = _run_frontier(n, h.edges, r, frontier, deadline, executor)
    finally:
        if own is not None:
            own.shutdown(cancel_futures=True)
    kind, coloring, explored, nodes = outcome
    stats.update({"subproblems": explored, "nodes": stats["prefix_nodes"] + nodes})
    if kind == "timeout":
        return SearchResult(TIMEOUT, r, h.ground, None, stats)
    if kind == "none":
        return SearchResult(EXHAUSTED, r, h.ground, None, stats)
    cert = ColoringCertificate(r, coloring)
    bad = cert.monochromatic_edges(h.edges)
    if bad or len(coloring) != n or not all(1 <= c <= r for c in coloring):  # pragma: no cover
        raise AssertionError(f"search produced an invalid coloring (monochromatic edges {bad})")
    return SearchResult(AVOIDING, r, h.ground, cert, stats)


def _run_frontier(n, edges, r, frontier, deadline, executor):
    def budget():
        return None if deadline is None else max(deadline - time.monotonic(), 0.0)

    total = 0
    if executor is None:
        for k, prefix in enumerate(frontier, start=1):
            kind, coloring, nodes = _solve_prefix(n, edges, r, prefix, budget())
            total += nodes
            if kind != "none":
                return kind, coloring, k, total
        return "none", None, len(frontier), total
    futures = [executor.submit(_solve_prefix, n, edges, r, prefix, budget()) for prefix in frontier]
    try:
        for k, fut in enumerate(futures, start=1):
            kind, coloring, nodes = fut.result()
            total += nodes
            if kind != "none":
                return kind, coloring, k, total
        return "none", None, len(frontier), total
    finally:
        for fut in futures:
            fut.cancel()


def brute_force_avoiding(h: SolutionHypergraph, r: int) -> tuple | None:
    """Reference oracle: the first coloring in r^n order with no monochromatic edge."""
    n = len(h.ground)
    if h.forced:
        return None
    for colors in product(range(1, r + 1), repeat=n):
        if all(len({colors[i] for i in e}) > 1 for e in h.edges):
            return colors
    return None


# ---------------------------------------------------------------------------
# Thresholds and probes


@dataclass(frozen=True)
class ThresholdReport:
    status: str  # "threshold", "budget" or "timeout"
    r: int
    threshold: int | None
    lower_bound: int
    avoiding: SearchResult | None
    exhausted: SearchResult | None
    history: tuple = ()

    def to_json(self):
        return {
            "status": self.status,
            "r": self.r,
            "threshold": self.threshold,
            "lower_bound": self.lower_bound,
            "avoiding": None if self.avoiding is None else self.avoiding.to_json(),
            "exhausted": None if self.exhausted is None else self.exhausted.to_json(),
            "history": [list(h) for h in self.history],
        }


def family_ground(index: int, denominator: int | None = None) -> GroundSet:
    if denominator is None:
        return GroundSet.integer_range(index)
    return GroundSet.rational_grid(denominator, index)


def rado_number(sys: PolySystem, r: int, max_n: int, min_n: int = 1, denominator: int | None = None,
                timeout: float | None = None, workers: int = 1, cap: int = DEFAULT_TUPLE_CAP) -> ThresholdReport:
    """Smallest N in [min_n, max_n] whose ground set admits no avoiding r-coloring.

    Ground sets are {1..N}, or {k/D : k <= N} when ``denominator`` is given.  The
    family is increasing, so the first exhausted index is the threshold.
    """
    if min_n < 1 or max_n < min_n:
        raise ValueError("need 1 <= min_n <= max_n")
    start = time.monotonic()
    previous = None
    history = []
    executor = _make_executor(workers)
    try:
        for N in range(min_n, max_n + 1):
            remaining = None if timeout is None else timeout - (time.monotonic() - start)
            if remaining is not None and remaining <= 0:
                return ThresholdReport("timeout", r, None, N, previous, None, tuple(history))
            h = enumerate_solutions(sys, family_ground(N, denominator), cap=cap)
            res = find_avoiding_coloring(h, r, timeout=remaining, executor=executor)
            history.append((N, res.status))
            if res.status == TIMEOUT:
                return ThresholdReport("timeout", r, None, N, previous, None, tuple(history))
            if res.exhausted:
                return ThresholdReport("threshold", r, N, N, previous, res, tuple(history))
            previous = res
    finally:
        if executor is not None:
            executor.shutdown(cancel_futures=True)
    return ThresholdReport("budget", r, None, max_n + 1, previous, None, tuple(history))


NEAR_ZERO_NOTE = (
    "one-sided finite evidence: 'exhausted' on a grid supports partition regularity near zero "
    "at that scale; 'avoiding' refutes nothing about the continuum"
)


@dataclass(frozen=True)
class NearZeroReport:
    r: int
    entries: tuple  # (epsilon, SearchResult | None)

    def to_json(self):
        out = []
        for eps, res in self.entries:
            if res is None:
                out.append({"epsilon": str(eps), "status": "empty_grid"})
            else:
                out.append({"epsilon": str(eps)} | res.to_json())
        return {"r": self.r, "note": NEAR_ZERO_NOTE, "entries": out}


def near_zero_probe(sys: PolySystem, r: int, epsilons: Sequence, denominator: int, size: int,
                    family: str = "linear", timeout: float | None = None, workers: int = 1) -> NearZeroReport:
    """Run the search on {k/D : k <= M, k/D < eps} for each eps (or on
    {base^k : k <= M, base^k < eps} with base 1/D for the geometric family)."""
    eps = [as_fraction(e) for e in epsilons]
    if any(e <= 0 for e in eps):
        raise ValueError("epsilons must be positive")
    if any(a <= b for a, b in zip(eps, eps[1:])):
        raise ValueError("epsilons must be strictly decreasing")
    entries = []
    executor = _make_executor(workers)
    try:
        for e in eps:
            if family == "linear":
                g = GroundSet.rational_grid(denominator, size, e)
            elif family == "geometric":
                g = GroundSet.geometric(Fraction(1, denominator), size, e)
            else:
                raise ValueError(f"unknown grid family {family!r}")
            if not g.elements:
                entries.append((e, None))
                continue
            h = enumerate_solutions(sys, g)
            entries.append((e, find_avoiding_coloring(h, r, timeout=timeout, executor=executor)))
    finally:
        if executor is not None:
            executor.shutdown(cancel_futures=True)
    return NearZeroReport(r, tuple(entries))


def scaling_transfer_check(sys: PolySystem, lam, g: GroundSet) -> bool:
    """True when the solution hypergraph on ``g`` maps edge-for-edge onto the one on lam*g."""
    verdict = is_homogeneous(sys)
    if not verdict:
        raise NotHomogeneousError(f"system is not homogeneous: {verdict.failure}")
    lam = as_fraction(lam)
    h1 = enumerate_solutions(sys, g)
    h2 = enumerate_solutions(sys, g.scaled(lam))
    if h1.tuples != h2.tuples or h1.edges != h2.edges:
        return False
    for t in h1.tuples:
        point = {v: lam * g.elements[i] for v, i in zip(sys.variables, t)}
        if not sys.is_solution(point):
            return False
    return True

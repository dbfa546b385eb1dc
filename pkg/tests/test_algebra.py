from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from partreg.algebra import (
    MissingBindingError,
    ParseError,
    Polynomial,
    PolySystem,
    as_fraction,
    has_constant_positive_solution,
    identify_variables,
    is_homogeneous,
    parse_polynomial,
    parse_system,
    substitute_system,
)

VARS = ("x", "y", "z")

rationals = st.fractions(min_value=-999, max_value=999, max_denominator=50)
nonzero_rationals = rationals.filter(lambda q: q != 0)


@st.composite
def polynomials(draw, max_terms=5, max_exp=3):
    terms = draw(st.lists(
        st.tuples(st.tuples(*[st.integers(0, max_exp)] * 3), nonzero_rationals),
        max_size=max_terms,
    ))
    return Polynomial.from_terms((dict(zip(VARS, exps)), c) for exps, c in terms)


assignments = st.fixed_dictionaries({v: rationals for v in VARS})


def test_as_fraction_rejects_floats_and_bools():
    assert as_fraction("3/6") == Fraction(1, 2)
    assert as_fraction(4) == 4
    with pytest.raises(TypeError):
        as_fraction(0.5)
    with pytest.raises(TypeError):
        as_fraction(True)


def test_parse_linear_system():
    s = parse_system("x + y - z")
    assert s.variables == ("x", "y", "z")
    assert len(s.polynomials) == 1
    assert s.format() == "x + y - z"


def test_parse_pythagorean():
    s = parse_system("x^2 + y^2 - z^2")
    assert s.polynomials[0] == parse_polynomial("x*x + y**2 - z^2")
    assert s.polynomials[0].total_degree() == 2


def test_parse_error_reports_token_and_position():
    with pytest.raises(ParseError) as info:
        parse_system("x + * y")
    assert info.value.token == "*"
    assert info.value.position == 4


@pytest.mark.parametrize("text", ["", "   ", ";\n;"])
def test_parse_empty_input(text):
    with pytest.raises(ParseError):
        parse_system(text)


def test_parse_identically_zero_equation():
    with pytest.raises(ParseError, match="zero"):
        parse_system("x + y - z; x - x")


def test_parse_multiple_equations_and_rationals():
    s = parse_system("a + b = x\ny - c d; 1/2 a - 3/4 y")
    assert s.variables == ("a", "b", "x", "y", "c", "d")
    assert len(s) == 3
    assert s.polynomials[2].evaluate({"a": 3, "y": 2}) == 0


def test_division_only_by_constants():
    assert parse_polynomial("x/2 + y/(1/3)") == parse_polynomial("1/2*x + 3*y")
    with pytest.raises(ParseError):
        parse_polynomial("x/y")
    with pytest.raises(ParseError):
        parse_polynomial("x/0")


def test_vars_declaration_controls_order():
    s = parse_system("vars: z, y, x\nx + y - z")
    assert s.variables == ("z", "y", "x")
    with pytest.raises(ParseError):
        parse_system("vars: x\nx + y")


@pytest.mark.parametrize("text,point", [
    ("x + y - z", {"x": 1, "y": 2, "z": 3}),
    ("x^2 + y^2 - z^2", {"x": 3, "y": 4, "z": 5}),
    ("a + b - c*d", {"a": 2, "b": 2, "c": 2, "d": 2}),
])
def test_evaluate_examples(text, point):
    s = parse_system(text)
    assert s.evaluate(point) == [0]
    assert s.is_solution(point)


def test_evaluate_missing_binding():
    with pytest.raises(MissingBindingError):
        parse_system("x + y - z").evaluate({"x": 1, "y": 2})


def test_polysystem_rejects_undeclared_and_zero():
    p = parse_polynomial("x + y")
    with pytest.raises(ValueError):
        PolySystem(("x",), (p,))
    with pytest.raises(ValueError):
        PolySystem(("x", "y"), (Polynomial(),))
    with pytest.raises(ValueError):
        PolySystem(("x", "x"), ())


def test_canonical_printing_is_graded_lex():
    p = parse_polynomial("x - x*y + y*z + x*z + 3")
    assert p.format(["x", "y", "z"]) == "-x*y + x*z + y*z + x + 3"


@settings(max_examples=200, deadline=None)
@given(polynomials(), polynomials())
def test_print_parse_round_trip(p, q):
    if p.is_zero():
        return
    s = PolySystem.from_polynomials([p] + ([q] if not q.is_zero() else []), VARS)
    again = parse_system(s.format())
    assert again == s


@settings(max_examples=100, deadline=None)
@given(rationals, rationals, rationals)
def test_rational_field_identities(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    if a != 0:
        assert a * (1 / a) == 1


def kronecker_point(bound):
    # x = B, y = B^k, z = B^(k^2): distinct monomials with exponents < k land on
    # distinct powers of B.  B exceeds any cleared coefficient, so nothing cancels.
    k = bound + 1
    base = Fraction(2 ** 128)
    return {"x": base, "y": base ** k, "z": base ** (k * k)}


@settings(max_examples=150, deadline=None)
@given(polynomials(), polynomials(), st.lists(assignments, min_size=10, max_size=10))
def test_structural_equality_matches_evaluation(p, q, points):
    diff = p - q
    evals_agree = all(p.evaluate(a) == q.evaluate(a) for a in points)
    kron = kronecker_point(3)
    if diff.is_zero():
        assert evals_agree
        assert p.evaluate(kron) == q.evaluate(kron)
    else:
        assert diff.evaluate(kron) != 0


@settings(max_examples=100, deadline=None)
@given(polynomials(), polynomials(), polynomials(), assignments)
def test_ring_operations_agree_with_evaluation(p, q, r, a):
    assert (p * (q + r)).evaluate(a) == p.evaluate(a) * (q.evaluate(a) + r.evaluate(a))
    assert (p - q).evaluate(a) == p.evaluate(a) - q.evaluate(a)
    assert (p ** 2).evaluate(a) == p.evaluate(a) ** 2


def test_homogeneity_examples():
    v = is_homogeneous(parse_system("x^2 + y^2 - z^2"))
    assert v.homogeneous and v.degrees == (2,)
    v = is_homogeneous(parse_system("x + y - z"))
    assert v and v.degrees == (1,)
    v = is_homogeneous(parse_system("a + b - c*d"))
    assert not v
    assert v.degrees == (None,)
    assert v.failure == (0, "-c*d", "a")


@settings(max_examples=60, deadline=None)
@given(st.fractions(min_value=Fraction(1, 20), max_value=20, max_denominator=20))
def test_homogeneous_solutions_scale(lam):
    s = parse_system("x^2 + y^2 - z^2")
    assert is_homogeneous(s)
    found = 0
    for x in range(1, 14):
        for y in range(1, 14):
            for z in range(1, 14):
                point = {"x": x, "y": y, "z": z}
                scaled = {k: lam * v for k, v in point.items()}
                found += s.is_solution(point)
                assert s.is_solution(point) == s.is_solution(scaled)
    assert found == 6


def test_constant_solution_examples():
    assert has_constant_positive_solution(parse_system("x + y - 2z")).kind == "all"
    rep = has_constant_positive_solution(parse_system("x + y - z"))
    assert rep.kind == "none" and rep.positive_roots == 0
    rep = has_constant_positive_solution(parse_system("x^2 - 4y^2; x - 2y"))
    assert rep.kind == "none"


def test_constant_solution_interval():
    # diagonal is t^2 + t - 2 = (t - 1)(t + 2): positive root 1
    rep = has_constant_positive_solution(parse_system("x^2 + y - 2"))
    assert rep.kind == "interval"
    lo, hi = rep.interval
    assert lo <= 1 <= hi
    # gcd of t^2 - 2 and t^3 - 2t: positive root sqrt 2
    rep = has_constant_positive_solution(parse_system("x*y - 2; x*y*z - 2z"))
    lo, hi = rep.interval
    assert lo < hi and lo * lo < 2 < hi * hi


def test_substitution_and_identification():
    s = parse_system("x1 - x2*y1 - 2*x3*y1*y2")
    t = identify_variables(s, {"x3": "x2"})
    assert t.variables == ("x1", "x2", "y1", "y2")
    assert t.polynomials[0] == parse_polynomial("x1 - x2*y1 - 2*x2*y1*y2")
    u = substitute_system(parse_system("x + y - z"), {"z": parse_polynomial("2*w")})
    assert u.variables == ("x", "y", "w")
    assert u.format() == "x + y - 2*w"


def test_substitution_drops_vanishing_equations():
    s = substitute_system(parse_system("x - y; x + y - z"), {"y": parse_polynomial("x")})
    assert len(s) == 1

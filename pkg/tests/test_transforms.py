from fractions import Fraction

import pytest

from partreg.algebra import identify_variables, parse_polynomial, parse_system
from partreg.coloring import GroundSet, enumerate_solutions
from partreg.rado import RationalMatrix
from partreg.transforms import (
    LevSpec,
    ap_system,
    fs_system,
    lev_family,
    lev_system,
    merge_systems,
    power_substitution,
    reciprocal_polynomial,
    reciprocal_transform,
)


def same_poly(p, text):
    return p == parse_polynomial(text)


@pytest.mark.parametrize("src,expected", [
    ("x + y - z", "y*z + x*z - x*y"),
    ("a + b - c*d", "b*c*d + a*c*d - a*b"),
    ("x - y", "y - x"),
    ("x^2 + y^2 - z^2", "y^2*z^2 + x^2*z^2 - x^2*y^2"),
])
def test_reciprocal_examples(src, expected):
    rep = reciprocal_transform(parse_system(src))
    assert same_poly(rep.output.polynomials[0], expected)
    assert rep.output.variables == parse_system(src).variables


def test_reciprocal_attaches_constant_solution_report():
    rep = reciprocal_transform(parse_system("x + y - z"))
    assert rep.constant_solution.kind == "none"
    assert rep.to_json()["constant_solution"]["kind"] == "none"
    rep = reciprocal_transform(parse_system("x + y - 2z"))
    assert rep.constant_solution.kind == "all"


def test_reciprocal_uses_per_variable_degree():
    p = parse_polynomial("x^2*y + y^3 - 5")
    # multiply P(1/x, 1/y) by x^2 y^3
    assert reciprocal_polynomial(p) == parse_polynomial("y^2 + x^2 - 5*x^2*y^3")


GRID = GroundSet.explicit([Fraction(k, d) for d in (1, 2, 3, 4) for k in range(1, 9)])


@pytest.mark.parametrize("src", ["x + y - z", "a + b - c*d", "x^2 + y^2 - z^2", "x + 2y - 3z; x - y + z - w"])
def test_reciprocal_round_trip_on_grid(src):
    sys_ = parse_system(src)
    out = reciprocal_transform(sys_).output
    recip = GroundSet.explicit(sorted({1 / x for x in GRID.elements}))
    h_in = enumerate_solutions(sys_, GRID)
    h_out = enumerate_solutions(out, recip)
    mapped = {tuple(1 / x for x in h_in.values(t)) for t in h_in.tuples}
    found = {h_out.values(t) for t in h_out.tuples}
    assert mapped == found


@pytest.mark.parametrize("src", ["x + y - z", "a + b - c*d", "x^3 + y - z^2"])
def test_double_reciprocal_preserves_solutions(src):
    sys_ = parse_system(src)
    twice = reciprocal_transform(reciprocal_transform(sys_).output).output
    a = enumerate_solutions(sys_, GRID)
    b = enumerate_solutions(twice, GRID)
    assert a.tuples == b.tuples


def test_power_substitution_examples():
    A = RationalMatrix(((1, 1, -1),))
    assert same_poly(power_substitution(A, 2).polynomials[0], "x1^2 + x2^2 - x3^2")
    assert same_poly(power_substitution(A, 1).polynomials[0], "x1 + x2 - x3")
    B = RationalMatrix(((2, -1, -1),))
    assert same_poly(power_substitution(B, 3).polynomials[0], "2*x1^3 - x2^3 - x3^3")
    assert power_substitution(RationalMatrix(((1, -1), (0, 0))), 1).polynomials == (parse_polynomial("x1 - x2"),)
    with pytest.raises(ValueError):
        power_substitution(A, 0)


def test_lev_family_examples():
    spec = LevSpec((1, 1, -1), (frozenset(), frozenset(), frozenset({1})), 1)
    assert same_poly(lev_family(spec), "x1 + x2 - x3*y1")
    spec = LevSpec((1, -1, -2), ((), (1,), (1, 2)), 2)
    assert same_poly(lev_family(spec), "x1 - x2*y1 - 2*x3*y1*y2")
    ident = identify_variables(lev_system(spec), {"x3": "x2"})
    assert same_poly(ident.polynomials[0], "x1 - x2*y1 - 2*x2*y1*y2")


def test_lev_family_with_empty_subsets_is_linear_form():
    spec = LevSpec((3, -1, Fraction(1, 2)), ((), (), ()), 2)
    assert lev_family(spec) == parse_polynomial("3x1 - x2 + 1/2 x3")
    assert lev_system(spec).variables == ("x1", "x2", "x3", "y1", "y2")


@pytest.mark.parametrize("coeffs,subsets,m", [
    ((1,), ((),), 0),
    ((1, 0), ((), ()), 0),
    ((1, 1), ((), (2,)), 1),
    ((1, 1), ((),), 1),
])
def test_lev_spec_validation(coeffs, subsets, m):
    with pytest.raises(ValueError):
        LevSpec(coeffs, subsets, m)


def test_lev_spec_json_round_trip():
    spec = LevSpec((1, -1, "-2/3"), ((), (1,), (1, 2)), 2)
    assert LevSpec.from_json(spec.to_json()) == spec
    with pytest.raises(ValueError):
        LevSpec.from_json(dict(spec.to_json(), extra=1))


def test_merge_links_first_variables():
    rep = merge_systems(parse_system("a + b - x"), parse_system("y - c*d"))
    out = rep.output
    assert out.variables == ("a", "b", "x", "y", "c", "d")
    assert len(out) == 3
    assert out.polynomials[2] == parse_polynomial("a - y")
    rep = merge_systems(parse_system("a + b - x"), parse_system("y - c*d"), link=("x", "y"))
    assert rep.output.polynomials[2] == parse_polynomial("x - y")


def test_merge_renames_clashes():
    rep = merge_systems(parse_system("x + y - z"), parse_system("x + y - z"))
    assert rep.renamed == {"x": "x_2", "y": "y_2", "z": "z_2"}
    assert rep.output.polynomials[2] == parse_polynomial("x - x_2")
    assert rep.to_json()["renamed"] == {"x": "x_2", "y": "y_2", "z": "z_2"}


def test_merge_structure_with_disjoint_names():
    rep = merge_systems(parse_system("x + y - z"), parse_system("u + v - w"))
    assert len(rep.output) == 3
    assert rep.output.polynomials[2] == parse_polynomial("x - u")


def test_merge_solutions_restrict_to_inputs():
    s1, s2 = parse_system("a + b - x"), parse_system("y - c*d")
    out = merge_systems(s1, s2, link=("x", "y")).output
    h = enumerate_solutions(out, GroundSet.integer_range(6))
    assert h.tuples
    for t in h.tuples:
        point = dict(zip(out.variables, h.values(t)))
        assert s1.is_solution(point) and s2.is_solution(point)
        assert point["x"] == point["y"]


def test_merge_rejects_unknown_link():
    with pytest.raises(ValueError):
        merge_systems(parse_system("x - y"), parse_system("u - v"), link=("q", "u"))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_ap_system(k):
    s = ap_system(k)
    assert s.variables == ("a", "d") + tuple(f"t{i}" for i in range(1, k + 1))
    assert len(s) == k
    point = {"a": 3, "d": 2} | {f"t{i}": 3 + 2 * i for i in range(1, k + 1)}
    assert s.is_solution(point)


def test_fs_system():
    s = fs_system(2)
    assert s.variables == ("y1", "y2", "s12")
    assert s.polynomials == (parse_polynomial("s12 - y1 - y2"),)
    assert len(fs_system(1)) == 0 and fs_system(1).variables == ("y1",)
    s3 = fs_system(3)
    assert s3.variables[3:] == ("s12", "s13", "s23", "s123")
    assert len(s3) == 4
    assert "s_1_10" in fs_system(10).variables

"""Acceptance suite: one test per criterion, each timed against its budget.

A PASS/FAIL line per criterion is printed in the pytest terminal summary (see
conftest.py), or directly when this file is run as a script.
"""

import functools
import io
import itertools
import json
import random
import time
from fractions import Fraction

from oracles import all_colorings_avoid, brute_columns_condition, brute_subset_sum
from partreg.algebra import parse_system
from partreg.cli import EXIT_OK, run
from partreg.coloring import (
    AVOIDING,
    EXHAUSTED,
    GroundSet,
    enumerate_solutions,
    find_avoiding_coloring,
    near_zero_probe,
    rado_number,
    scaling_transfer_check,
)
from partreg.lifter import lift, random_lift_instance
from partreg.rado import PR, RationalMatrix, columns_condition, linear_pr_verdict, subset_sum_zero, verify_certificate
from partreg.semigroup import ExtendedElement, check_hl_axioms, membership
from partreg.transforms import lev_family, reciprocal_transform

F = Fraction
RESULTS = {}


def criterion(number, title, budget=None):
    """Record PASS/FAIL for a criterion and fail it when it overruns ``budget`` seconds.

    A string returned by the test is shown after the line.
    """

    def wrap(fn):
        @functools.wraps(fn)
        def inner(*args, **kwargs):
            start = time.perf_counter()
            try:
                note = fn(*args, **kwargs)
                elapsed = time.perf_counter() - start
                if budget is not None:
                    assert elapsed < budget, f"took {elapsed:.2f}s, budget {budget}s"
            except BaseException as exc:
                elapsed = time.perf_counter() - start
                RESULTS[number] = ("FAIL", title, elapsed, budget, f"{type(exc).__name__}: {exc}")
                raise
            RESULTS[number] = ("PASS", title, elapsed, budget, note or "")

        return inner

    return wrap


def format_result(number):
    status, title, elapsed, budget, detail = RESULTS[number]
    limit = f" (budget {budget}s)" if budget is not None else ""
    line = f"{status} criterion {number:>2}: {title} [{elapsed:.2f}s{limit}]"
    return line + (f" ({detail.splitlines()[0]})" if detail else "")


def naive_solutions(sys_, g):
    """Value tuples of every point of g^n solving the system."""
    return {vals for vals in itertools.product(g.elements, repeat=len(sys_.variables))
            if sys_.is_solution(dict(zip(sys_.variables, vals)))}


def naive_edges(sys_, g):
    return {frozenset(g.index[x] for x in vals) for vals in naive_solutions(sys_, g)}


def check_avoiding_certificate(sys_, res):
    """Recheck an avoiding certificate against an independent enumeration."""
    assert res.status == AVOIDING
    colors = res.certificate.colors
    assert len(colors) == len(res.ground.elements)
    assert all(1 <= c <= res.r for c in colors)
    for e in naive_edges(sys_, res.ground):
        assert len({colors[i] for i in e}) > 1, f"monochromatic edge {sorted(e)}"


def check_exhausted(sys_, res):
    """No r-coloring of the ground avoids every solution (exhaustive oracle)."""
    assert res.status == EXHAUSTED
    edges = [tuple(sorted(e)) for e in naive_edges(sys_, res.ground)]
    assert all_colorings_avoid(len(res.ground.elements), edges, res.r) == []


@criterion(1, "columns condition equals zero-sum subset on 1xn, entries in +-{1,2,3}, n <= 5", budget=10)
def test_criterion_1_single_row_equivalence():
    values = [-3, -2, -1, 1, 2, 3]
    cases = 0
    for n in range(1, 6):
        for row in itertools.product(values, repeat=n):
            A = RationalMatrix((row,))
            cert = columns_condition(A)
            J = subset_sum_zero(row)
            assert (cert is not None) == (J is not None), row
            assert (J is not None) == brute_subset_sum(row), row
            if cert is not None:
                assert verify_certificate(A, cert)
            cases += 1
    assert cases == 6 + 6 ** 2 + 6 ** 3 + 6 ** 4 + 6 ** 5


@criterion(2, "decider equals brute-force ordered partitions, entries in -2..2, u <= 2, v <= 4")
def test_criterion_2_decider_completeness():
    # the 60 s budget covers the decider pass; the slow oracle runs afterwards
    matrices = []
    for u in (1, 2):
        for v in range(1, 5):
            for flat in itertools.product(range(-2, 3), repeat=u * v):
                matrices.append(tuple(tuple(flat[i * v:(i + 1) * v]) for i in range(u)))
    start = time.perf_counter()
    certs = [columns_condition(RationalMatrix(rows)) for rows in matrices]
    decider_time = time.perf_counter() - start
    assert decider_time < 60, f"decider took {decider_time:.2f}s"
    for rows, cert in zip(matrices, certs):
        assert (cert is not None) == brute_columns_condition(rows), rows
        if cert is not None:
            assert verify_certificate(RationalMatrix(rows), cert), rows
    return f"decider {decider_time:.2f}s, budget 60s"


SCHUR = parse_system("x + y - z")


@criterion(3, "Schur threshold 5 with {1,4}/{2,3} at N=4 and all 2^5 colorings failing at N=5", budget=1)
def test_criterion_3_schur_threshold():
    rep = rado_number(SCHUR, 2, 10)
    assert rep.status == "threshold" and rep.threshold == 5
    av = rep.avoiding
    assert av.ground.elements == (1, 2, 3, 4)
    classes = sorted(sorted(int(av.ground.elements[i]) for i in c) for c in av.certificate.classes())
    assert classes == [[1, 4], [2, 3]]
    check_avoiding_certificate(SCHUR, av)
    assert rep.exhausted.ground.elements == (1, 2, 3, 4, 5)
    check_exhausted(SCHUR, rep.exhausted)


@criterion(4, "x+y=z under r=2,3 share one certificate; x^3+y^3=z^3 has no grid solution", budget=30)
def test_criterion_4_pythagorean_fermat():
    A = RationalMatrix(((1, 1, -1),))
    v2, v3 = linear_pr_verdict(A, 2), linear_pr_verdict(A, 3)
    assert v2.verdict == PR and v3.verdict == PR
    assert v2.certificate == v3.certificate
    assert v2.certificate.to_json() == v3.certificate.to_json()
    assert verify_certificate(A, v2.certificate)
    fermat = parse_system("x^3 + y^3 - z^3")
    for D in range(2, 51):
        g = GroundSet.rational_grid(D, min(49, D - 1), 1)
        assert enumerate_solutions(fermat, g).tuples == (), D


@criterion(5, "1000 random lift instances give exactly zero", budget=5)
def test_criterion_5_lifting_identity():
    rng = random.Random(20240501)
    for _ in range(1000):
        inst = random_lift_instance(rng)
        res = lift(inst)
        assert res.value == 0
        point = dict(zip(inst.spec.x_names(), res.d)) | dict(zip(inst.spec.y_names(), inst.b))
        assert lev_family(inst.spec).evaluate(point) == 0


@criterion(6, "reciprocal transform is a solution bijection {1..8} <-> {1/k}", budget=5)
def test_criterion_6_reciprocal_bijection():
    ground = GroundSet.integer_range(8)
    recip = GroundSet.explicit([F(1, k) for k in range(1, 9)])
    for text in ("x + y - z", "a + b - c*d"):
        sys_ = parse_system(text)
        out = reciprocal_transform(sys_).output
        h_in = enumerate_solutions(sys_, ground)
        h_out = enumerate_solutions(out, recip)
        assert h_in.tuples
        mapped = {tuple(1 / x for x in h_in.values(t)) for t in h_in.tuples}
        found = {h_out.values(t) for t in h_out.tuples}
        assert mapped == found
        for vals in mapped:
            assert out.is_solution(dict(zip(out.variables, vals)))
        # independent check of the converse direction by brute force
        assert naive_solutions(out, recip) == mapped


@criterion(7, "grid {k/100 : k <= N} verdicts equal {1..N} verdicts for N <= 12")
def test_criterion_7_scaling_transfer():
    for text in ("x + y - z", "x^2 + y^2 - z^2"):
        sys_ = parse_system(text)
        for N in range(1, 13):
            g = GroundSet.integer_range(N)
            assert scaling_transfer_check(sys_, F(1, 100), g)
            for r in (1, 2, 3):
                base = find_avoiding_coloring(enumerate_solutions(sys_, g), r)
                (eps, probe), = near_zero_probe(sys_, r, [1], 100, N).entries
                assert probe.ground.elements == tuple(F(k, 100) for k in range(1, N + 1))
                assert probe.status == base.status, (text, N, r)
                if base.status == AVOIDING:
                    assert probe.certificate.colors == base.certificate.colors


@criterion(8, "1/2 + g/8 is the additive-closure witness, reason 'two terms'")
def test_criterion_8_pi_counterexample():
    half, eighth_g = ExtendedElement.parse("1/2"), ExtendedElement.parse("1/8*g")
    assert membership(half) and membership(eighth_g)
    m = membership(half + eighth_g)
    assert not m.member and m.reason == "two terms"
    rep = check_hl_axioms([half, eighth_g])
    assert not rep.ok
    v = rep.violation
    assert v["axiom"] == "additive closure"
    assert v["value"] == "1/2 + 1/8*g" and v["reason"] == "two terms"
    assert {v["x"], v["y"]} == {"1/2", "1/8*g"}


ABCD = parse_system("a + b - c*d")


@criterion(9, "a+b=cd solvable for N >= 2 and its 2-color threshold certified", budget=600)
def test_criterion_9_abcd_probe():
    for N in range(2, 41):
        h = enumerate_solutions(ABCD, GroundSet.integer_range(N))
        assert h.tuples
        assert (1, 1, 1, 2) in {h.values(t) for t in h.tuples}
    assert enumerate_solutions(ABCD, GroundSet.integer_range(1)).tuples == ()
    rep = rado_number(ABCD, 2, 40)
    assert rep.status == "threshold"
    assert rep.threshold is not None and rep.threshold <= 40
    assert rep.exhausted.ground.elements == tuple(range(1, rep.threshold + 1))
    check_exhausted(ABCD, rep.exhausted)
    if rep.threshold > 1:
        assert rep.avoiding.ground.elements == tuple(range(1, rep.threshold))
        check_avoiding_certificate(ABCD, rep.avoiding)


def cli_json(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, stdout=out, stderr=err)
    assert code == EXIT_OK, err.getvalue()
    return out.getvalue()


DETERMINISM_RUNS = [
    ["search", "rado-number", "--system", "x+y-z", "--colors", "2", "--max-n", "10"],
    ["search", "rado-number", "--system", "a+b-c*d", "--colors", "2", "--max-n", "40"],
    # a case large enough for the parallel frontier to matter
    ["search", "rado-number", "--system", "x+y-z", "--colors", "3", "--max-n", "15"],
]


@criterion(10, "byte-identical JSON for criteria 3 and 9 with 1, 4 and 8 threads")
def test_criterion_10_determinism():
    for argv in DETERMINISM_RUNS:
        outputs = {threads: cli_json(argv + ["--threads", str(threads)]) for threads in (1, 4, 8)}
        assert outputs[1] == outputs[4] == outputs[8], argv
        json.loads(outputs[1])


ALL = [test_criterion_1_single_row_equivalence, test_criterion_2_decider_completeness,
       test_criterion_3_schur_threshold, test_criterion_4_pythagorean_fermat,
       test_criterion_5_lifting_identity, test_criterion_6_reciprocal_bijection,
       test_criterion_7_scaling_transfer, test_criterion_8_pi_counterexample,
       test_criterion_9_abcd_probe, test_criterion_10_determinism]


if __name__ == "__main__":
    for test in ALL:
        try:
            test()
        except BaseException:
            pass
    for number in sorted(RESULTS):
        print(format_result(number))

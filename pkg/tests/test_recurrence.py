"""Recurrence/density tests: exact cyclic oracles, metric surrogates, cross-checks."""
from __future__ import annotations

import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import evens, interval, multiples, odds, squares
from dynwindow import (
    GOLDEN,
    CoverageError,
    CyclicSystem,
    RotationSystem,
    SkewProductSystem,
    Window,
    birkhoff_window_test,
    cesaro_average_along,
    cesaro_interval_closed_form,
    cover_for,
    crosscheck_cyclic_equivalence,
    eps_dense,
    finite_ip,
    finite_subcover,
    orbit_along,
    product_transitive_finite,
    r_sequence_cyclic,
    r_sequence_metric,
    random_windows,
    return_times,
    shift_family_test,
)
from dynwindow.recurrence import (
    _cyclic_return_window,
    _progression_difference_window,
)


# -- return_times ----------------------------------------------------------------


def test_return_times_cyclic():
    rt = return_times(CyclicSystem(4), 0, 2, 20)
    assert rt.times.elements == (2, 6, 10, 14, 18)
    assert rt.cell == 2 and rt.start == 0


def test_return_times_replayable_and_excludes_zero():
    sys = CyclicSystem(4)
    rt = return_times(sys, 0, 0, 20)
    assert rt.times.elements == (4, 8, 12, 16, 20)  # n = 0 not included
    cover = cover_for(sys)
    for n in range(1, 21):
        assert (n in rt.times.as_set) == (cover.cell_of((0 + n) % 4) == 0)


def test_return_times_rational_rotation_exact():
    rot = RotationSystem.from_rationals(Fraction(1, 3))
    rt = return_times(rot, Fraction(0), 0, 9, cover=cover_for(rot, Fraction(1, 3)))
    assert rt.times.elements == (3, 6, 9)


def test_return_times_skew_golden_nonempty():
    skew = SkewProductSystem(GOLDEN)
    rt = return_times(skew, (0.0, 0.0), (0, 0), 10_000, cover=cover_for(skew, 0.1))
    assert len(rt.times) > 0
    # replay the first hit
    n = rt.times.elements[0]
    from dynwindow import orbit_at

    x, y = orbit_at(skew, (0.0, 0.0), n)
    assert x < 0.1 and y < 0.1


# -- r_sequence_cyclic --------------------------------------------------------------


def test_squares_fail_mod_3():
    # n^2 for n <= 10^4 hits only residues {0, 1} mod 3
    report = r_sequence_cyclic(Window(tuple(n * n for n in range(10_001)), 10 ** 8), 3)
    assert report.verdict.fails
    assert report.verdict.witness == (3, 2)
    assert report.per_system["cyclic:3"] == {"covered": False, "missing": 2}


def test_interval_covers_everything():
    report = r_sequence_cyclic(interval(0, 100), 50)
    assert report.verdict.holds
    assert all(d["covered"] for d in report.per_system.values())


def test_evens_fail_mod_2():
    report = r_sequence_cyclic(evens(1000), 2)
    assert report.verdict.fails and report.verdict.witness == (2, 1)


def test_empty_window_fails_mod_1():
    report = r_sequence_cyclic(Window((), 10), 1)
    assert report.verdict.fails and report.verdict.witness == (1, 0)


@given(st.lists(st.integers(0, 2000), min_size=0, max_size=150, unique=True), st.integers(1, 20))
@settings(max_examples=60, deadline=None)
def test_exactness_bridge_cyclic_vs_eps_dense(elems, m):
    # Two independent code paths, one truth: residue coverage equals
    # eps-density of the orbit along the window in Z/m with singleton cells.
    w = Window(tuple(sorted(elems)), 2000)
    report = r_sequence_cyclic(w, m)
    covered = report.per_system[f"cyclic:{m}"]["covered"]
    sys = CyclicSystem(m)
    dense = eps_dense(sys, orbit_along(sys, 0, w), cover_for(sys))
    assert covered == dense.holds


@given(
    st.lists(st.integers(0, 500), min_size=1, max_size=60, unique=True),
    st.lists(st.integers(0, 500), min_size=0, max_size=30, unique=True),
    st.integers(1, 12),
)
@settings(max_examples=50, deadline=None)
def test_monotone_in_window(base, extra, max_period):
    a = Window(tuple(sorted(base)), 1000)
    a_big = Window(tuple(sorted(set(base) | set(extra))), 1000)
    if r_sequence_cyclic(a, max_period).verdict.holds:
        assert r_sequence_cyclic(a_big, max_period).verdict.holds


@given(
    st.lists(st.integers(0, 300), min_size=1, max_size=50, unique=True),
    st.integers(1, 10),
    st.integers(0, 5),
)
@settings(max_examples=50, deadline=None)
def test_shift_soundness_mod_m(elems, m, t):
    # shifting every element by a multiple of m preserves the mod-m verdict
    a = Window(tuple(sorted(elems)), 1000)
    shifted = Window(tuple(e + m * t for e in a.elements), 1000 + m * t)
    before = r_sequence_cyclic(a, m).per_system[f"cyclic:{m}"]
    after = r_sequence_cyclic(shifted, m).per_system[f"cyclic:{m}"]
    assert before["covered"] == after["covered"]


# -- r_sequence_metric ---------------------------------------------------------------


def test_metric_interval_golden_dense():
    report = r_sequence_metric(interval(0, 1000), RotationSystem.from_angle(GOLDEN), 0.02, 1.0)
    assert report.verdict.holds and report.verdict.witness == 0.0


def test_metric_evens_under_half_rotation_fail():
    # orbit along evens under rotation by 1/2 is a single point from any start
    report = r_sequence_metric(evens(1000), RotationSystem.from_angle(0.5), 0.4, 0.5)
    assert report.verdict.fails
    detail = next(iter(report.per_system.values()))
    assert detail["cells_hit"] == 1


def test_metric_squares_golden_dense():
    w = Window(tuple(n * n for n in range(1, 10_001)), 10 ** 8)
    report = r_sequence_metric(w, RotationSystem.from_angle(GOLDEN), 0.05, 1.0)
    assert report.verdict.holds


def test_metric_budget_inconclusive():
    w = Window((10 ** 16,), 10 ** 16)
    report = r_sequence_metric(w, RotationSystem.from_angle(GOLDEN), 0.05, 1.0)
    assert report.verdict.inconclusive and "budget" in report.verdict.note


def test_metric_rejects_finite_systems():
    with pytest.raises(TypeError):
        r_sequence_metric(interval(0, 10), CyclicSystem(3), 0.5, 1.0)


# -- birkhoff_window_test ---------------------------------------------------------------


def test_birkhoff_odds_fail_on_two_cycle():
    v = birkhoff_window_test(odds(1001), CyclicSystem(2), 0.5)
    assert v.fails


def test_birkhoff_multiples_hold_with_minimal_witness():
    m = 7
    v = birkhoff_window_test(multiples(m, 100), CyclicSystem(m), 0.5)
    assert v.holds and v.witness == (0, m)  # n = 0 skipped, first start wins


def test_birkhoff_ip_window_on_rotation():
    w = finite_ip([2 ** k for k in range(9)])  # IP window = [1, 511]
    v = birkhoff_window_test(w, RotationSystem.from_angle(GOLDEN), 0.1, 1.0)
    assert v.holds
    start, n = v.witness
    assert n in w.as_set


# -- shift_family_test ---------------------------------------------------------------


def test_shift_family_squares_fail():
    sq = squares(100, horizon=10_000)
    v = shift_family_test(sq, range(-2, 3), lambda w: r_sequence_cyclic(w, 3))
    assert v.fails and v.witness == -2  # ascending order; every shift fails at m=3
    # the classical content: the unshifted window itself fails at (3, 2)
    assert r_sequence_cyclic(sq, 3).verdict.witness == (3, 2)


def test_shift_family_interval_holds():
    v = shift_family_test(interval(0, 100), range(-5, 6), lambda w: r_sequence_cyclic(w, 20))
    assert v.holds


def test_shift_family_propagates_inconclusive():
    def tester(w):
        return r_sequence_metric(w, RotationSystem.from_angle(GOLDEN), 0.05, 1.0)

    v = shift_family_test(Window((10 ** 16,), 10 ** 16), range(0, 1), tester)
    assert v.inconclusive


# -- crosscheck ------------------------------------------------------------------------


def test_crosscheck_internal_windows_coincide():
    # the return-time path and the difference-set path must build the same set
    for m in (1, 2, 5, 12):
        nuu = _cyclic_return_window(m, 500)
        assert nuu.elements == tuple(range(m, 501, m))
        for r in range(m):
            d = _progression_difference_window(m, r, 500)
            assert d.elements == tuple(range(m, 501 - r, m))


def test_crosscheck_odds_agree_on_failure():
    v = crosscheck_cyclic_equivalence(odds(1001), 2, range(-2, 3))
    assert v.holds  # all three predicates fail together at m = 2


def test_crosscheck_interval_agrees_on_success():
    v = crosscheck_cyclic_equivalence(interval(0, 100), 12, range(-6, 7))
    assert v.holds


def test_crosscheck_rejects_huge_elements():
    with pytest.raises(ValueError):
        crosscheck_cyclic_equivalence(Window((10 ** 9,), 10 ** 9), 3, range(-1, 2))


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_crosscheck_agreement_property(data):
    max_period = data.draw(st.integers(1, 6))
    span = data.draw(st.integers(max_period, 8))
    elems = data.draw(st.lists(st.integers(20, 400), min_size=0, max_size=60, unique=True))
    # support floor 20 >= max_period + |min shift| keeps the equivalence exact
    w = Window(tuple(sorted(elems)), 400)
    v = crosscheck_cyclic_equivalence(w, max_period, range(-span, span + 1))
    assert v.holds, v.note


# -- finite_subcover ----------------------------------------------------------------


def test_subcover_of_interval():
    b = finite_subcover(interval(0, 100), 7)
    assert b.elements == tuple(range(7))
    assert len(b) == 7


def test_subcover_squares_mod_5_fails():
    sq = squares(100, horizon=10_000)
    with pytest.raises(CoverageError) as info:
        finite_subcover(sq, 5)
    assert info.value.missing == 2  # squares mod 5 = {0, 1, 4}


@given(st.lists(st.integers(0, 400), min_size=1, max_size=80, unique=True), st.integers(1, 15))
@settings(max_examples=60, deadline=None)
def test_subcover_minimal_and_replayable(elems, m):
    a = Window(tuple(sorted(elems)), 400)
    if r_sequence_cyclic(a, m).per_system[f"cyclic:{m}"]["covered"]:
        b = finite_subcover(a, m)
        assert len(b) == m  # one element per class is forced and minimal
        assert {e % m for e in b.elements} == set(range(m))
        assert set(b.elements) <= a.as_set


# -- product transitivity --------------------------------------------------------------


def test_product_transitive_examples():
    r = product_transitive_finite(2, 3)
    assert r.coprime and r.orbit_size == 6 and r.agrees
    r = product_transitive_finite(2, 2)
    assert not r.coprime and r.orbit_size == 2 and r.agrees


# -- cesaro averages ---------------------------------------------------------------------


def test_cesaro_closed_form_cross_check():
    rot = RotationSystem.from_angle(GOLDEN)
    w = interval(1, 2000, horizon=2000)
    trace = cesaro_average_along(w, rot, 1)
    for n in (1, 2, 10, 55, 610, 987, 1597, 2000):
        cf = cesaro_interval_closed_form(n, GOLDEN, 1)
        assert abs(trace[n - 1] - cf) <= 1e-9 * cf


def test_cesaro_geometric_bound_decreasing():
    rot = RotationSystem.from_angle(GOLDEN)
    n_max = 2000
    trace = cesaro_average_along(interval(1, n_max, horizon=n_max), rot, 1)
    z = cmath.exp(2j * math.pi * GOLDEN)
    bounds = [2.0 / (n * abs(1 - z)) for n in range(1, n_max + 1)]
    assert all(t <= b + 1e-12 for t, b in zip(trace, bounds))
    assert all(b2 < b1 for b1, b2 in zip(bounds, bounds[1:]))


def test_cesaro_zero_rotation_stays_at_one():
    rot = RotationSystem.from_angle(0.0)
    trace = cesaro_average_along(interval(1, 50, horizon=50), rot, 1)
    assert all(abs(t - 1.0) < 1e-12 for t in trace)


def test_cesaro_evens_under_half_rotation_stay_at_one():
    rot = RotationSystem.from_angle(0.5)
    trace = cesaro_average_along(evens(200), rot, 1)
    assert all(abs(t - 1.0) < 1e-12 for t in trace)


def test_cesaro_k_zero_rejected():
    with pytest.raises(ValueError):
        cesaro_average_along(interval(1, 10), RotationSystem.from_angle(GOLDEN), 0)
    with pytest.raises(TypeError):
        cesaro_average_along(interval(1, 10), CyclicSystem(3), 1)


# -- seeded window sweep --------------------------------------------------------------------


def test_random_windows_deterministic():
    a = random_windows(5, 1000, seed=42)
    b = random_windows(5, 1000, seed=42)
    c = random_windows(5, 1000, seed=43)
    assert a == b
    assert a != c
    assert all(w.elements[0] >= 50 for w in a if w.elements)
    assert all(w.horizon == 1000 for w in a)

"""System catalog: exact dynamics, closed forms vs stepping, covers, minimality."""
from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import squares
from dynwindow import (
    GOLDEN,
    CoverMismatchError,
    CyclicSystem,
    OdometerSystem,
    ProductSystem,
    RotationSystem,
    SkewProductSystem,
    Window,
    cover_for,
    eps_dense,
    is_totally_minimal,
    orbit_along,
    orbit_at,
    product,
    step,
    system_distance,
)


def test_step_examples():
    assert step(CyclicSystem(3), 2) == 0
    assert step(RotationSystem.from_angle(0.25), 0.9) == pytest.approx(0.15)
    skew = SkewProductSystem(GOLDEN)
    x, y = step(skew, (0.0, 0.0))
    assert x == pytest.approx(GOLDEN) and y == 0.0


def test_orbit_along_squares_mod_5():
    w = squares(10, horizon=100)
    states = orbit_along(CyclicSystem(5), 0, w)
    assert states == [n * n % 5 for n in range(11)]
    assert set(states) == {0, 1, 4}


def test_orbit_along_zero_rotation_is_constant():
    rot = RotationSystem.from_angle(0.0)
    states = orbit_along(rot, 0.3, Window((1, 5, 9), 10))
    assert states == [0.3, 0.3, 0.3]


def test_orbit_along_odometer_positional():
    odo = OdometerSystem(2, 3)
    assert orbit_along(odo, 0, Window((1, 2, 4), 8)) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert orbit_at(odo, (1, 1, 1), 1) == (0, 0, 0)  # wraps at p^d


@pytest.mark.parametrize(
    "sys,start",
    [
        (CyclicSystem(7), 3),
        (OdometerSystem(3, 2), 0),
        (RotationSystem.from_angle(GOLDEN), 0.0),
        (RotationSystem.from_rationals(Fraction(2, 7)), Fraction(0)),
        (RotationSystem((0.3, 0.71)), (0.1, 0.9)),
        (SkewProductSystem(GOLDEN), (0.0, 0.0)),
        (ProductSystem(CyclicSystem(4), RotationSystem.from_angle(GOLDEN)), (1, 0.25)),
    ],
)
def test_closed_form_agrees_with_stepping(sys, start):
    # absolute tolerance 1e-9 for metric coordinates, exact for finite ones
    def flat(state):
        if isinstance(state, tuple):
            out = []
            for c in state:
                out.extend(flat(c))
            return out
        return [state]

    state = start
    checkpoints = set(list(range(1, 101)) + [500, 1000, 5000, 10_000])
    for n in range(1, 10_001):
        state = step(sys, state)
        if n in checkpoints:
            closed = orbit_at(sys, start, n)
            for a, b in zip(flat(state), flat(closed)):
                if isinstance(a, (int,)) and isinstance(b, (int,)):
                    assert a == b
                else:
                    diff = abs(float(a) - float(b)) % 1.0
                    assert min(diff, 1.0 - diff) <= 1e-9


def test_rational_rotation_matches_cycle():
    q = 12
    rot = RotationSystem.from_rationals(Fraction(5, q))
    cyc = CyclicSystem(q)
    w = Window(tuple(range(0, 3 * q)), 3 * q)
    rot_orbit = orbit_along(rot, Fraction(0), w)
    cyc_orbit = orbit_along(cyc, 0, w)
    assert set(rot_orbit) == {Fraction(k, q) for k in range(q)}
    # bijection k/q <-> k intertwines the two orbits exactly
    assert [Fraction(5 * k % q, q) for k in cyc_orbit] == rot_orbit


def test_product_orbit_projects_to_components():
    sysp = product(CyclicSystem(4), OdometerSystem(2, 2))
    w = Window(tuple(range(10)), 10)
    states = orbit_along(sysp, (1, 0), w)
    assert [s[0] for s in states] == orbit_along(CyclicSystem(4), 1, w)
    assert [s[1] for s in states] == orbit_along(OdometerSystem(2, 2), 0, w)


@pytest.mark.parametrize("m,n", [(2, 3), (2, 2), (4, 6), (5, 7), (1, 9)])
def test_product_cycle_orbit_size_is_lcm(m, n):
    sysp = product(CyclicSystem(m), CyclicSystem(n))
    seen = set()
    state = (0, 0)
    while state not in seen:
        seen.add(state)
        state = step(sysp, state)
    assert len(seen) == math.lcm(m, n)
    assert (len(seen) == m * n) == (math.gcd(m, n) == 1)


# -- covers and eps_dense ---------------------------------------------------------


def test_eps_dense_squares_mod_3_misses_cell_2():
    cyc = CyclicSystem(3)
    states = orbit_along(cyc, 0, squares(100, horizon=10_000))
    v = eps_dense(cyc, states, cover_for(cyc))
    assert v.fails and v.witness == 2


def test_eps_dense_full_residues_holds():
    cyc = CyclicSystem(6)
    v = eps_dense(cyc, list(range(6)), cover_for(cyc))
    assert v.holds


def test_eps_dense_golden_orbit_by_three_distance_oracle():
    rot = RotationSystem.from_angle(GOLDEN)
    w = Window(tuple(range(0, 201)), 200)
    states = orbit_along(rot, 0.0, w)
    # oracle: sorted points, max circular gap below the cell size
    pts = sorted(states)
    gaps = [b - a for a, b in zip(pts, pts[1:])] + [1.0 - pts[-1] + pts[0]]
    assert max(gaps) < 0.02
    v = eps_dense(rot, states, cover_for(rot, 0.02))
    assert v.holds


def test_eps_dense_cover_mismatch_raises():
    with pytest.raises(CoverMismatchError):
        eps_dense(CyclicSystem(3), [0], cover_for(CyclicSystem(4)))


def test_torus_cover_tiles_half_open():
    cover = cover_for(RotationSystem.from_angle(GOLDEN), 0.02)
    assert cover.k == 50
    assert cover.cell_of(0.0) == 0
    assert cover.cell_of(0.02) == 1  # left-closed boundary
    assert cover.cell_of(0.9999999999999999) == 49
    assert cover.cell_count() == 50


@given(st.floats(min_value=0.0, max_value=1.0, exclude_max=True), st.integers(1, 40))
@settings(max_examples=80, deadline=None)
def test_torus_cover_every_point_in_exactly_one_cell(x, k):
    rot = RotationSystem.from_angle(GOLDEN)
    cover = cover_for(rot, 1.0 / k)
    cell = cover.cell_of(x)
    assert 0 <= cell < cover.cell_count()
    # cell boundaries replay: x lies in [cell/k', (cell+1)/k')
    width = 1.0 / cover.k
    assert cell * width <= x < (cell + 1) * width or math.isclose(x, (cell + 1) * width)


def test_product_cover_cells_are_pairs():
    sysp = product(CyclicSystem(2), CyclicSystem(3))
    cover = cover_for(sysp)
    assert list(cover.cell_ids()) == [(a, b) for a in range(2) for b in range(3)]
    assert cover.cell_of((1, 2)) == (1, 2)


def test_skew_cover_is_2d():
    cover = cover_for(SkewProductSystem(GOLDEN), 0.25)
    assert cover.cell_count() == 16
    assert cover.cell_of((0.3, 0.8)) == (1, 3)


# -- total minimality --------------------------------------------------------------


def test_totally_minimal_examples():
    v = is_totally_minimal(CyclicSystem(3))
    assert v.fails and v.witness == 3
    assert is_totally_minimal(CyclicSystem(1)).holds
    v = is_totally_minimal(RotationSystem.from_rationals(Fraction(1, 2)))
    assert v.fails and v.witness == 2
    v = is_totally_minimal(CyclicSystem(6))
    assert v.fails and v.witness == 2  # smallest prime factor


def test_totally_minimal_irrational_holds_with_caveat():
    v = is_totally_minimal(RotationSystem.from_angle(GOLDEN))
    assert v.holds and "irrational" in v.note
    v = is_totally_minimal(SkewProductSystem(GOLDEN))
    assert v.holds and v.note


def test_totally_minimal_odometer_fails():
    v = is_totally_minimal(OdometerSystem(2, 3))
    assert v.fails and v.witness == 2


def test_totally_minimal_products():
    v = is_totally_minimal(product(CyclicSystem(2), CyclicSystem(2)))
    assert v.fails and v.witness == 1  # not even minimal
    v = is_totally_minimal(product(CyclicSystem(2), CyclicSystem(3)))
    assert v.fails and v.witness == 2
    v = is_totally_minimal(product(RotationSystem.from_angle(GOLDEN), CyclicSystem(1)))
    assert v.holds


def test_rational_skew_not_minimal():
    v = is_totally_minimal(SkewProductSystem(0.5, Fraction(1, 2)))
    assert v.fails and v.witness == 1


# -- metric helpers ------------------------------------------------------------------


def test_system_distance():
    assert system_distance(CyclicSystem(5), 1, 6) == 0.0
    assert system_distance(CyclicSystem(5), 1, 2) == 1.0
    assert system_distance(RotationSystem.from_angle(0.1), 0.95, 0.05) == pytest.approx(0.1)
    skew = SkewProductSystem(GOLDEN)
    assert system_distance(skew, (0.0, 0.9), (0.0, 0.1)) == pytest.approx(0.2)


def test_spec_strings():
    assert CyclicSystem(5).spec_string() == "cyclic:5"
    assert OdometerSystem(2, 3).spec_string() == "odo:2^3"
    assert RotationSystem.from_rationals(Fraction(1, 3)).spec_string() == "rot:1/3"
    assert product(CyclicSystem(2), CyclicSystem(3)).spec_string() == "prod(cyclic:2,cyclic:3)"

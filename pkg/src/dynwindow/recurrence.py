"""Window-bounded recurrence and orbit-density tests.

The cyclic systems are the exact oracle family: every finite minimal system
is a single cycle, so "recurrence/density for all minimal systems of size
<= M" is literally decidable as residue coverage mod every m <= M.  Metric
systems (rotations, skew products) get numeric eps-density tests with an
explicit floating-point error budget; their verdicts never claim asymptotic
membership in any recurrence family.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Optional

import numpy as np

from .intsets import Verdict, Window, difference_set, shifted_hit
from .systems import (
    CyclicSystem,
    OdometerSystem,
    ProductSystem,
    RotationSystem,
    SkewProductSystem,
    cover_for,
    eps_dense,
    mult_angle_mod1,
    orbit_along,
    orbit_at,
    system_distance,
)

__all__ = [
    "ReturnTimesResult",
    "RSequenceReport",
    "CoverageError",
    "ProductTransitivityResult",
    "DEFAULT_SWEEP_SEED",
    "return_times",
    "r_sequence_cyclic",
    "r_sequence_metric",
    "birkhoff_window_test",
    "shift_family_test",
    "crosscheck_cyclic_equivalence",
    "finite_subcover",
    "product_transitive_finite",
    "cesaro_average_along",
    "cesaro_interval_closed_form",
    "random_windows",
]

DEFAULT_SWEEP_SEED = 1729

# Element bound beyond which the cross-check would have to materialize
# impractically large return-time / difference windows.
_CROSSCHECK_ELEMENT_CAP = 1_000_000


class CoverageError(ValueError):
    """Residue coverage precondition failed; carries the missing class."""

    def __init__(self, period: int, missing: int):
        super().__init__(f"residues mod {period} do not cover Z/{period}: class {missing} is missing")
        self.period = period
        self.missing = missing


@dataclass(frozen=True)
class ReturnTimesResult:
    """The set {1 <= n <= horizon : T^n(start) in cell}, replayable."""

    times: Window
    cell: object
    start: object


@dataclass(frozen=True)
class RSequenceReport:
    """Verdict plus per-system evidence for an orbit-density family test."""

    family: str
    verdict: Verdict
    per_system: dict

    def to_json(self) -> dict:
        out = self.verdict.to_json()
        out["family"] = self.family
        out["per_system"] = [
            {"system": k, **v} for k, v in self.per_system.items()
        ]
        return out


def return_times(sys, start, cell, horizon: int, cover=None) -> ReturnTimesResult:
    """Positive times n <= horizon at which the orbit of start visits the cell.

    Time 0 is deliberately excluded: these windows feed recurrence tests,
    where the trivial visit at n = 0 would make everything pass.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if cover is None:
        cover = cover_for(sys)
    times = []
    if isinstance(sys, (CyclicSystem, OdometerSystem, ProductSystem)):
        state = start
        for n in range(1, horizon + 1):
            state = sys.step(state)
            if cover.cell_of(state) == cell:
                times.append(n)
    else:
        for n in range(1, horizon + 1):
            if cover.cell_of(orbit_at(sys, start, n)) == cell:
                times.append(n)
    return ReturnTimesResult(Window(tuple(times), horizon), cell, start)


def _missing_residue(a: Window, m: int) -> Optional[int]:
    """Smallest residue class mod m not hit by the window, or None if covered."""
    if not a.elements:
        return 0
    if a.elements[-1] <= 2 ** 62:
        arr = np.asarray(a.elements, dtype=np.int64)
        hit = np.unique(arr % m)
        if hit.size == m:
            return None
        mismatch = np.nonzero(hit != np.arange(hit.size))[0]
        return int(mismatch[0]) if mismatch.size else int(hit.size)
    seen = {e % m for e in a.elements}
    for r in range(m):
        if r not in seen:
            return r
    return None


def r_sequence_cyclic(a: Window, max_period: int) -> RSequenceReport:
    """Exact orbit-density test against every cycle of period m <= max_period.

    On Z/m, "the orbit of some point along a is dense" is exactly "a covers
    every residue class mod m".  Holds iff all m pass; the failure witness is
    (m, smallest missing residue) for the smallest failing m.
    """
    if max_period < 1:
        raise ValueError("max_period must be >= 1")
    per_system = {}
    verdict = None
    for m in range(1, max_period + 1):
        missing = _missing_residue(a, m)
        per_system[f"cyclic:{m}"] = {"covered": missing is None, "missing": missing}
        if missing is not None and verdict is None:
            verdict = Verdict.fail((m, missing), note=f"residue {missing} mod {m} never hit")
    if verdict is None:
        verdict = Verdict.hold(note=f"covers every residue class mod m for all m <= {max_period}")
    return RSequenceReport(f"cyclic m <= {max_period}", verdict, per_system)


def _metric_budget_note(a: Window, eps: float) -> Optional[str]:
    # Angle representation error (half an ulp of a number < 1) amplified by
    # the largest time must stay well under the cell size.
    drift = (a.elements[-1] if a.elements else a.horizon) * 2.0 ** -53
    if drift > eps / 10.0:
        return (
            f"floating-point budget exceeded: time-amplified angle error {drift:.3g} "
            f"> eps/10 = {eps / 10.0:.3g}"
        )
    return None


def _start_grid(sys, resolution: float) -> list:
    k = max(1, math.ceil(1.0 / resolution))
    axis = [i / k for i in range(k)]
    if isinstance(sys, RotationSystem):
        if sys.dimension == 1:
            return axis
        grid = [axis] * sys.dimension
        out = [()]
        for ax in grid:
            out = [prev + (x,) for prev in out for x in ax]
        return out
    if isinstance(sys, SkewProductSystem):
        return [(x, y) for x in axis for y in axis]
    raise TypeError(f"not a metric catalog system: {sys!r}")


def r_sequence_metric(a: Window, sys, eps: float, start_grid_resolution: float) -> RSequenceReport:
    """Numeric orbit-density test on a rotation or skew product.

    Searches start points on a lexicographic grid; Holds iff some start's
    orbit along a is eps-dense.  Otherwise reports the best start (most
    cells hit) and its first empty cell.  The report is a claim about this
    window and eps only.
    """
    family = f"{sys.spec_string()} eps={eps}"
    exact = isinstance(sys, RotationSystem) and sys.exact is not None
    if not exact:
        note = _metric_budget_note(a, eps)
        if note is not None:
            return RSequenceReport(family, Verdict.undecided(note=note), {})
    cover = cover_for(sys, eps)
    total = cover.cell_count()
    window_desc = f"{len(a)} elements on [0, {a.horizon}], eps={eps}"
    best = None  # (hit count, start, first empty cell)
    for start in _start_grid(sys, start_grid_resolution):
        states = orbit_along(sys, start, a)
        verdict = eps_dense(sys, states, cover)
        if verdict.holds:
            detail = {str(start): {"cells_hit": total, "cells": total}}
            return RSequenceReport(
                family,
                Verdict.hold(start, note=f"orbit of {start} along {window_desc} is dense"),
                detail,
            )
        hit = len({cover.cell_of(s) for s in states})
        if best is None or hit > best[0]:
            best = (hit, start, verdict.witness)
    hit, start, empty = best
    detail = {str(start): {"cells_hit": hit, "cells": total, "empty_cell": empty}}
    verdict = Verdict.fail(
        empty,
        note=f"best start {start} hits {hit}/{total} cells along {window_desc}; cell {empty} stays empty",
    )
    return RSequenceReport(family, verdict, detail)


def birkhoff_window_test(a: Window, sys, eps: float, start_grid_resolution: float = 1.0) -> Verdict:
    """Does some start return eps-close to itself at a time in the window?

    Grid starts in lexicographic order, first witness (start, n) wins.
    Element 0 of the window is ignored (trivial return).
    """
    if isinstance(sys, (CyclicSystem, OdometerSystem)):
        starts: list = (
            list(range(sys.period))
            if isinstance(sys, CyclicSystem)
            else [sys.decode(v) for v in range(sys.size)]
        )
    else:
        note = _metric_budget_note(a, eps)
        if note is not None:
            return Verdict.undecided(note=note)
        starts = _start_grid(sys, start_grid_resolution)
    closest = None  # (distance, start, n)
    for start in starts:
        for n in a.elements:
            if n == 0:
                continue
            d = system_distance(sys, orbit_at(sys, start, n), start)
            if d < eps:
                return Verdict.hold((start, n), note=f"T^{n} returns within {d:.3g} < {eps}")
            if closest is None or d < closest[0]:
                closest = (d, start, n)
    if closest is None:
        return Verdict.fail(min(a.horizon, 0), note="window has no positive elements")
    d, start, n = closest
    return Verdict.fail((start, n), note=f"closest return distance {d:.3g} >= eps = {eps}")


def shift_family_test(a: Window, shifts: Iterable[int], tester: Callable) -> Verdict:
    """Apply a window test to (a + n) ∩ [0, horizon] for every shift n.

    Holds iff all shifts pass; the witness is the first failing shift in
    ascending order.  Inconclusive inner verdicts propagate.
    """
    shifts = sorted(shifts)
    for n in shifts:
        result = tester(a.shift(n))
        verdict = result.verdict if isinstance(result, RSequenceReport) else result
        if verdict.fails:
            return Verdict.fail(n, note=f"shift {n:+d} fails: {verdict.note or verdict.witness}")
        if verdict.inconclusive:
            return Verdict.undecided(note=f"shift {n:+d} inconclusive: {verdict.note}")
    return Verdict.hold(note=f"all {len(shifts)} shifts pass")


@lru_cache(maxsize=None)
def _cyclic_return_window(m: int, horizon: int) -> Window:
    # N(U,U) for the singleton cell {0} of Z/m, computed by honest stepping.
    return return_times(CyclicSystem(m), 0, 0, horizon).times


@lru_cache(maxsize=None)
def _progression_difference_window(m: int, r: int, horizon: int) -> Window:
    # S - S for the syndetic progression S = {r, r+m, r+2m, ...} on [0, horizon].
    s = Window(tuple(range(r, horizon + 1, m)), horizon)
    return difference_set(s)


def crosscheck_cyclic_equivalence(a: Window, max_period: int, shifts: Iterable[int]) -> Verdict:
    """Cross-check three window forms of the shift-invariant recurrence test.

    For each m <= max_period the following are computed by independent code
    paths and must agree:

      (1) a covers every residue class mod m;
      (2) for every shift n, (a + n) meets the return-time set N(U,U) of the
          m-cycle (built by orbit stepping);
      (3) for every shift n and every progression S = mN + r, (a + n) meets
          S - S (built by difference_set).

    Any disagreement is an implementation bug, reported as Fails with the
    offending (m, coverage, return-hit, difference-hit) tuple.  Exact
    agreement is guaranteed when the shift range spans at least max_period
    consecutive integers and every inhabited residue class has an element
    >= max_period + |most negative shift|; windows hugging 0 can disagree
    honestly at the bottom edge.
    """
    if a.elements and a.elements[-1] > _CROSSCHECK_ELEMENT_CAP:
        raise ValueError(
            f"cross-check materializes comparison windows up to the largest element; "
            f"{a.elements[-1]} exceeds the {_CROSSCHECK_ELEMENT_CAP} cap"
        )
    shifts = sorted(shifts)
    if not shifts:
        raise ValueError("shift range must be nonempty")
    ext = a.horizon + max(shifts[-1], 0) + max_period
    for m in range(1, max_period + 1):
        covered = _missing_residue(a, m) is None
        nuu = _cyclic_return_window(m, ext)
        return_hit = all(shifted_hit(a, nuu, -n).holds for n in shifts)
        diff_hit = True
        for r in range(m):
            d = _progression_difference_window(m, r, ext)
            if not all(shifted_hit(a, d, -n).holds for n in shifts):
                diff_hit = False
                break
        if not (covered == return_hit == diff_hit):
            return Verdict.fail(
                (m, covered, return_hit, diff_hit),
                note=(
                    f"m={m}: residue coverage={covered}, "
                    f"return-time hitting={return_hit}, difference-set hitting={diff_hit}"
                ),
            )
    return Verdict.hold(
        note=f"all three predicates agree for every m <= {max_period} across {len(shifts)} shifts"
    )


def finite_subcover(a: Window, m: int) -> Window:
    """Minimal-cardinality B ⊆ a whose residues cover Z/m (the least element per class).

    Raises CoverageError with the missing residue if a does not cover mod m.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    first: dict[int, int] = {}
    for e in a.elements:
        r = e % m
        if r not in first:
            first[r] = e
            if len(first) == m:
                break
    if len(first) < m:
        missing = min(r for r in range(m) if r not in first)
        raise CoverageError(m, missing)
    return Window(tuple(sorted(first.values())), a.horizon)


@dataclass(frozen=True)
class ProductTransitivityResult:
    """gcd formula vs honest orbit enumeration for a product of two cycles."""

    m: int
    n: int
    coprime: bool
    orbit_size: int
    full_product: bool

    @property
    def agrees(self) -> bool:
        return self.full_product == self.coprime and self.orbit_size == math.lcm(self.m, self.n)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "transitive": self.coprime,
            "orbit_size": self.orbit_size,
            "full_product": self.full_product,
            "agrees": self.agrees,
        }


def product_transitive_finite(m: int, n: int) -> ProductTransitivityResult:
    """Is Z/m x Z/n a single orbit?  Formula gcd(m,n)=1, verified by enumeration."""
    if m < 1 or n < 1:
        raise ValueError("m, n must be >= 1")
    sys = ProductSystem(CyclicSystem(m), CyclicSystem(n))
    seen = set()
    state = (0, 0)
    while state not in seen:
        seen.add(state)
        state = sys.step(state)
    size = len(seen)
    return ProductTransitivityResult(m, n, math.gcd(m, n) == 1, size, size == m * n)


def cesaro_average_along(a: Window, sys: RotationSystem, k: int, start: float = 0.0) -> list[float]:
    """Magnitudes |1/N * sum_{i<=N} e^{2 pi i k (start + a_i alpha)}| per prefix N.

    The character average along the window: it decays when the orbit along a
    equidistributes, stays at 1 when the orbit is a single point.  Phases are
    reduced mod 1 exactly; prefix sums accumulate in extended precision.
    """
    if k == 0:
        raise ValueError("k must be nonzero: the constant character is trivial")
    if not isinstance(sys, RotationSystem) or sys.dimension != 1:
        raise TypeError("cesaro_average_along expects a 1-dimensional RotationSystem")
    if not a.elements:
        return []
    alpha = sys.angles[0]
    base = mult_angle_mod1(k, float(start)) if start else 0.0
    phases = np.array([(base + mult_angle_mod1(k * n, alpha)) % 1.0 for n in a.elements])
    terms = np.exp(2j * np.pi * phases).astype(np.clongdouble)
    sums = np.cumsum(terms)
    mags = np.abs(sums) / np.arange(1, len(terms) + 1, dtype=np.longdouble)
    return [float(x) for x in mags]


def cesaro_interval_closed_form(n_terms: int, alpha: float, k: int) -> float:
    """|1/N * sum_{n=1}^{N} e^{2 pi i k n alpha}| via the geometric sum.

    Cross-check for cesaro_average_along on the full interval [1, N].
    """
    if k == 0:
        raise ValueError("k must be nonzero")
    if n_terms < 1:
        raise ValueError("need at least one term")
    y1 = mult_angle_mod1(k, alpha)
    if y1 == 0.0:
        return 1.0
    y_top = mult_angle_mod1(k * n_terms, alpha)
    return abs(math.sin(math.pi * y_top)) / (n_terms * abs(math.sin(math.pi * y1)))


def random_windows(
    count: int,
    horizon: int,
    seed: int = DEFAULT_SWEEP_SEED,
    min_element: int = 50,
    density_range: tuple[float, float] = (5e-4, 0.5),
) -> list[Window]:
    """Seeded random windows with per-window density varied log-uniformly.

    Support starts at min_element so the cross-check's bottom-edge caveat
    never triggers; identical (count, horizon, seed, ...) give identical
    windows byte for byte.
    """
    if min_element > horizon:
        raise ValueError("min_element beyond horizon")
    rng = np.random.default_rng(seed)
    lo, hi = density_range
    out = []
    span = horizon - min_element + 1
    for _ in range(count):
        density = 10.0 ** rng.uniform(math.log10(lo), math.log10(hi))
        mask = rng.random(span) < density
        elements = tuple(int(x) + min_element for x in np.nonzero(mask)[0])
        out.append(Window(elements, horizon))
    return out

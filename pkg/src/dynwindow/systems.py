"""Catalog of concrete dynamical systems with exact or high-precision dynamics.

Finite systems (cycles, truncated odometers) are exact.  Metric systems
(torus rotations, the skew product (x, y) -> (x + a, y + x)) run in double
precision, with integer-times-angle products reduced mod 1 exactly so closed
forms do not lose accuracy at large times.  Every system is an immutable
value object; all operations are pure.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .intsets import Verdict, Window

__all__ = [
    "CyclicSystem",
    "RotationSystem",
    "OdometerSystem",
    "SkewProductSystem",
    "ProductSystem",
    "GridCover",
    "FiniteCover",
    "TorusCover",
    "ProductCover",
    "CoverMismatchError",
    "GOLDEN",
    "step",
    "orbit_at",
    "orbit_along",
    "cover_for",
    "eps_dense",
    "is_totally_minimal",
    "product",
    "system_distance",
    "mult_angle_mod1",
]

# (sqrt(5) - 1) / 2, the classical well-distributed rotation angle.
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def mult_angle_mod1(n: int, x: float) -> float:
    """n * x mod 1 computed exactly for the binary rational that x is.

    Doubles are dyadic rationals, so (n * num) % den is exact in integer
    arithmetic; the final division rounds once.  This keeps closed-form
    orbits accurate for astronomically large n.
    """
    if x == 0.0:
        return 0.0
    num, den = float(x).as_integer_ratio()
    return ((n * num) % den) / den


def _mod1(x: float) -> float:
    y = x % 1.0
    return y if y < 1.0 else 0.0


def _circular_dist(a: float, b: float) -> float:
    d = abs(float(a) - float(b)) % 1.0
    return min(d, 1.0 - d)


@dataclass(frozen=True)
class CyclicSystem:
    """x -> x + 1 on Z/period.  Minimal for every period; the exact oracle family."""

    period: int

    def __post_init__(self) -> None:
        if self.period < 1:
            raise ValueError("period must be >= 1")

    def step(self, state: int) -> int:
        return (state + 1) % self.period

    def spec_string(self) -> str:
        return f"cyclic:{self.period}"


@dataclass(frozen=True)
class RotationSystem:
    """Rotation by a fixed angle vector on the d-torus.

    Angles live in [0,1); an optional exact rational form switches orbit
    computations to exact Fraction arithmetic (and makes the system
    equivalent to a cycle of period lcm of the denominators).
    """

    angles: tuple[float, ...]
    exact: Optional[tuple[Fraction, ...]] = None

    def __post_init__(self) -> None:
        if not self.angles:
            raise ValueError("need at least one angle")
        object.__setattr__(self, "angles", tuple(_mod1(float(a)) for a in self.angles))
        if self.exact is not None:
            ex = tuple(Fraction(e) % 1 for e in self.exact)
            if len(ex) != len(self.angles):
                raise ValueError("exact form must match dimension")
            object.__setattr__(self, "exact", ex)

    @classmethod
    def from_angle(cls, angle: float) -> "RotationSystem":
        return cls((float(angle),))

    @classmethod
    def from_rationals(cls, *fracs: Fraction) -> "RotationSystem":
        fracs = tuple(Fraction(f) % 1 for f in fracs)
        return cls(tuple(float(f) for f in fracs), fracs)

    @property
    def dimension(self) -> int:
        return len(self.angles)

    @property
    def rational_period(self) -> Optional[int]:
        """lcm of denominators when an exact rational form is present."""
        if self.exact is None:
            return None
        return math.lcm(*(f.denominator for f in self.exact))

    def _tuple(self, state):
        if self.dimension == 1 and not isinstance(state, tuple):
            return (state,)
        return tuple(state)

    def _untuple(self, coords):
        return coords[0] if self.dimension == 1 else tuple(coords)

    def step(self, state):
        coords = self._tuple(state)
        if self.exact is not None and all(isinstance(c, (int, Fraction)) for c in coords):
            out = tuple((Fraction(c) + f) % 1 for c, f in zip(coords, self.exact))
        else:
            out = tuple(_mod1(float(c) + a) for c, a in zip(coords, self.angles))
        return self._untuple(out)

    def spec_string(self) -> str:
        if self.exact is not None:
            return "rot:" + ",".join(f"{f.numerator}/{f.denominator}" for f in self.exact)
        return "rot:" + ",".join(repr(a) for a in self.angles)


@dataclass(frozen=True)
class OdometerSystem:
    """Truncated adding machine: add-1-with-carry on depth base-p digits.

    States are digit tuples, least significant first; integer states are
    accepted and decoded.  Equivalent to a cycle of period base**depth.
    """

    base: int
    depth: int

    def __post_init__(self) -> None:
        if self.base < 2:
            raise ValueError("base must be >= 2")
        if self.depth < 1:
            raise ValueError("depth must be >= 1")

    @property
    def size(self) -> int:
        return self.base ** self.depth

    def encode(self, state) -> int:
        if isinstance(state, int):
            if not 0 <= state < self.size:
                raise ValueError(f"state {state} outside [0, {self.size})")
            return state
        digits = tuple(state)
        if len(digits) != self.depth or any(not 0 <= d < self.base for d in digits):
            raise ValueError(f"bad digit state {state!r}")
        value = 0
        for d in reversed(digits):
            value = value * self.base + d
        return value

    def decode(self, value: int) -> tuple[int, ...]:
        digits = []
        for _ in range(self.depth):
            digits.append(value % self.base)
            value //= self.base
        return tuple(digits)

    def step(self, state):
        digits = list(self.decode(self.encode(state)))
        for i in range(self.depth):
            digits[i] += 1
            if digits[i] < self.base:
                break
            digits[i] = 0
        return tuple(digits)

    def spec_string(self) -> str:
        return f"odo:{self.base}^{self.depth}"


@dataclass(frozen=True)
class SkewProductSystem:
    """(x, y) -> (x + a, y + x) on the 2-torus over a circle rotation.

    Closed form: T^n(x, y) = (x + n a, y + n x + n(n-1)/2 a) mod 1.
    """

    angle: float
    exact: Optional[Fraction] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "angle", _mod1(float(self.angle)))
        if self.exact is not None:
            object.__setattr__(self, "exact", Fraction(self.exact) % 1)

    def step(self, state):
        x, y = state
        return (_mod1(float(x) + self.angle), _mod1(float(y) + float(x)))

    def spec_string(self) -> str:
        return f"skew:{self.angle!r}"


@dataclass(frozen=True)
class ProductSystem:
    """Componentwise product of any two catalog systems."""

    left: object
    right: object

    def step(self, state):
        sl, sr = state
        return (self.left.step(sl), self.right.step(sr))

    def spec_string(self) -> str:
        return f"prod({self.left.spec_string()},{self.right.spec_string()})"


System = Union[CyclicSystem, RotationSystem, OdometerSystem, SkewProductSystem, ProductSystem]


def step(sys: System, state):
    """One application of the system map."""
    return sys.step(state)


def orbit_at(sys: System, start, n: int):
    """T^n(start) by closed form (exact for finite systems, mod-1 exact products otherwise)."""
    if isinstance(sys, CyclicSystem):
        return (start + n) % sys.period
    if isinstance(sys, OdometerSystem):
        return sys.decode((sys.encode(start) + n) % sys.size)
    if isinstance(sys, RotationSystem):
        coords = sys._tuple(start)
        if sys.exact is not None and all(isinstance(c, (int, Fraction)) for c in coords):
            out = tuple((Fraction(c) + n * f) % 1 for c, f in zip(coords, sys.exact))
        else:
            out = tuple(_mod1(float(c) + mult_angle_mod1(n, a)) for c, a in zip(coords, sys.angles))
        return sys._untuple(out)
    if isinstance(sys, SkewProductSystem):
        x, y = float(start[0]), float(start[1])
        nx = _mod1(x + mult_angle_mod1(n, sys.angle))
        ny = _mod1(y + mult_angle_mod1(n, x) + mult_angle_mod1(n * (n - 1) // 2, sys.angle))
        return (nx, ny)
    if isinstance(sys, ProductSystem):
        sl, sr = start
        return (orbit_at(sys.left, sl, n), orbit_at(sys.right, sr, n))
    raise TypeError(f"not a catalog system: {sys!r}")


def orbit_along(sys: System, start, a: Window) -> list:
    """States T^n(start) for n in a.elements, in order."""
    return [orbit_at(sys, start, n) for n in a.elements]


class CoverMismatchError(ValueError):
    """The cover was built for a different system."""


class GridCover:
    """Resolution-eps partition of a system's space into replayable cells."""

    system: System
    resolution: float

    def cell_of(self, state):
        raise NotImplementedError

    def cell_ids(self) -> Iterable:
        raise NotImplementedError

    def cell_count(self) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class FiniteCover(GridCover):
    """Singleton cells for a finite system; ids are state values 0..size-1."""

    system: System
    size: int
    resolution: float = 1.0

    def cell_of(self, state):
        if isinstance(self.system, OdometerSystem):
            return self.system.encode(state)
        return state % self.size

    def cell_ids(self):
        return range(self.size)

    def cell_count(self) -> int:
        return self.size


@dataclass(frozen=True)
class TorusCover(GridCover):
    """Half-open boxes [k/K, (k+1)/K)^d with K = ceil(1/eps), tiling exactly."""

    system: System
    dimension: int
    k: int
    resolution: float

    def _coord_cell(self, x) -> int:
        if isinstance(x, Fraction):
            idx = int(x * self.k)
        else:
            idx = int(float(x) * self.k)
        return min(max(idx, 0), self.k - 1)

    def cell_of(self, state):
        if self.dimension == 1 and not isinstance(state, tuple):
            return self._coord_cell(state)
        cells = tuple(self._coord_cell(c) for c in state)
        return cells[0] if self.dimension == 1 else cells

    def cell_ids(self):
        if self.dimension == 1:
            return range(self.k)
        return itertools.product(range(self.k), repeat=self.dimension)

    def cell_count(self) -> int:
        return self.k ** self.dimension


@dataclass(frozen=True)
class ProductCover(GridCover):
    """Product of component covers; ids are (left id, right id) pairs."""

    system: System
    left: GridCover
    right: GridCover

    @property
    def resolution(self) -> float:  # type: ignore[override]
        return max(self.left.resolution, self.right.resolution)

    def cell_of(self, state):
        sl, sr = state
        return (self.left.cell_of(sl), self.right.cell_of(sr))

    def cell_ids(self):
        return itertools.product(self.left.cell_ids(), self.right.cell_ids())

    def cell_count(self) -> int:
        return self.left.cell_count() * self.right.cell_count()


def cover_for(sys: System, eps: float = 1.0) -> GridCover:
    """The canonical cover: singletons for finite systems, mesh <= eps grids otherwise."""
    if eps <= 0:
        raise ValueError("eps must be > 0")
    if isinstance(sys, CyclicSystem):
        return FiniteCover(sys, sys.period)
    if isinstance(sys, OdometerSystem):
        return FiniteCover(sys, sys.size)
    if isinstance(sys, RotationSystem):
        return TorusCover(sys, sys.dimension, max(1, math.ceil(1.0 / eps)), eps)
    if isinstance(sys, SkewProductSystem):
        return TorusCover(sys, 2, max(1, math.ceil(1.0 / eps)), eps)
    if isinstance(sys, ProductSystem):
        return ProductCover(sys, cover_for(sys.left, eps), cover_for(sys.right, eps))
    raise TypeError(f"not a catalog system: {sys!r}")


def eps_dense(sys: System, states: Sequence, cover: GridCover) -> Verdict:
    """Does every cell of the cover contain at least one listed state?

    Fails with the first empty cell in canonical order.
    """
    if cover.system != sys:
        raise CoverMismatchError(f"cover built for {cover.system!r}, not {sys!r}")
    hit = {cover.cell_of(s) for s in states}
    for cell in cover.cell_ids():
        if cell not in hit:
            return Verdict.fail(cell, note=f"cell {cell} of {cover.cell_count()} is unvisited")
    return Verdict.hold(note=f"all {cover.cell_count()} cells visited by {len(states)} states")


def product(left: System, right: System) -> ProductSystem:
    return ProductSystem(left, right)


def _smallest_prime_factor(n: int) -> int:
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d
        d += 1
    return n


def _rational_structure(sys: System) -> tuple[Optional[int], bool, bool]:
    """(rational period, irrationality caveat, minimal-on-its-space).

    The rational period is the order of the system's finite cyclic factor
    (1 when there is none); None paired with minimal=False marks systems
    that are not minimal at all.
    """
    if isinstance(sys, CyclicSystem):
        return sys.period, False, True
    if isinstance(sys, OdometerSystem):
        return sys.size, False, True
    if isinstance(sys, RotationSystem):
        if sys.exact is not None:
            return sys.rational_period, False, True
        return 1, True, True
    if isinstance(sys, SkewProductSystem):
        if sys.exact is not None:
            # Rational angle: orbit closures are finitely many circles,
            # never the whole 2-torus.
            return None, False, False
        return 1, True, True
    if isinstance(sys, ProductSystem):
        ql, cl, ml = _rational_structure(sys.left)
        qr, cr, mr = _rational_structure(sys.right)
        if not (ml and mr) or ql is None or qr is None:
            return None, cl or cr, False
        if math.gcd(ql, qr) != 1:
            return None, cl or cr, False
        return ql * qr, cl or cr, True
    raise TypeError(f"not a catalog system: {sys!r}")


def is_totally_minimal(sys: System) -> Verdict:
    """Is (X, T^n) minimal for every n?

    Exact on finite systems and rational rotations (any rational period q > 1
    fails at n = smallest prime factor of q).  For irrational angles the
    verdict is asserted on the window with the caveat recorded in the note.
    """
    q, caveat, minimal = _rational_structure(sys)
    if not minimal:
        return Verdict.fail(1, note="system is not minimal on its space")
    if q is not None and q > 1:
        n = _smallest_prime_factor(q)
        return Verdict.fail(n, note=f"T^{n} splits the period-{q} cyclic factor")
    note = "exact: trivial rational factor"
    if caveat:
        note = (
            "asserted assuming the double-precision angles are irrational and "
            "rationally independent; not decidable from floats"
        )
    return Verdict.hold(note=note)


def system_distance(sys: System, s1, s2) -> float:
    """Discrete metric on finite systems, max circular distance on tori."""
    if isinstance(sys, (CyclicSystem, OdometerSystem)):
        if isinstance(sys, OdometerSystem):
            return 0.0 if sys.encode(s1) == sys.encode(s2) else 1.0
        return 0.0 if (s1 - s2) % sys.period == 0 else 1.0
    if isinstance(sys, RotationSystem):
        t1, t2 = sys._tuple(s1), sys._tuple(s2)
        return max(_circular_dist(a, b) for a, b in zip(t1, t2))
    if isinstance(sys, SkewProductSystem):
        return max(_circular_dist(s1[0], s2[0]), _circular_dist(s1[1], s2[1]))
    if isinstance(sys, ProductSystem):
        return max(
            system_distance(sys.left, s1[0], s2[0]),
            system_distance(sys.right, s1[1], s2[1]),
        )
    raise TypeError(f"not a catalog system: {sys!r}")

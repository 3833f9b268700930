"""Finite-window combinatorics of subsets of the naturals.

Everything here works on a Window: a finite, strictly ascending set of
naturals observed on [0, horizon].  Classifiers answer with a three-valued
Verdict because the underlying notions (syndetic, thick, piecewise
syndetic, ...) are asymptotic and undecidable from finite data: HoldsOnWindow
and FailsWithWitness are claims about the observed window only.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

__all__ = [
    "Status",
    "Verdict",
    "Window",
    "SequenceFormatError",
    "is_syndetic",
    "is_thick",
    "piecewise_syndetic_certificate",
    "difference_set",
    "shifted_hit",
    "finite_ip",
    "banach_density_estimate",
    "parse_sequence_text",
    "parse_sequence_file",
    "format_sequence",
    "write_sequence_file",
]

# Bitmask representations are only built for windows up to this horizon;
# sparse windows with huge horizons fall back to element-based algorithms.
_BITMASK_HORIZON_CAP = 4_000_000

# Spans beyond this would need >128MB FFT scratch; fall back to the scan.
_FFT_SPAN_CAP = 8_000_000

Witness = Union[int, tuple, None]


class Status(Enum):
    """Three-valued outcome of a window-bounded check."""

    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    """Window-bounded answer with a replayable witness.

    ``HOLDS`` never asserts the asymptotic property, only the window-bounded
    one.  ``FAILS`` always carries a witness the caller can replay against
    the definition; ``INCONCLUSIVE`` is reserved for checks that cannot be
    trusted on this input (e.g. a blown floating-point error budget).
    """

    status: Status
    witness: Witness = None
    note: str = ""

    @classmethod
    def hold(cls, witness: Witness = None, note: str = "") -> "Verdict":
        return cls(Status.HOLDS, witness, note)

    @classmethod
    def fail(cls, witness: Witness, note: str = "") -> "Verdict":
        return cls(Status.FAILS, witness, note)

    @classmethod
    def undecided(cls, note: str = "") -> "Verdict":
        return cls(Status.INCONCLUSIVE, None, note)

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    @property
    def fails(self) -> bool:
        return self.status is Status.FAILS

    @property
    def inconclusive(self) -> bool:
        return self.status is Status.INCONCLUSIVE

    def to_json(self) -> dict:
        witness = self.witness
        if isinstance(witness, tuple):
            witness = list(witness)
        return {"verdict": self.status.value, "witness": witness, "note": self.note}


@dataclass(frozen=True)
class Window:
    """A strictly ascending tuple of naturals observed on [0, horizon].

    The horizon is the declared observation bound, not max(elements); an
    empty element list is permitted.
    """

    elements: tuple[int, ...]
    horizon: int

    def __post_init__(self) -> None:
        if self.horizon < 0:
            raise ValueError(f"horizon must be >= 0, got {self.horizon}")
        prev = -1
        for e in self.elements:
            if e <= prev:
                raise ValueError(f"elements not strictly ascending at {prev}, {e}")
            prev = e
        if self.elements:
            if self.elements[0] < 0:
                raise ValueError(f"negative element {self.elements[0]}")
            if self.elements[-1] > self.horizon:
                raise ValueError(
                    f"element {self.elements[-1]} exceeds horizon {self.horizon}"
                )

    @classmethod
    def from_iterable(cls, elements: Iterable[int], horizon: Optional[int] = None) -> "Window":
        elems = tuple(sorted(set(int(e) for e in elements)))
        if horizon is None:
            horizon = elems[-1] if elems else 0
        return cls(elems, int(horizon))

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, n: int) -> bool:
        return n in self.as_set

    @cached_property
    def as_set(self) -> frozenset:
        return frozenset(self.elements)

    @cached_property
    def bitmask(self) -> Optional[int]:
        """Bitmask with bit e set per element, or None if the horizon is too large."""
        if self.horizon > _BITMASK_HORIZON_CAP:
            return None
        mask = 0
        for e in self.elements:
            mask |= 1 << e
        return mask

    def shift(self, n: int) -> "Window":
        """(self + n) truncated back to [0, horizon]; the horizon is kept."""
        lo, hi = 0, self.horizon
        shifted = tuple(e + n for e in self.elements if lo <= e + n <= hi)
        return Window(shifted, self.horizon)

    def restrict(self, horizon: int) -> "Window":
        """Re-windowed copy: elements above the new horizon are dropped."""
        cut = bisect.bisect_right(self.elements, horizon)
        return Window(self.elements[:cut], horizon)


class SequenceFormatError(ValueError):
    """Malformed sequence file; carries the 1-based offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def is_syndetic(w: Window, gap_bound: int) -> Verdict:
    """Does every run of gap_bound consecutive integers inside [0, horizon] meet w?

    Fails with the left endpoint of the first empty gap_bound-length run.
    """
    if gap_bound < 1:
        raise ValueError("gap_bound must be >= 1")
    if w.horizon + 1 < gap_bound:
        return Verdict.hold(note=f"vacuous: no run of {gap_bound} fits inside [0, {w.horizon}]")
    prev = -1
    for e in w.elements:
        if e - prev - 1 >= gap_bound:
            return Verdict.fail(prev + 1, note=f"empty run [{prev + 1}, {prev + gap_bound}]")
        prev = e
    if w.horizon - prev >= gap_bound:
        return Verdict.fail(prev + 1, note=f"empty run [{prev + 1}, {prev + gap_bound}]")
    return Verdict.hold(note=f"every {gap_bound}-run in [0, {w.horizon}] meets the window")


def is_thick(w: Window, run_length: int) -> Verdict:
    """Does w contain run_length consecutive integers?  Witness: the run's start."""
    if run_length < 1:
        raise ValueError("run_length must be >= 1")
    best_len, best_start = 0, None
    run_start = None
    prev = None
    for e in w.elements:
        if prev is None or e != prev + 1:
            run_start = e
        run_len = e - run_start + 1
        if run_len > best_len:
            best_len, best_start = run_len, run_start
        if run_len >= run_length:
            return Verdict.hold(run_start, note=f"run of {run_len} starting at {run_start}")
        prev = e
    return Verdict.fail(
        w.horizon,
        note=f"longest run has length {best_len}"
        + (f" (starts at {best_start})" if best_start is not None else "")
        + f"; searched up to horizon {w.horizon}",
    )


def piecewise_syndetic_certificate(w: Window, gap_bound: int, block_length: int) -> Verdict:
    """Search for an interval of block_length on which w is gap_bound-syndetic.

    Holds with the interval's start if one exists inside [0, horizon]; Fails
    means no such interval exists for THESE parameters on this window.
    """
    if gap_bound < 1:
        raise ValueError("gap_bound must be >= 1")
    if block_length < gap_bound:
        raise ValueError("block_length must be >= gap_bound")
    if block_length > w.horizon + 1:
        return Verdict.fail(w.horizon, note=f"no interval of length {block_length} fits")
    # A valid interval must sit around a maximal chain of elements whose
    # successive differences are <= gap_bound; it may extend gap_bound-1
    # past the chain on either side.
    i, n = 0, len(w.elements)
    while i < n:
        j = i
        while j + 1 < n and w.elements[j + 1] - w.elements[j] <= gap_bound:
            j += 1
        lo = max(0, w.elements[i] - gap_bound + 1)
        hi = min(w.horizon, w.elements[j] + gap_bound - 1)
        if hi - lo + 1 >= block_length:
            return Verdict.hold(lo, note=f"interval [{lo}, {lo + block_length - 1}]")
        i = j + 1
    return Verdict.fail(
        w.horizon, note=f"no {gap_bound}-syndetic interval of length {block_length} up to {w.horizon}"
    )


def difference_set(w: Window) -> Window:
    """All positive differences {s - s' : s, s' in w, s > s'}.

    Zero is excluded: recurrence tests care about returns at positive times
    and 0 would make every such test trivially pass.  Result horizon is the
    input horizon.

    Large windows go through an indicator autocorrelation (counts are
    integers <= |w|, so double-precision FFT roundoff of ~1e-9 cannot cross
    the 0.5 decision threshold); small or extremely wide-spanned windows
    use the quadratic scan.
    """
    n = len(w.elements)
    if n < 2:
        return Window((), w.horizon)
    span = w.elements[-1] - w.elements[0]
    if n > 400 and span <= _FFT_SPAN_CAP:
        import numpy as np

        base = w.elements[0]
        ind = np.zeros(span + 1)
        ind[[e - base for e in w.elements]] = 1.0
        size = 1
        while size < 2 * (span + 1):
            size *= 2
        spectrum = np.fft.rfft(ind, size)
        counts = np.fft.irfft(spectrum * np.conj(spectrum), size)[: span + 1]
        diffs = tuple(int(d) for d in np.nonzero(counts > 0.5)[0] if d > 0)
        return Window(diffs, w.horizon)
    out = set()
    elems = w.elements
    for i in range(n):
        ei = elems[i]
        for j in range(i + 1, n):
            out.add(elems[j] - ei)
    return Window(tuple(sorted(out)), w.horizon)


def shifted_hit(a: Window, d: Window, shift: int) -> Verdict:
    """Does a meet (shift + d)?  Holds with the least common element.

    Fails carries min(horizons) to signal how far the search reached.
    """
    fail = Verdict.fail(
        min(a.horizon, d.horizon),
        note=f"a ∩ ({shift:+d} + d) empty up to horizon {min(a.horizon, d.horizon)}",
    )
    if not a.elements or not d.elements:
        return fail
    mask_a, mask_d = a.bitmask, d.bitmask
    if mask_a is not None and mask_d is not None:
        shifted = mask_d << shift if shift >= 0 else mask_d >> -shift
        common = mask_a & shifted
        if common:
            witness = (common & -common).bit_length() - 1
            return Verdict.hold(witness, note=f"{witness} = {shift:+d} + {witness - shift}")
        return fail
    if len(a) <= len(d):
        dset = d.as_set
        for x in a.elements:
            if x - shift in dset:
                return Verdict.hold(x, note=f"{x} = {shift:+d} + {x - shift}")
    else:
        aset = a.as_set
        for y in d.elements:
            if y + shift in aset:
                return Verdict.hold(y + shift, note=f"{y + shift} = {shift:+d} + {y}")
    return fail


def finite_ip(generators: Sequence[int]) -> Window:
    """All sums of nonempty sub-multisets of the generators, deduplicated.

    Horizon is the total sum.  Repeated generator values are allowed and
    collapse the sum set (e.g. (3, 3) -> {3, 6}).  With k distinct values
    this is exponential in k; callers wanting large blocks should repeat
    values.
    """
    gens = list(generators)
    if not gens:
        raise ValueError("generators must be nonempty")
    if any(g < 1 for g in gens):
        raise ValueError("generators must all be >= 1")
    sums = {0}
    for g in gens:
        sums |= {s + g for s in sums}
    sums.discard(0)
    return Window(tuple(sorted(sums)), sum(gens))


def banach_density_estimate(w: Window, interval_length: int) -> Fraction:
    """Max of |w ∩ I| / interval_length over intervals I of that length in [0, horizon].

    Exact rational; a window-bounded stand-in for upper Banach density.
    """
    if not 1 <= interval_length <= w.horizon:
        raise ValueError("need 1 <= interval_length <= horizon")
    if not w.elements:
        return Fraction(0)
    elems = w.elements
    last_start = w.horizon - interval_length + 1
    best = 0
    # The max is attained by an interval starting at an element, or at the
    # rightmost admissible start.
    starts = [e for e in elems if e <= last_start]
    starts.append(last_start)
    for x in starts:
        count = bisect.bisect_right(elems, x + interval_length - 1) - bisect.bisect_left(elems, x)
        if count > best:
            best = count
    return Fraction(best, interval_length)


# -- sequence file format -----------------------------------------------------
#
# UTF-8 text: a mandatory first directive line `!horizon N`, then one decimal
# natural per line, strictly ascending; `#` starts a comment line.


def parse_sequence_text(text: str) -> Window:
    horizon = None
    elements: list[int] = []
    prev = -1
    saw_directive = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("!"):
            if saw_directive:
                raise SequenceFormatError("duplicate directive", lineno)
            parts = line[1:].split()
            if len(parts) != 2 or parts[0] != "horizon" or not parts[1].isdigit():
                raise SequenceFormatError(f"bad directive {line!r}, expected '!horizon N'", lineno)
            horizon = int(parts[1])
            saw_directive = True
            continue
        if not saw_directive:
            raise SequenceFormatError("missing '!horizon N' directive before data", lineno)
        if not line.isdigit():
            raise SequenceFormatError(f"not a decimal natural: {line!r}", lineno)
        value = int(line)
        if value <= prev:
            raise SequenceFormatError(f"not strictly ascending: {prev} then {value}", lineno)
        if value > horizon:
            raise SequenceFormatError(f"element {value} exceeds horizon {horizon}", lineno)
        elements.append(value)
        prev = value
    if not saw_directive:
        raise SequenceFormatError("missing '!horizon N' directive", 1)
    return Window(tuple(elements), horizon)


def parse_sequence_file(path) -> Window:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_sequence_text(fh.read())


def format_sequence(w: Window, comment: str = "") -> str:
    lines = [f"!horizon {w.horizon}"]
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.extend(str(e) for e in w.elements)
    return "\n".join(lines) + "\n"


def write_sequence_file(path, w: Window, comment: str = "") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_sequence(w, comment))

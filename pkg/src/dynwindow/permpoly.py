"""Prime-field polynomial engine: permutation tests and non-surjective primes.

Two independent deciders for "does f permute F_p": the classical criterion on
reductions of powers of f mod (x^p - x), and the brute-force image.  The
brute check is the authoritative oracle; any disagreement raises instead of
silently preferring either side.  On top sits the search for a prime p at
which an integer polynomial of degree >= 2 misses a residue class entirely.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

__all__ = [
    "PrimeField",
    "PolyModP",
    "NonSurjectiveResult",
    "OracleDisagreementError",
    "CapExceededError",
    "PolynomialSyntaxError",
    "is_prime",
    "reduce_mod_field_poly",
    "poly_mul",
    "pow_reduced",
    "hermite_check",
    "brute_permutation_check",
    "is_permutation",
    "find_non_surjective_prime",
    "parse_int_polynomial",
    "format_int_polynomial",
]


def is_prime(n: int) -> bool:
    """Deterministic trial division; ample at desk scale."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class OracleDisagreementError(AssertionError):
    """The criterion-based check and the brute-force oracle disagreed."""


class CapExceededError(RuntimeError):
    """No qualifying prime below the cap; the cap is too small, not the theory."""


class PolynomialSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")


@dataclass(frozen=True)
class PolyModP:
    """Polynomial over F_p; coeffs[i] is the coefficient of x^i, trimmed."""

    field: PrimeField
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        p = self.field.p
        if any(not 0 <= c < p for c in self.coeffs):
            raise ValueError("coefficients must be residues in [0, p)")
        if self.coeffs and self.coeffs[-1] == 0:
            raise ValueError("trailing zero coefficients must be trimmed")

    @classmethod
    def make(cls, p: int, coeffs: Sequence[int]) -> "PolyModP":
        field = p if isinstance(p, PrimeField) else PrimeField(p)
        reduced = [int(c) % field.p for c in coeffs]
        while reduced and reduced[-1] == 0:
            reduced.pop()
        return cls(field, tuple(reduced))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def evaluate(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for e in range(self.degree, -1, -1):
            c = self.coeffs[e]
            if c == 0:
                continue
            if e == 0:
                parts.append(str(c))
            elif e == 1:
                parts.append("x" if c == 1 else f"{c}x")
            else:
                parts.append(f"x^{e}" if c == 1 else f"{c}x^{e}")
        return "+".join(parts)


def poly_mul(f: PolyModP, g: PolyModP) -> PolyModP:
    """Plain convolution product over F_p (no field-polynomial reduction)."""
    if f.p != g.p:
        raise ValueError("mixed fields")
    if f.is_zero or g.is_zero:
        return PolyModP(f.field, ())
    p = f.p
    out = [0] * (f.degree + g.degree + 1)
    for i, ci in enumerate(f.coeffs):
        if ci == 0:
            continue
        for j, cj in enumerate(g.coeffs):
            out[i + j] = (out[i + j] + ci * cj) % p
    return PolyModP.make(p, out)


def reduce_mod_field_poly(f: PolyModP) -> PolyModP:
    """Remainder of f mod (x^p - x), via exponent folding.

    x^p = x on F_p, so exponent e >= 1 folds to the unique r in [1, p-1]
    with r ≡ e (mod p-1); exponent 0 stays; colliding coefficients add.
    The result has degree <= p-1 and induces the same function on F_p.
    """
    p = f.p
    if f.degree <= p - 1:
        return f
    out = [0] * p
    for e, c in enumerate(f.coeffs):
        if c == 0:
            continue
        r = e if e == 0 else (e - 1) % (p - 1) + 1
        out[r] = (out[r] + c) % p
    return PolyModP.make(p, out)


def pow_reduced(f: PolyModP, k: int) -> PolyModP:
    """reduce(f^k) by square-and-multiply, reducing after every product."""
    if k < 0:
        raise ValueError("k must be >= 0")
    result = PolyModP.make(f.p, (1,))
    base = reduce_mod_field_poly(f)
    while k:
        if k & 1:
            result = reduce_mod_field_poly(poly_mul(result, base))
        base = reduce_mod_field_poly(poly_mul(base, base))
        k >>= 1
    return result


def hermite_check(f: PolyModP) -> tuple[bool, dict]:
    """Permutation test via the criterion on reduced powers of f.

    f permutes F_p iff (1) reduce(f^(p-1)) is monic of degree p-1 and
    (2) for every k in [1, p-2] with k not divisible by p, reduce(f^k) has
    degree <= p-2.  Evidence names the failing k or the bad leading data.
    (The k-divisibility guard only bites over proper prime powers; it is
    vacuous here but kept to match the standard statement.)
    """
    p = f.p
    g = PolyModP.make(p, (1,))
    for k in range(1, p):
        g = reduce_mod_field_poly(poly_mul(g, f))
        if k <= p - 2:
            if k % p != 0 and g.degree > p - 2:
                return False, {"reason": "power_degree_full", "k": k, "degree": g.degree}
        else:  # k == p - 1
            if g.degree != p - 1 or g.coeffs[-1] != 1:
                return False, {
                    "reason": "top_power_not_monic",
                    "degree": g.degree,
                    "leading": g.coeffs[-1] if g.coeffs else 0,
                }
    return True, {"reason": "ok"}


def brute_permutation_check(f: PolyModP) -> tuple[bool, tuple[int, ...]]:
    """Evaluate f at all p points; True iff the image has p distinct values.

    Always returns the image set (sorted) — this is the authoritative oracle.
    """
    p = f.p
    image = sorted({f.evaluate(x) for x in range(p)})
    return len(image) == p, tuple(image)


def is_permutation(f: PolyModP) -> bool:
    """Both deciders, compared; raises OracleDisagreementError on mismatch."""
    via_criterion, evidence = hermite_check(f)
    via_brute, image = brute_permutation_check(f)
    if via_criterion != via_brute:
        raise OracleDisagreementError(
            f"permutation deciders disagree on {f} over F_{f.p}: "
            f"criterion={via_criterion} ({evidence}), brute={via_brute} (image {image})"
        )
    return via_brute


@dataclass(frozen=True)
class NonSurjectiveResult:
    """A prime p where the integer polynomial misses a residue class."""

    p: int
    missing: int
    image: tuple[int, ...]

    def to_json(self) -> dict:
        return {"p": self.p, "missing": self.missing, "image_size": len(self.image)}


def _int_poly_image_mod_p(coeffs: Sequence[int], p: int) -> set[int]:
    reduced = [c % p for c in coeffs]
    image = set()
    for x in range(p):
        acc = 0
        for c in reversed(reduced):
            acc = (acc * x + c) % p
        image.add(acc)
        if len(image) == p:
            break
    return image


def find_non_surjective_prime(coeffs: Sequence[int], prime_cap: int) -> NonSurjectiveResult:
    """First prime p ≡ 1 (mod deg f), p > |leading coeff|, where f misses a residue.

    coeffs are arbitrary-precision signed integers, ascending by exponent;
    degree must be >= 2.  Candidates are scanned in increasing order and each
    image is computed outright — the result is verified, never trusted.
    Raises CapExceededError when no candidate <= prime_cap qualifies (a
    too-small cap, not a counterexample).
    """
    trimmed = list(coeffs)
    while trimmed and trimmed[-1] == 0:
        trimmed.pop()
    degree = len(trimmed) - 1
    if degree < 2:
        raise ValueError(f"degree must be >= 2, got {degree}")
    lead = abs(trimmed[-1])
    if prime_cap < degree + 2:
        raise ValueError(f"prime_cap must be >= degree + 2 = {degree + 2}")
    p = degree + 1
    while p <= prime_cap:
        if p > lead and is_prime(p):
            image = _int_poly_image_mod_p(trimmed, p)
            if len(image) < p:
                missing = min(set(range(p)) - image)
                return NonSurjectiveResult(p, missing, tuple(sorted(image)))
        p += degree
    raise CapExceededError(
        f"no prime p ≡ 1 (mod {degree}) with p > {lead} and a proper image found up to "
        f"{prime_cap}; raise the cap"
    )


_TERM_X = re.compile(r"([+-]?\d*)\*?x(?:\^(\d+))?\Z")
_TERM_CONST = re.compile(r"[+-]?\d+\Z")


def parse_int_polynomial(text: str) -> tuple[int, ...]:
    """Parse e.g. "x^2+3x+1" or "-2x^3 + 7" into ascending integer coefficients."""
    compact = text.replace(" ", "")
    if not compact:
        raise PolynomialSyntaxError("empty polynomial")
    terms = re.findall(r"[+-]?[^+-]+", compact)
    if "".join(terms) != compact:
        raise PolynomialSyntaxError(f"cannot tokenize {text!r}")
    coeffs: dict[int, int] = {}
    for term in terms:
        m = _TERM_X.match(term)
        if m:
            raw_c, raw_e = m.groups()
            if raw_c in ("", "+"):
                c = 1
            elif raw_c == "-":
                c = -1
            else:
                c = int(raw_c)
            e = int(raw_e) if raw_e else 1
        elif _TERM_CONST.match(term):
            c, e = int(term), 0
        else:
            raise PolynomialSyntaxError(f"bad term {term!r} in {text!r}")
        coeffs[e] = coeffs.get(e, 0) + c
    top = max(coeffs)
    out = [coeffs.get(e, 0) for e in range(top + 1)]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


def format_int_polynomial(coeffs: Sequence[int]) -> str:
    parts = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = coeffs[e]
        if c == 0:
            continue
        sign = "-" if c < 0 else ("+" if parts else "")
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            x = "x" if e == 1 else f"x^{e}"
            body = x if mag == 1 else f"{mag}{x}"
        parts.append(sign + body)
    return "".join(parts) if parts else "0"

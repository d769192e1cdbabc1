"""Digit expansions in integer bases and exact low-discrepancy point generators.

Coordinates are exact `fractions.Fraction` values; floating-point views are
lossy accessors computed on demand.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

# Materialize point sets eagerly up to this count; use halton_stream above it.
EAGER_CAP = 1 << 22

KINDS = ("halton", "hammersley", "van_der_corput", "explicit")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def first_primes(k: int) -> tuple[int, ...]:
    """The first k primes, the usual basis choice in dimension k."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    found: list[int] = []
    n = 2
    while len(found) < k:
        if is_prime(n):
            found.append(n)
        n += 1
    return tuple(found)


@dataclass(frozen=True)
class Base:
    """An integer base >= 2 with a cached primality flag."""

    value: int

    def __post_init__(self) -> None:
        if not isinstance(self.value, int) or self.value < 2:
            raise ValueError(f"base must be an integer >= 2, got {self.value!r}")

    @property
    def is_prime(self) -> bool:
        return is_prime(self.value)


@dataclass(frozen=True)
class BasisPair:
    """A pair of coprime bases; the two-dimensional machinery is built on it."""

    p1: int
    p2: int

    def __post_init__(self) -> None:
        for p in (self.p1, self.p2):
            if not isinstance(p, int) or p < 2:
                raise ValueError(f"base must be an integer >= 2, got {p!r}")
        if _gcd(self.p1, self.p2) != 1:
            raise ValueError(f"bases must be coprime, got ({self.p1}, {self.p2})")

    @classmethod
    def of(cls, bases: "BasisPair | Sequence[int]") -> "BasisPair":
        if isinstance(bases, BasisPair):
            return bases
        p1, p2 = bases
        return cls(int(p1), int(p2))

    @property
    def primality(self) -> tuple[bool, bool]:
        return (is_prime(self.p1), is_prime(self.p2))

    def as_tuple(self) -> tuple[int, int]:
        return (self.p1, self.p2)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _check_pairwise_coprime(bases: Sequence[int]) -> None:
    for i in range(len(bases)):
        if bases[i] < 2:
            raise ValueError(f"base must be >= 2, got {bases[i]}")
        for j in range(i + 1, len(bases)):
            if _gcd(bases[i], bases[j]) != 1:
                raise ValueError(
                    f"bases must be pairwise coprime, got {bases[i]} and {bases[j]}"
                )


@dataclass(frozen=True)
class DigitVector:
    """Base-p digits of a nonnegative integer, least significant first.

    The trailing digit is nonzero unless the value is 0 (empty digit list).
    """

    base: int
    digits: tuple[int, ...]

    @property
    def value(self) -> int:
        v = 0
        for d in reversed(self.digits):
            v = v * self.base + d
        return v


def digits(n: int, p: int) -> DigitVector:
    """Expand n >= 0 in base p, least significant digit first."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if p < 2:
        raise ValueError(f"base must be >= 2, got {p}")
    out: list[int] = []
    while n:
        n, d = divmod(n, p)
        out.append(d)
    return DigitVector(base=p, digits=tuple(out))


def radical_inverse(n: int, p: int) -> Fraction:
    """Digit-reversal map: mirror the base-p digits of n across the radix point."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if p < 2:
        raise ValueError(f"base must be >= 2, got {p}")
    rev = 0
    scale = 1
    while n:
        n, d = divmod(n, p)
        rev = rev * p + d
        scale *= p
    return Fraction(rev, scale)


def fraction_digits(x: Fraction, p: int, r: int) -> tuple[int, ...]:
    """First r base-p digits of x in [0, 1), most significant first."""
    x = Fraction(x)
    if not 0 <= x < 1:
        raise ValueError(f"x must lie in [0, 1), got {x}")
    if r < 0:
        raise ValueError(f"digit count must be nonnegative, got {r}")
    num, den = x.numerator, x.denominator
    out = []
    for _ in range(r):
        num *= p
        d, num = divmod(num, den)
        out.append(d)
    return tuple(out)


@dataclass(frozen=True)
class RationalPoint:
    """A point of the unit cube with exact rational coordinates in [0, 1)."""

    coords: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        for c in self.coords:
            if not 0 <= c < 1:
                raise ValueError(f"coordinate out of [0, 1): {c}")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def as_floats(self) -> tuple[float, ...]:
        return tuple(float(c) for c in self.coords)


def halton_point(n: int, bases: Sequence[int]) -> RationalPoint:
    """Point whose i-th coordinate is the base bases[i] radical inverse of n."""
    bs = tuple(int(p) for p in bases)
    _check_pairwise_coprime(bs)
    return RationalPoint(tuple(radical_inverse(n, p) for p in bs))


def halton_stream(bases: Sequence[int], start: int = 0,
                  count: int | None = None) -> Iterator[RationalPoint]:
    """Yield Halton points for indices start, start+1, ... (count of them if given)."""
    bs = tuple(int(p) for p in bases)
    _check_pairwise_coprime(bs)
    n = start
    produced = 0
    while count is None or produced < count:
        yield RationalPoint(tuple(radical_inverse(n, p) for p in bs))
        n += 1
        produced += 1


@dataclass(frozen=True)
class PointSet:
    """An ordered, materialized list of rational points with its provenance."""

    points: tuple[RationalPoint, ...]
    bases: tuple[int, ...]
    start: int
    count: int
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if len(self.points) != self.count:
            raise ValueError(
                f"point list length {len(self.points)} != count {self.count}"
            )

    @property
    def dim(self) -> int:
        return self.points[0].dim if self.points else len(self.bases)

    def float_rows(self) -> list[tuple[float, ...]]:
        return [pt.as_floats() for pt in self.points]


def point_set(kind: str, bases: Sequence[int] | int, start: int = 0,
              count: int = 1,
              points: Sequence[RationalPoint] | None = None,
              cap: int = EAGER_CAP) -> PointSet:
    """Materialize a point set of the given kind.

    kind "halton": points H(start), ..., H(start+count-1) over the given bases.
    kind "van_der_corput": the one-dimensional case (single base).
    kind "hammersley": start must be 0; index/count is appended as a last
    coordinate to each of the first `count` Halton points.
    kind "explicit": wraps caller-provided points.
    """
    if isinstance(bases, int):
        bases = (bases,)
    bs = tuple(int(p) for p in bases)
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if start < 0:
        raise ValueError(f"start must be >= 0, got {start}")
    if count > cap:
        raise ValueError(
            f"count {count} exceeds the eager cap {cap}; use halton_stream"
        )
    if kind == "explicit":
        if points is None:
            raise ValueError("explicit kind requires points")
        pts = tuple(
            p if isinstance(p, RationalPoint)
            else RationalPoint(tuple(Fraction(c) for c in p))
            for p in points
        )
        return PointSet(pts, bs, start, len(pts), kind)
    _check_pairwise_coprime(bs)
    if kind == "van_der_corput":
        if len(bs) != 1:
            raise ValueError("van_der_corput takes exactly one base")
        pts = tuple(RationalPoint((radical_inverse(start + k, bs[0]),))
                    for k in range(count))
        return PointSet(pts, bs, start, count, kind)
    if kind == "halton":
        pts = tuple(halton_point(start + k, bs) for k in range(count))
        return PointSet(pts, bs, start, count, kind)
    if kind == "hammersley":
        if start != 0:
            raise ValueError("hammersley requires start = 0")
        pts = tuple(
            RationalPoint(halton_point(k, bs).coords + (Fraction(k, count),))
            for k in range(count)
        )
        return PointSet(pts, bs, start, count, kind)
    raise ValueError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# serialization

def save_csv(ps: PointSet, path: str) -> None:
    """Write one point per row as exact num/den strings, with a metadata line."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# kind={ps.kind} bases={','.join(map(str, ps.bases))} "
                 f"start={ps.start} count={ps.count}\n")
        dim = ps.dim
        fh.write(",".join(f"x{i + 1}" for i in range(dim)) + "\n")
        for pt in ps.points:
            fh.write(",".join(f"{c.numerator}/{c.denominator}"
                              for c in pt.coords) + "\n")


def load_csv(path: str) -> PointSet:
    """Inverse of save_csv; reproduces the PointSet exactly."""
    with open(path, "r", encoding="utf-8") as fh:
        meta_line = fh.readline().strip()
        if not meta_line.startswith("# "):
            raise ValueError(f"{path}: missing metadata line")
        meta = dict(item.split("=", 1) for item in meta_line[2:].split())
        fh.readline()  # column header
        pts = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            coords = tuple(Fraction(int(num), int(den))
                           for num, den in (c.split("/") for c in line.split(",")))
            pts.append(RationalPoint(coords))
    bases = tuple(int(b) for b in meta["bases"].split(","))
    return PointSet(tuple(pts), bases, int(meta["start"]), int(meta["count"]),
                    meta["kind"])


def save_float64(ps: PointSet, path: str) -> None:
    """Write coordinates as little-endian float64, row-major, no header."""
    with open(path, "wb") as fh:
        for pt in ps.points:
            fh.write(struct.pack(f"<{pt.dim}d", *pt.as_floats()))

"""Local, L2, and star discrepancy, plus the digit-cell decomposition.

The L2 pair-sum identity used throughout:

    integral of D(x)^2 over the unit cube
        = sum_{k,l} prod_i (1 - max(x_{k,i}, x_{l,i}))
          - 2N * sum_k prod_i (1 - x_{k,i}^2)/2
          + N^2 * 3^(-s)

Exact mode evaluates it in integer arithmetic over a common per-axis
denominator when one is affordable, otherwise in rational arithmetic.  Float
mode evaluates it with numpy in fixed-order blocks, accumulating partial sums
in extended precision, so results are run-to-run identical.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from .radical import BasisPair, PointSet, fraction_digits, halton_point
from .residue import ResidueData, TruncIndex, crt_inverses

EXACT_DEFAULT_MAX = 1 << 12

# Largest per-axis denominator product for the integer pair-sum kernel; above
# it, int64 block sums could not hold even a handful of terms.
_INT_KERNEL_MAX_DEN_PRODUCT = 1 << 44


@dataclass(frozen=True)
class DiscrepancyValue:
    """An exact rational or floating discrepancy result, tagged by mode."""

    value: Fraction | float
    mode: str  # "exact" | "float"

    def as_float(self) -> float:
        return float(self.value)

    def to_json_dict(self) -> dict:
        if self.mode == "exact":
            v = Fraction(self.value)
            return {"mode": "exact", "value_num": v.numerator,
                    "value_den": v.denominator}
        return {"mode": "float", "value_f64": float(self.value)}


def _as_fractions(x: Sequence) -> tuple[Fraction, ...]:
    return tuple(Fraction(c) for c in x)


def local_discrepancy(x: Sequence, pointset: PointSet,
                      mode: str = "exact") -> DiscrepancyValue:
    """Point count in the box [0,x1) x ... x [0,xs) minus the expected N*x1*...*xs.

    Box sides are half-open on the right.  Corner coordinates may be 0 (empty
    box) or 1 (that axis counts every point, since all coordinates are < 1).
    """
    xs = _as_fractions(x)
    if len(xs) != pointset.dim:
        raise ValueError(f"corner has {len(xs)} coordinates for a "
                         f"{pointset.dim}-dimensional set")
    for c in xs:
        if not 0 <= c <= 1:
            raise ValueError(f"corner coordinate out of [0, 1]: {c}")
    count = 0
    for pt in pointset.points:
        if all(c < xi for c, xi in zip(pt.coords, xs)):
            count += 1
    vol = Fraction(1)
    for xi in xs:
        vol *= xi
    exact = count - pointset.count * vol
    if mode == "exact":
        return DiscrepancyValue(exact, "exact")
    if mode == "float":
        return DiscrepancyValue(float(exact), "float")
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# L2 discrepancy (pair-sum identity)

def _int_columns(pointset: PointSet) -> tuple[list[int], list[list[int]]] | None:
    """Scale each axis to a common integer denominator if affordable."""
    s = pointset.dim
    dens = [1] * s
    for pt in pointset.points:
        for i, c in enumerate(pt.coords):
            dens[i] = lcm(dens[i], c.denominator)
    prod = 1
    for d in dens:
        prod *= d
    if prod > _INT_KERNEL_MAX_DEN_PRODUCT:
        return None
    cols = [[int(pt.coords[i] * dens[i]) for pt in pointset.points]
            for i in range(s)]
    return dens, cols


def _pair_sum_int(cols: list[list[int]], dens: list[int]) -> int:
    """Exact sum over all ordered pairs of prod_i (D_i - max(a_ki, a_li))."""
    comp = [np.array([d - a for a in col], dtype=np.int64)
            for col, d in zip(cols, dens)]
    n = len(cols[0])
    max_term = 1
    for d in dens:
        max_term *= d
    pair_budget = (1 << 62) // max(max_term, 1)
    row_block = min(n, 256)
    col_block = min(n, max(1, pair_budget // row_block), 8192)
    total = 0
    for r0 in range(0, n, row_block):
        r1 = min(n, r0 + row_block)
        for c0 in range(0, n, col_block):
            c1 = min(n, c0 + col_block)
            block = np.minimum(comp[0][r0:r1, None], comp[0][None, c0:c1])
            for comp_i in comp[1:]:
                block = block * np.minimum(comp_i[r0:r1, None],
                                           comp_i[None, c0:c1])
            total += int(block.sum(dtype=np.int64))
    return total


def _pair_sum_float(cols_f: list[np.ndarray]) -> np.longdouble:
    """Blocked float pair sum of prod_i (1 - max(x_ki, x_li)), fixed order.

    Up to 2^12 points the products themselves are carried in extended
    precision so the float route stays within 1e-10 of the exact route on
    the full overlap range; beyond that the products are float64 and only
    the block accumulator is extended.
    """
    n = len(cols_f[0])
    dtype = np.longdouble if n <= EXACT_DEFAULT_MAX else np.float64
    comp = [(1.0 - col).astype(dtype) for col in cols_f]
    row_block, col_block = 256, 4096
    acc = np.longdouble(0.0)
    for r0 in range(0, n, row_block):
        r1 = min(n, r0 + row_block)
        for c0 in range(0, n, col_block):
            c1 = min(n, c0 + col_block)
            block = np.minimum(comp[0][r0:r1, None], comp[0][None, c0:c1])
            for comp_i in comp[1:]:
                block = block * np.minimum(comp_i[r0:r1, None],
                                           comp_i[None, c0:c1])
            acc += block.sum(dtype=np.longdouble)
    return acc


def _l2_exact(pointset: PointSet) -> Fraction:
    n = pointset.count
    s = pointset.dim
    scaled = _int_columns(pointset) if s <= 2 else None
    if scaled is not None:
        dens, cols = scaled
        t1 = _pair_sum_int(cols, dens)
        den_prod = 1
        for d in dens:
            den_prod *= d
        t2 = 0
        for k in range(n):
            term = 1
            for i, d in enumerate(dens):
                a = cols[i][k]
                term *= d * d - a * a
            t2 += term
        return (Fraction(t1, den_prod)
                - Fraction(n * t2, 2 ** (s - 1) * den_prod ** 2)
                + Fraction(n * n, 3 ** s))
    if n > 2048:
        raise ValueError(
            "exact mode on this set needs a quadratic rational pair sum; "
            "use mode='float' above 2048 points"
        )
    pts = [pt.coords for pt in pointset.points]
    t1 = Fraction(0)
    for k in range(n):
        a = pts[k]
        term = Fraction(1)
        for i in range(s):
            term *= 1 - a[i]
        t1 += term  # diagonal
        for l in range(k + 1, n):
            b = pts[l]
            term = Fraction(1)
            for i in range(s):
                term *= 1 - max(a[i], b[i])
            t1 += 2 * term
    t2 = Fraction(0)
    for k in range(n):
        term = Fraction(1)
        for i in range(s):
            term *= 1 - pts[k][i] ** 2
        t2 += term
    return t1 - Fraction(n, 2 ** (s - 1)) * t2 + Fraction(n * n, 3 ** s)


def _l2_float(pointset: PointSet) -> float:
    n = pointset.count
    s = pointset.dim
    cols = [np.array([float(pt.coords[i]) for pt in pointset.points])
            for i in range(s)]
    t1 = _pair_sum_float(cols)
    m = np.ones(n, dtype=np.longdouble)
    for col in cols:
        m = m * (1.0 - col.astype(np.longdouble) ** 2)
    t2 = m.sum(dtype=np.longdouble)
    mid = np.longdouble(n) * t2 / np.longdouble(2 ** (s - 1))
    tail = np.longdouble(n) * np.longdouble(n) / np.longdouble(3 ** s)
    return float(t1 - mid + tail)


def l2_discrepancy_squared(pointset: PointSet,
                           mode: str | None = None) -> DiscrepancyValue:
    """Squared L2 norm of the local discrepancy via the pair-sum identity.

    mode defaults to exact for counts up to 2^12 and float above.
    """
    if pointset.count < 1:
        raise ValueError("point set must be nonempty")
    if mode is None:
        mode = "exact" if pointset.count <= EXACT_DEFAULT_MAX else "float"
    if mode == "exact":
        return DiscrepancyValue(_l2_exact(pointset), "exact")
    if mode == "float":
        return DiscrepancyValue(_l2_float(pointset), "float")
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# star discrepancy, s <= 2

def _star_1d(coords: list[Fraction], n: int) -> Fraction:
    vals_plus = sorted(set([Fraction(0)] + coords))
    best = Fraction(0)
    srt = sorted(coords)
    for v in vals_plus:
        cnt = bisect.bisect_right(srt, v)
        best = max(best, cnt - n * v)
    vals_minus = sorted(set(c for c in coords if c > 0) | {Fraction(1)})
    for v in vals_minus:
        cnt = bisect.bisect_left(srt, v)
        best = max(best, n * v - cnt)
    return best


def star_discrepancy(pointset: PointSet) -> DiscrepancyValue:
    """Exact supremum of |local discrepancy| over corners in (0,1]^s, s <= 2.

    The supremum over each grid rectangle of the piecewise profile is attained
    either at its closed upper corner or as a limit at its open lower corner,
    so both corner families are enumerated symbolically; no epsilon nudges.
    """
    n = pointset.count
    s = pointset.dim
    if s not in (1, 2):
        raise ValueError(f"star discrepancy implemented for s in {{1,2}}, got {s}")
    if s == 1:
        coords = [pt.coords[0] for pt in pointset.points]
        return DiscrepancyValue(_star_1d(coords, n), "exact")

    pts = sorted((pt.coords[0], pt.coords[1]) for pt in pointset.points)
    xs_plus = sorted(set([Fraction(0)] + [p[0] for p in pts]))
    ys_plus = sorted(set([Fraction(0)] + [p[1] for p in pts]))
    best = Fraction(0)

    # sup of +D: approached from above the lower-left corner of each cell;
    # the count there includes points with coordinates <= the corner.
    idx = 0
    ys_seen: list[Fraction] = []
    for v in xs_plus:
        while idx < n and pts[idx][0] <= v:
            bisect.insort(ys_seen, pts[idx][1])
            idx += 1
        for w in ys_plus:
            cnt = bisect.bisect_right(ys_seen, w)
            val = cnt - n * v * w
            if val > best:
                best = val

    # sup of -D: attained at the closed upper corner; strict counts there.
    xs_minus = sorted(set(p[0] for p in pts if p[0] > 0) | {Fraction(1)})
    ys_minus = sorted(set(p[1] for p in pts if p[1] > 0) | {Fraction(1)})
    idx = 0
    ys_seen = []
    for v in xs_minus:
        while idx < n and pts[idx][0] < v:
            bisect.insort(ys_seen, pts[idx][1])
            idx += 1
        for w in ys_minus:
            cnt = bisect.bisect_left(ys_seen, w)
            val = n * v * w - cnt
            if val > best:
                best = val
    return DiscrepancyValue(best, "exact")


# ---------------------------------------------------------------------------
# truncation and the digit-cell decomposition

def truncate_digits(x: Sequence, r: TruncIndex,
                    bases: BasisPair | Sequence[int]) -> tuple[Fraction, ...]:
    """Keep the first r_i base-p_i digits of each coordinate.

    A coordinate equal to 1 is returned unchanged: truncation acts on [0, 1)
    expansions and full-box queries bypass it.  Idempotent.
    """
    bp = BasisPair.of(bases)
    out = []
    for xi, p, ri in zip(_as_fractions(x), bp.as_tuple(), r):
        if not 0 <= xi <= 1:
            raise ValueError(f"coordinate out of [0, 1]: {xi}")
        if ri < 0:
            raise ValueError(f"depth must be nonnegative, got {ri}")
        scale = p ** ri
        out.append(Fraction((xi.numerator * scale) // xi.denominator, scale))
    return tuple(out)


def _halton_pointset(bases: BasisPair, start: int, count: int) -> PointSet:
    pts = tuple(halton_point(start + k, bases.as_tuple())
                for k in range(count))
    return PointSet(pts, bases.as_tuple(), start, count, "halton")


def truncated_discrepancy(x: Sequence, q_start: int, n_count: int,
                          bases: BasisPair | Sequence[int]) -> Fraction:
    """Local discrepancy at the corner truncated to depth floor(log2 N) + 1.

    The depth is base-2 regardless of the bases in play.  Exact.
    """
    bp = BasisPair.of(bases)
    if n_count < 1:
        raise ValueError(f"count must be >= 1, got {n_count}")
    depth = n_count.bit_length()
    xt = truncate_digits(x, (depth, depth), bp)
    return Fraction(local_discrepancy(xt, _halton_pointset(bp, q_start, n_count)).value)


def count_in_class(residue: int, q_start: int, n_count: int, modulus: int) -> int:
    """How many k in [q_start, q_start + n_count) satisfy k = residue mod modulus."""
    return ((q_start + n_count - 1 - residue) // modulus
            - (q_start - 1 - residue) // modulus)


def decomposition_term(x: Sequence, r: TruncIndex, q_start: int, n_count: int,
                       bases: BasisPair | Sequence[int]) -> Fraction:
    """One depth-(r1, r2) layer of the truncated-discrepancy decomposition.

    The layer sums, over the digit cells below the corner's last kept digits,
    the count of indexes in the cell's residue class minus the expected
    n_count / P.  Exact; zero when either last digit is 0 (empty layer).
    Coordinates must lie in [0, 1).
    """
    bp = BasisPair.of(bases)
    r1, r2 = r
    if r1 < 1 or r2 < 1:
        raise ValueError(f"layer depths must be >= 1, got {r}")
    p1, p2 = bp.as_tuple()
    x1, x2 = _as_fractions(x)
    d1 = fraction_digits(x1, p1, r1)
    d2 = fraction_digits(x2, p2, r2)
    c1, c2 = d1[-1], d2[-1]
    if c1 == 0 or c2 == 0:
        return Fraction(0)
    rd = crt_inverses(bp, r)
    q1, q2 = p1 ** r1, p2 ** r2
    w1 = rd.M1 * (rd.P // q1)
    w2 = rd.M2 * (rd.P // q2)
    pre1 = _digit_value_msbf(d1[: r1 - 1], p1)
    pre2 = _digit_value_msbf(d2[: r2 - 1], p2)
    total = 0
    for b1 in range(c1):
        part1 = w1 * (pre1 + b1 * p1 ** (r1 - 1))
        for b2 in range(c2):
            cls = (part1 + w2 * (pre2 + b2 * p2 ** (r2 - 1))) % rd.P
            total += count_in_class(cls, q_start, n_count, rd.P)
    return total - Fraction(c1 * c2 * n_count, rd.P)


def _digit_value_msbf(digs: Sequence[int], p: int) -> int:
    v = 0
    for d in reversed(digs):
        v = v * p + d
    return v


def decomposition_layers(x: Sequence, q_start: int, n_count: int,
                         bases: BasisPair | Sequence[int]
                         ) -> dict[TruncIndex, Fraction]:
    """All layers (r1, r2) in [1, n]^2 for n = floor(log2 N) + 1, as exact values."""
    bp = BasisPair.of(bases)
    depth = n_count.bit_length()
    out: dict[TruncIndex, Fraction] = {}
    for r1 in range(1, depth + 1):
        for r2 in range(1, depth + 1):
            out[(r1, r2)] = decomposition_term(x, (r1, r2), q_start, n_count, bp)
    return out

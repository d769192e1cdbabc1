"""Exponential-sum route to the decomposition terms and its tiny-scale audits.

Each decomposition layer equals a finite Fourier sum over the nonzero signed
residues m mod P: a window coefficient (normalized geometric sum over the
index range), a per-axis digit-cell factor, and a corner phase.  On top of
that sit the digit-split of a frequency into signed windows, the partition of
depth pairs by spread, the exact second-moment block integral with its
harmonic majorant, and the windowed/unconstrained resonance sums.

All phases are reduced to exact rationals mod 1 before a single trigonometric
evaluation per term, so precision is independent of the modulus size.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from .radical import BasisPair, fraction_digits
from .residue import (
    TruncIndex,
    corner_residue,
    crt_inverses,
    signed_rep,
    signed_residues,
)
from .discrepancy import count_in_class

TINY_SCALE_CAP = 4

DepthPair = tuple[TruncIndex, TruncIndex]


def _e(t: Fraction) -> complex:
    """exp(2*pi*i*t) for an exact rational t, reduced mod 1 first."""
    t -= math.floor(t)
    arg = 2.0 * math.pi * float(t)
    return complex(math.cos(arg), math.sin(arg))


def _e_minus_1(t: Fraction) -> complex:
    """exp(2*pi*i*t) - 1 without cancellation: 2i*sin(pi*t)*exp(i*pi*t)."""
    t -= math.floor(t)
    half = math.pi * float(t)
    s = math.sin(half)
    return 2.0 * s * complex(-math.sin(half), math.cos(half))


@dataclass(frozen=True)
class FourierTerm:
    """One frequency's contribution pieces, for diagnostic dumps."""

    m: int
    phi: complex
    psi: complex
    phase: Fraction  # corner phase argument, an exact rational mod 1


def window_fourier_coefficient(r: TruncIndex, q_start: int, n_count: int,
                               m: int, bases: BasisPair | Sequence[int]
                               ) -> complex:
    """(1/P) * sum over k in [q_start, q_start + n_count) of e(m*k/P).

    Evaluated by the closed-form geometric sum with exact phase reduction.
    The magnitude never exceeds 1/max(1, |m|) for m in the signed window.
    """
    rd = crt_inverses(BasisPair.of(bases), r)
    window = signed_residues(rd.P)
    if m == 0 or m not in window:
        raise ValueError(f"m must be a nonzero signed residue mod {rd.P}, got {m}")
    if n_count < 1:
        raise ValueError(f"count must be >= 1, got {n_count}")
    return _phi(rd.P, q_start, n_count, m)


def _phi(P: int, q_start: int, n_count: int, m: int) -> complex:
    m_n = (m * n_count) % P
    if m_n == 0:
        return 0j
    lead = _e(Fraction((m * q_start) % P, P))
    num = _e_minus_1(Fraction(m_n, P))
    den = _e_minus_1(Fraction(m % P, P))
    return lead * num / (P * den)


def _axis_cell_table(p: int, last_digit: int) -> list[complex]:
    """Digit-cell factor per class c of (m * M) mod p, for one axis.

    Entry c holds sum over b < last_digit of e((-c * (b - last_digit)) / p).
    """
    table = []
    for c in range(p):
        acc = 0j
        for b in range(last_digit):
            acc += _e(Fraction((-c * (b - last_digit)) % p, p))
        table.append(acc)
    return table


def cell_fourier_factor(r: TruncIndex, m: int, x: Sequence,
                        bases: BasisPair | Sequence[int]) -> complex:
    """Product over axes of the digit-cell factor at the corner's last digits.

    Magnitude is at most p1*p2; it vanishes when either last digit is 0.
    """
    bp = BasisPair.of(bases)
    rd = crt_inverses(bp, r)
    window = signed_residues(rd.P)
    if m not in window:
        raise ValueError(f"m must be a signed residue mod {rd.P}, got {m}")
    r1, r2 = r
    x1, x2 = Fraction(x[0]), Fraction(x[1])
    d1 = fraction_digits(x1, bp.p1, r1)[-1] if r1 else 0
    d2 = fraction_digits(x2, bp.p2, r2)[-1] if r2 else 0
    f1 = _axis_cell_table(bp.p1, d1)[(m * rd.M1) % bp.p1]
    f2 = _axis_cell_table(bp.p2, d2)[(m * rd.M2) % bp.p2]
    return f1 * f2


def decomposition_term_fourier(x: Sequence, r: TruncIndex, q_start: int,
                               n_count: int,
                               bases: BasisPair | Sequence[int]) -> complex:
    """Fourier evaluation of one decomposition layer.

    Agrees with the direct counting route up to floating round-off; the
    imaginary part is round-off only.
    """
    bp = BasisPair.of(bases)
    r1, r2 = r
    if r1 < 1 or r2 < 1:
        raise ValueError(f"layer depths must be >= 1, got {r}")
    rd = crt_inverses(bp, r)
    x1, x2 = Fraction(x[0]), Fraction(x[1])
    d1 = fraction_digits(x1, bp.p1, r1)[-1]
    d2 = fraction_digits(x2, bp.p2, r2)[-1]
    if d1 == 0 or d2 == 0:
        return 0j
    t1 = _axis_cell_table(bp.p1, d1)
    t2 = _axis_cell_table(bp.p2, d2)
    corner = corner_residue((x1, x2), r, rd)
    total = 0j
    for m in signed_residues(rd.P).nonzero():
        phi = _phi(rd.P, q_start, n_count, m)
        if phi == 0j:
            continue
        psi = t1[(m * rd.M1) % bp.p1] * t2[(m * rd.M2) % bp.p2]
        total += phi * psi * _e(Fraction((-m * corner) % rd.P, rd.P))
    return total


def term_table(x: Sequence, r: TruncIndex, q_start: int, n_count: int,
               bases: BasisPair | Sequence[int]) -> list[FourierTerm]:
    """Per-frequency diagnostic rows for small moduli."""
    bp = BasisPair.of(bases)
    rd = crt_inverses(bp, r)
    r1, r2 = r
    x1, x2 = Fraction(x[0]), Fraction(x[1])
    d1 = fraction_digits(x1, bp.p1, r1)[-1] if r1 else 0
    d2 = fraction_digits(x2, bp.p2, r2)[-1] if r2 else 0
    t1 = _axis_cell_table(bp.p1, d1)
    t2 = _axis_cell_table(bp.p2, d2)
    corner = corner_residue((x1, x2), r, rd)
    rows = []
    for m in signed_residues(rd.P).nonzero():
        phase = Fraction((-m * corner) % rd.P, rd.P)
        rows.append(FourierTerm(
            m=m,
            phi=_phi(rd.P, q_start, n_count, m),
            psi=t1[(m * rd.M1) % bp.p1] * t2[(m * rd.M2) % bp.p2],
            phase=phase,
        ))
    return rows


def write_term_table_csv(path: str, x: Sequence, r: TruncIndex, q_start: int,
                         n_count: int, bases: BasisPair | Sequence[int]) -> None:
    rows = term_table(x, r, q_start, n_count, bases)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["m", "phi_re", "phi_im", "psi_re", "psi_im",
                    "phase_num", "phase_den"])
        for t in rows:
            w.writerow([t.m, repr(t.phi.real), repr(t.phi.imag),
                        repr(t.psi.real), repr(t.psi.imag),
                        t.phase.numerator, t.phase.denominator])


# ---------------------------------------------------------------------------
# digit split of a frequency pair into signed windows

@dataclass(frozen=True)
class DigitSplit:
    """Unique signed-window decomposition of the folded frequencies.

    hat_m[i] is the folded frequency of axis i in [0, p_i^t_i) where t_i is
    the larger of the two depths on that axis.  mm[i][j] is the coefficient
    attached to pair member j (0-based); windows[i][j] is the modulus of its
    signed window.  order[i] = (k1, k2) gives the members holding the smaller
    and larger depth (ties resolved to (0, 1)).
    """

    hat_m: tuple[int, int]
    mm: tuple[tuple[int, int], tuple[int, int]]
    windows: tuple[tuple[int, int], tuple[int, int]]
    order: tuple[tuple[int, int], tuple[int, int]]


def _split_axis(mhat: int, p: int, rplus: int, rminus: int) -> tuple[int, int]:
    """Split mhat mod p^rplus as low*p^(rplus-rminus) + high.

    high lies in the signed window mod p^(rplus-rminus) and low in the signed
    window mod p^rminus; the pair is unique.  Returns (low, high): low is the
    coefficient of the smaller-depth member, high of the larger-depth member.
    """
    sgap = p ** (rplus - rminus)
    high = signed_rep(mhat % sgap, sgap)
    low = signed_rep(((mhat - high) // sgap) % p ** rminus, p ** rminus)
    return low, high


def digit_split(m1: int, m2: int, r_pair: DepthPair,
                bases: BasisPair | Sequence[int]) -> DigitSplit:
    """Fold (m1, m2) per axis and split each fold into its signed windows."""
    bp = BasisPair.of(bases)
    ps = bp.as_tuple()
    rds = (crt_inverses(bp, r_pair[0]), crt_inverses(bp, r_pair[1]))
    for m, rd in zip((m1, m2), rds):
        if m == 0 or m not in signed_residues(rd.P):
            raise ValueError(
                f"frequency {m} outside the nonzero signed window mod {rd.P}"
            )
    ms = (m1, m2)
    hat_list, mm_list, win_list, order_list = [], [], [], []
    for i, p in enumerate(ps):
        t = (r_pair[0][i], r_pair[1][i])
        rplus, rminus = max(t), min(t)
        k2 = 0 if t[0] > t[1] else 1
        k1 = 1 - k2
        q = p ** rplus
        inv = ((rds[0].M1, rds[1].M1) if i == 0 else (rds[0].M2, rds[1].M2))
        mhat = (-(ms[0] * inv[0] * p ** (rplus - t[0])
                  + ms[1] * inv[1] * p ** (rplus - t[1]))) % q
        low, high = _split_axis(mhat, p, rplus, rminus)
        mm = [0, 0]
        win = [0, 0]
        mm[k1], mm[k2] = low, high
        win[k1], win[k2] = p ** rminus, p ** (rplus - rminus)
        hat_list.append(mhat)
        mm_list.append(tuple(mm))
        win_list.append(tuple(win))
        order_list.append((k1, k2))
    return DigitSplit(
        hat_m=tuple(hat_list),
        mm=tuple(mm_list),
        windows=tuple(win_list),
        order=tuple(order_list),
    )


def combined_frequency(m1: int, m2: int, mm_pair: tuple[int, int],
                       r_pair: DepthPair, bases: BasisPair | Sequence[int],
                       axis: int) -> int:
    """Fold mm and (m1, m2) on one axis: sum of (mm_j + m_j*M_j)*p^(t - r_j).

    When mm comes from digit_split of (m1, m2), the result is divisible by
    p^t where t is the axis's larger depth.
    """
    bp = BasisPair.of(bases)
    p = bp.as_tuple()[axis]
    rds = (crt_inverses(bp, r_pair[0]), crt_inverses(bp, r_pair[1]))
    t = (r_pair[0][axis], r_pair[1][axis])
    rplus = max(t)
    total = 0
    for j in range(2):
        inv = (rds[j].M1, rds[j].M2)[axis]
        total += (mm_pair[j] + (m1, m2)[j] * inv) * p ** (rplus - t[j])
    return total


# ---------------------------------------------------------------------------
# depth-pair partitions

@dataclass(frozen=True)
class PartitionLabel:
    """Which of the four spread cells a pair of depth pairs falls into."""

    lam: tuple[int, int]
    v_threshold: int
    vv_threshold: int


def default_thresholds(bases: BasisPair | Sequence[int], n: int) -> tuple[int, int]:
    """Asymptotic threshold formulas; far beyond any desk-scale n."""
    bp = BasisPair.of(bases)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    lg = math.log2(n)
    return (bp.p1 ** 4 * bp.p2 ** 4 * math.floor(lg ** 4), math.floor(lg ** 3))


def partition_label(br_1: TruncIndex, br_2: TruncIndex, v_threshold: int,
                    vv_threshold: int) -> PartitionLabel | None:
    """Label a pair of depth pairs, or None when either lies in the cut box."""
    for br in (br_1, br_2):
        if max(br) <= v_threshold:
            return None
    lam = []
    for i in range(2):
        spread = max(br_1[i], br_2[i]) - min(br_1[i], br_2[i])
        lam.append(1 if spread > vv_threshold else 0)
    return PartitionLabel(lam=(lam[0], lam[1]), v_threshold=v_threshold,
                          vv_threshold=vv_threshold)


def _partition_pairs(lam: tuple[int, int], n: int, v_threshold: int,
                     vv_threshold: int) -> list[DepthPair]:
    depths = [(r1, r2) for r1 in range(1, n + 1) for r2 in range(1, n + 1)]
    out = []
    for br_1, br_2 in product(depths, depths):
        label = partition_label(br_1, br_2, v_threshold, vv_threshold)
        if label is not None and label.lam == tuple(lam):
            out.append((br_1, br_2))
    return out


# ---------------------------------------------------------------------------
# tiny-scale audits: exact block integral vs harmonic majorant

def _layer_table(br: TruncIndex, q_start: int, n_count: int,
                 bp: BasisPair) -> dict[tuple[int, int], Fraction]:
    """Exact layer value per digit prefix, indexed by per-axis digit codes."""
    p1, p2 = bp.as_tuple()
    r1, r2 = br
    rd = crt_inverses(bp, br)
    q1, q2 = p1 ** r1, p2 ** r2
    w1 = rd.M1 * (rd.P // q1)
    w2 = rd.M2 * (rd.P // q2)
    base = Fraction(n_count, rd.P)
    table: dict[tuple[int, int], Fraction] = {}
    for code1 in range(q1):
        c1, pre1 = divmod(code1, p1 ** (r1 - 1))
        for code2 in range(q2):
            c2 = code2 // p2 ** (r2 - 1)
            pre2 = code2 % p2 ** (r2 - 1)
            if c1 == 0 or c2 == 0:
                table[(code1, code2)] = Fraction(0)
                continue
            total = 0
            for b1 in range(c1):
                part1 = w1 * (pre1 + b1 * p1 ** (r1 - 1))
                for b2 in range(c2):
                    cls = (part1 + w2 * (pre2 + b2 * p2 ** (r2 - 1))) % rd.P
                    total += count_in_class(cls, q_start, n_count, rd.P)
            table[(code1, code2)] = total - c1 * c2 * base
    return table


def _axis_inverse(rd, axis: int) -> int:
    return rd.M1 if axis == 0 else rd.M2


def second_moment_block(lam: tuple[int, int], n_count: int, q_start: int,
                        bases: BasisPair | Sequence[int], n: int,
                        v_threshold: int, vv_threshold: int,
                        cap: int = TINY_SCALE_CAP) -> tuple[float, float]:
    """Exact |block integral| of layer products against its harmonic majorant.

    The left side integrates, over the unit square, the sum of layer products
    across all depth pairs in the lam cell; the integral is a finite average
    over joint digit grids, evaluated exactly.  The right side is the
    quadruple harmonic sum: for each frequency pair, 1/(|m1|*|m2|) times the
    product of reciprocal split-coefficient magnitudes.  Returns (lhs, rhs).
    """
    bp = BasisPair.of(bases)
    if n > cap:
        raise ValueError(f"n = {n} exceeds the tiny-scale cap {cap}")
    if n_count < 1:
        raise ValueError(f"count must be >= 1, got {n_count}")
    pairs = _partition_pairs(tuple(lam), n, v_threshold, vv_threshold)
    if not pairs:
        return (0.0, 0.0)
    p1, p2 = bp.as_tuple()

    tables: dict[TruncIndex, dict[tuple[int, int], Fraction]] = {}
    for br_1, br_2 in pairs:
        for br in (br_1, br_2):
            if br not in tables:
                tables[br] = _layer_table(br, q_start, n_count, bp)

    lhs = Fraction(0)
    rhs = 0.0
    for br_1, br_2 in pairs:
        t1 = max(br_1[0], br_2[0])
        t2 = max(br_1[1], br_2[1])
        g1, g2 = p1 ** t1, p2 ** t2
        tb1, tb2 = tables[br_1], tables[br_2]
        q11, q21 = p1 ** br_1[0], p2 ** br_1[1]
        q12, q22 = p1 ** br_2[0], p2 ** br_2[1]
        acc = Fraction(0)
        for code1 in range(g1):
            for code2 in range(g2):
                acc += (tb1[(code1 % q11, code2 % q21)]
                        * tb2[(code1 % q12, code2 % q22)])
        lhs += Fraction(acc, g1 * g2)
        rhs += _majorant_pair(bp, (br_1, br_2))
    return (abs(float(lhs)), rhs)


def _axis_split_weights(p: int, rplus: int, rminus: int) -> np.ndarray:
    """Reciprocal split magnitudes per folded frequency class on one axis."""
    q = p ** rplus
    out = np.empty(q)
    for mhat in range(q):
        low, high = _split_axis(mhat, p, rplus, rminus)
        out[mhat] = 1.0 / (max(1, abs(low)) * max(1, abs(high)))
    return out


def _pair_geometry(bp: BasisPair, pair: DepthPair):
    """Per-axis fold moduli and fold multipliers for a depth pair."""
    br_1, br_2 = pair
    rds = (crt_inverses(bp, br_1), crt_inverses(bp, br_2))
    ps = bp.as_tuple()
    qs, gaps, mults = [], [], []
    for i, p in enumerate(ps):
        t = (br_1[i], br_2[i])
        rplus, rminus = max(t), min(t)
        q = p ** rplus
        k = [(_axis_inverse(rds[j], i) * p ** (rplus - t[j])) % q
             for j in range(2)]
        qs.append(q)
        gaps.append((rplus, rminus))
        mults.append(k)
    return rds, qs, gaps, mults


def _class_sums(values: np.ndarray, weights: np.ndarray, modulus: int
                ) -> np.ndarray:
    out = np.zeros(modulus)
    np.add.at(out, values % modulus, weights)
    return out


def _fold_matrix(mults, qs, pplus: int):
    """Folded-frequency class per (class of m1, class of m2) as index arrays."""
    c = np.arange(pplus, dtype=np.int64)
    mats = []
    for i in range(2):
        alpha = (-(mults[i][0] * c)) % qs[i]
        beta = (-(mults[i][1] * c)) % qs[i]
        mats.append((alpha[:, None] + beta[None, :]) % qs[i])
    return mats


def _majorant_pair(bp: BasisPair, pair: DepthPair) -> float:
    rds, qs, gaps, mults = _pair_geometry(bp, pair)
    pplus = qs[0] * qs[1]
    ws = []
    for rd in rds:
        window = signed_residues(rd.P)
        ms = np.array([m for m in window.nonzero()], dtype=np.int64)
        ws.append(_class_sums(ms, 1.0 / np.abs(ms), pplus))
    split_w = [
        _axis_split_weights(bp.as_tuple()[i], gaps[i][0], gaps[i][1])
        for i in range(2)
    ]
    mats = _fold_matrix(mults, qs, pplus)
    grid = (ws[0][:, None] * ws[1][None, :]
            * split_w[0][mats[0]] * split_w[1][mats[1]])
    return float(grid.sum())


def resonance_sums(lam: tuple[int, int], bases: BasisPair | Sequence[int],
                   n: int, v_threshold: int, vv_threshold: int,
                   m_cap: int | None = None,
                   cap: int = TINY_SCALE_CAP) -> tuple[float, float]:
    """Windowed and unconstrained harmonic sums over resonant frequencies.

    Both sums run over frequency pairs (m1, m2) with 0 < |m_j| <= m_cap and
    per-axis coefficient pairs whose fold is divisible by the axis modulus
    p_i^t_i, weighting each solution by the reciprocal magnitudes.  The
    windowed sum restricts coefficients to their signed windows (at most one
    solution per axis); the unconstrained sum lets them range over the whole
    +-m_cap box.  Windowed <= unconstrained always.  Returns the pair.
    """
    bp = BasisPair.of(bases)
    if n > cap:
        raise ValueError(f"n = {n} exceeds the tiny-scale cap {cap}")
    if m_cap is None:
        m_cap = min(n ** 10, 10 ** 4)
    if m_cap < 1:
        raise ValueError(f"m_cap must be >= 1, got {m_cap}")
    pairs = _partition_pairs(tuple(lam), n, v_threshold, vv_threshold)
    if not pairs:
        return (0.0, 0.0)
    ps = bp.as_tuple()
    star_total = 0.0
    sharp_total = 0.0
    box = np.arange(-m_cap, m_cap + 1, dtype=np.int64)
    box_w = 1.0 / np.maximum(1, np.abs(box))
    nz = box[box != 0]
    nz_w = 1.0 / np.abs(nz)
    for pair in pairs:
        rds, qs, gaps, mults = _pair_geometry(bp, pair)
        pplus = qs[0] * qs[1]
        w_m = [_class_sums(nz, nz_w, pplus) for _ in range(2)]
        s_star, s_sharp = [], []
        for i in range(2):
            p, q = ps[i], qs[i]
            rplus, rminus = gaps[i]
            sgap = p ** (rplus - rminus)
            g = _class_sums(box, box_w, q)
            sharp_i = np.empty(q)
            for target in range(q):
                acc = 0.0
                for d in range(q):
                    acc += g[d] * g[(target - d * sgap) % q]
                sharp_i[target] = acc
            star_i = np.empty(q)
            for target in range(q):
                low, high = _split_axis(target, p, rplus, rminus)
                if abs(low) > m_cap or abs(high) > m_cap:
                    star_i[target] = 0.0
                else:
                    star_i[target] = 1.0 / (max(1, abs(low)) * max(1, abs(high)))
            s_star.append(star_i)
            s_sharp.append(sharp_i)
        mats = _fold_matrix(mults, qs, pplus)
        outer = w_m[0][:, None] * w_m[1][None, :]
        star_total += float((outer * s_star[0][mats[0]]
                             * s_star[1][mats[1]]).sum())
        sharp_total += float((outer * s_sharp[0][mats[0]]
                              * s_sharp[1][mats[1]]).sum())
    return (star_total, sharp_total)

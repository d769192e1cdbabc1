"""Digit expansions, radical inverses, and point-set generation."""

from __future__ import annotations

import struct
from fractions import Fraction

import pytest

from haltonlab import (
    BasisPair,
    RationalPoint,
    digits,
    first_primes,
    fraction_digits,
    halton_point,
    halton_stream,
    is_prime,
    load_csv,
    point_set,
    radical_inverse,
    save_csv,
    save_float64,
)

F = Fraction


def test_digits_zero_is_empty():
    dv = digits(0, 2)
    assert dv.digits == ()
    assert dv.value == 0


def test_digits_hand_expansions():
    assert digits(5, 2).digits == (1, 0, 1)
    assert digits(5, 3).digits == (2, 1)


def test_digits_round_trip_and_range():
    for p in (2, 3, 5, 10):
        for n in range(200):
            dv = digits(n, p)
            assert dv.value == n
            assert all(0 <= d < p for d in dv.digits)
            if n > 0:
                assert dv.digits[-1] != 0


def test_digits_rejects_bad_inputs():
    with pytest.raises(ValueError):
        digits(-1, 2)
    with pytest.raises(ValueError):
        digits(3, 1)


def test_radical_inverse_frozen_values():
    assert radical_inverse(0, 2) == 0
    assert radical_inverse(5, 2) == F(5, 8)
    assert radical_inverse(5, 3) == F(7, 9)


def test_radical_inverse_matches_digit_reversal():
    # Cross-route: rebuild the value from the digit vector directly.
    for p in (2, 3, 7):
        for n in range(300):
            dv = digits(n, p)
            expect = sum(F(d, p ** (j + 1)) for j, d in enumerate(dv.digits))
            got = radical_inverse(n, p)
            assert got == expect
            assert 0 <= got < 1
            assert p ** len(dv.digits) % got.denominator == 0 if n else got == 0


def test_radical_inverse_bijection_onto_grid():
    # For each level m, the first p^m inverses hit each multiple of p^-m once.
    for p, m in ((2, 10), (3, 7), (5, 5), (10, 3)):
        q = p ** m
        assert q <= 10 ** 4
        seen = {radical_inverse(k, p) for k in range(q)}
        assert seen == {F(j, q) for j in range(q)}


def test_radical_inverse_prefix_stability():
    # Adding p^m changes nothing in the first m digits.
    for p, m in ((2, 6), (3, 4)):
        q = p ** m
        for k in range(q):
            a = fraction_digits(radical_inverse(k, p), p, m)
            b = fraction_digits(radical_inverse(k + q, p), p, m)
            assert a == b


def test_fraction_digits_definition():
    assert fraction_digits(F(5, 8), 2, 3) == (1, 0, 1)
    assert fraction_digits(F(7, 9), 3, 2) == (2, 1)
    assert fraction_digits(F(0), 2, 4) == (0, 0, 0, 0)
    with pytest.raises(ValueError):
        fraction_digits(F(1), 2, 1)


def test_halton_point_frozen_values():
    assert halton_point(0, (2, 3)).coords == (F(0), F(0))
    assert halton_point(1, (2, 3)).coords == (F(1, 2), F(1, 3))
    assert halton_point(5, (2, 3)).coords == (F(5, 8), F(7, 9))


def test_halton_point_rejects_non_coprime():
    with pytest.raises(ValueError):
        halton_point(3, (2, 4))
    with pytest.raises(ValueError):
        point_set("halton", (6, 9), 0, 2)


def test_point_set_van_der_corput_first_four():
    ps = point_set("van_der_corput", (2,), 0, 4)
    got = [pt.coords[0] for pt in ps.points]
    assert got == [F(0), F(1, 2), F(1, 4), F(3, 4)]


def test_point_set_halton_first_two():
    ps = point_set("halton", (2, 3), 0, 2)
    assert [pt.coords for pt in ps.points] == [
        (F(0), F(0)), (F(1, 2), F(1, 3))]


def test_point_set_hammersley_appends_index_fraction():
    ps = point_set("hammersley", (2,), 0, 2)
    assert [pt.coords for pt in ps.points] == [
        (F(0), F(0)), (F(1, 2), F(1, 2))]
    with pytest.raises(ValueError):
        point_set("hammersley", (2,), 1, 2)


def test_point_set_halton_offset_indexing():
    ps = point_set("halton", (2, 3), 5, 3)
    for k, pt in enumerate(ps.points):
        assert pt.coords == halton_point(5 + k, (2, 3)).coords


def test_point_set_rejects_bad_counts():
    with pytest.raises(ValueError):
        point_set("halton", (2, 3), 0, 0)
    with pytest.raises(ValueError):
        point_set("halton", (2, 3), -1, 1)
    with pytest.raises(ValueError):
        point_set("halton", (2, 3), 0, 10, cap=5)
    with pytest.raises(ValueError):
        point_set("van_der_corput", (2, 3), 0, 1)
    with pytest.raises(ValueError):
        point_set("nonesuch", (2, 3), 0, 1)


def test_point_set_explicit_wraps_raw_tuples():
    ps = point_set("explicit", (2, 3),
                   points=[(F(1, 2), F(1, 3)), (0, 0)])
    assert ps.count == 2
    assert all(isinstance(pt, RationalPoint) for pt in ps.points)
    assert ps.points[1].coords == (F(0), F(0))


def test_halton_stream_matches_point_set():
    stream = halton_stream((2, 3), start=7, count=20)
    ps = point_set("halton", (2, 3), 7, 20)
    assert [pt.coords for pt in stream] == [pt.coords for pt in ps.points]


def test_rational_point_rejects_out_of_range():
    with pytest.raises(ValueError):
        RationalPoint((F(1), F(1, 2)))
    with pytest.raises(ValueError):
        RationalPoint((F(-1, 2),))


def test_basis_pair_validation_and_primality():
    bp = BasisPair(2, 3)
    assert bp.primality == (True, True)
    assert BasisPair(4, 9).primality == (False, False)
    with pytest.raises(ValueError):
        BasisPair(2, 4)
    assert BasisPair.of((5, 7)) == BasisPair(5, 7)
    assert BasisPair.of(bp) is bp


def test_csv_round_trip(tmp_path):
    for kind, bases, start, count in (
        ("halton", (2, 3), 11, 17),
        ("van_der_corput", (5,), 0, 9),
        ("hammersley", (2, 3), 0, 8),
    ):
        ps = point_set(kind, bases, start, count)
        path = tmp_path / f"{kind}.csv"
        save_csv(ps, str(path))
        back = load_csv(str(path))
        assert back == ps
    header = (tmp_path / "halton.csv").read_text().splitlines()
    assert header[1] == "x1,x2"
    assert header[2] == "0/1,0/1" or header[2].count("/") == 2


def test_save_float64_layout(tmp_path):
    ps = point_set("halton", (2, 3), 0, 5)
    path = tmp_path / "pts.bin"
    save_float64(ps, str(path))
    raw = path.read_bytes()
    assert len(raw) == 5 * 2 * 8
    vals = struct.unpack("<10d", raw)
    flat = [float(c) for pt in ps.points for c in pt.coords]
    assert list(vals) == flat


def test_float_view_preserves_grid_membership():
    # Denominators far below 2^50: float comparisons agree with exact ones.
    pts = [pt.coords[0] for pt in point_set("van_der_corput", (3,), 0, 200).points]
    depth = 3
    width = F(1, 3 ** depth)
    for cell in range(3 ** depth):
        lo = cell * width
        for c in pts:
            exact = lo <= c < lo + width
            approx = float(lo) <= float(c) < float(lo + width)
            assert exact == approx


def test_first_primes():
    assert first_primes(1) == (2,)
    assert first_primes(5) == (2, 3, 5, 7, 11)
    with pytest.raises(ValueError):
        first_primes(0)


def test_is_prime_small_table():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29}
    for n in range(31):
        assert is_prime(n) == (n in primes)

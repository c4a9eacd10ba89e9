"""Representations, parsing, and exact argument reduction."""

import math
from fractions import Fraction

import pytest

from sinprod.angles import (
    BitStream,
    DyadicPi,
    RawReal,
    angle_from_half_turns,
    angle_to_radians,
    parse_angle,
    reduce_argument,
)
from sinprod.errors import AngleParseError, DepthExceedsPrecision


class TestDyadicPi:
    def test_canonicalizes_even_numerator(self):
        x = DyadicPi(2, 3)
        assert (x.m, x.n) == (1, 2)

    def test_folds_sign(self):
        assert DyadicPi(-3, 4) == DyadicPi(3, 4)

    def test_folds_full_turns(self):
        assert (DyadicPi(4, 1).m, DyadicPi(4, 1).n) == (0, 0)
        assert (DyadicPi(3, 0).m, DyadicPi(3, 0).n) == (1, 0)

    def test_zero_normalizes_denominator(self):
        assert (DyadicPi(0, 5).m, DyadicPi(0, 5).n) == (0, 0)

    def test_negative_denominator_exponent_rejected(self):
        with pytest.raises(ValueError):
            DyadicPi(1, -1)

    def test_half_turns_value(self):
        assert DyadicPi(3, 4).y == Fraction(3, 16)
        assert math.isclose(DyadicPi(3, 4).radians(), 3 * math.pi / 16, rel_tol=1e-15)


class TestBitStream:
    def test_rational_bits_of_one_third(self):
        x = BitStream.from_fraction(Fraction(1, 3))
        # 1/3 = 0.010101..._2
        assert [x.bit(i) for i in range(5)] == [0, 0, 1, 0, 1]
        assert x.next_flip(1) == 2
        assert x.next_flip(2) == 3
        assert x.window(1, 6) == 0b010101
        assert x.window(2, 3) == 0b101
        assert x.rational == Fraction(1, 3)

    def test_integer_part_parity(self):
        x = BitStream.from_fraction(Fraction(7, 3))  # integer part 2, even
        assert x.bit(0) == 0
        y = BitStream.from_fraction(Fraction(5, 3))  # integer part 1, odd
        assert y.bit(0) == 1

    def test_terminating_expansion_flip_guard(self):
        x = BitStream.from_fraction(Fraction(1, 4))
        assert x.next_flip(1) == 2  # 0.01000...
        assert x.next_flip(2) == 3
        with pytest.raises(RuntimeError):
            x.next_flip(3)  # all-zero tail has no flip

    def test_rule_stream_matches_rational(self):
        # the alternating rule 0.010101... is exactly 1/3
        def bit_at(i):
            return 0 if i == 0 else (1 - i % 2)

        rule = BitStream.from_rule(bit_at, lambda i: i + 1, label="alt")
        for n in (0, 1, 5, 17):
            got = reduce_argument(rule, n).dist_float()
            assert got == pytest.approx(float(Fraction(1, 3)), abs=1e-16)

    def test_repr_carries_label(self):
        assert "1/3" in repr(BitStream.from_fraction(Fraction(1, 3)))


class TestRawReal:
    def test_depth_budget(self):
        x = RawReal(0.7)
        assert x.max_reliable_depth == int(math.floor(53 - math.log2(0.7 / math.pi) - 8))
        reduce_argument(x, x.max_reliable_depth)  # at the budget: fine
        with pytest.raises(DepthExceedsPrecision) as err:
            reduce_argument(x, x.max_reliable_depth + 1)
        assert err.value.depth == x.max_reliable_depth + 1
        assert err.value.max_reliable_depth == x.max_reliable_depth

    def test_zero_angle_unlimited(self):
        assert RawReal(0.0).max_reliable_depth == 2**31

    def test_reduction_is_marked_inexact(self):
        red = reduce_argument(RawReal(0.7), 3)
        assert not red.exact
        assert 0.0 <= red.dist_float() <= 0.5


class TestReduceArgument:
    def test_quarter_pi_depth_one(self):
        red = reduce_argument(DyadicPi(1, 2), 1)
        assert red.t == 0.5
        assert red.dist == Fraction(1, 2)
        assert red.exact

    def test_pi_depth_three_hits_lattice(self):
        red = reduce_argument(DyadicPi(1, 0), 3)
        assert red.t == 0.0
        assert red.dist == 0

    def test_dyadic_walkthrough(self):
        x = DyadicPi(3, 4)
        assert reduce_argument(x, 0).dist == Fraction(3, 16)
        assert reduce_argument(x, 2).t == 0.75
        assert reduce_argument(x, 2).dist == Fraction(1, 4)
        assert reduce_argument(x, 3).dist == Fraction(1, 2)
        assert reduce_argument(x, 4).dist == 0

    def test_rational_distance_is_exact(self):
        x = BitStream.from_fraction(Fraction(1, 3))
        for n in range(40):
            assert reduce_argument(x, n).dist == Fraction(1, 3)

    def test_negative_depth_rejected(self):
        with pytest.raises(ValueError):
            reduce_argument(DyadicPi(1, 2), -1)


class TestConversion:
    def test_half_turns_dispatch(self):
        assert angle_from_half_turns(Fraction(5, 4)) == DyadicPi(5, 2)
        x = angle_from_half_turns(Fraction(1, 3))
        assert isinstance(x, BitStream) and x.rational == Fraction(1, 3)
        assert angle_from_half_turns(Fraction(0)) == DyadicPi(0, 0)
        assert angle_from_half_turns(Fraction(-1, 4)) == DyadicPi(1, 2)

    def test_to_radians(self):
        assert angle_to_radians(DyadicPi(1, 1)) == math.pi / 2
        assert angle_to_radians(RawReal(0.7)) == 0.7
        third = angle_to_radians(BitStream.from_fraction(Fraction(1, 3)))
        assert math.isclose(third, math.pi / 3, rel_tol=1e-15)


class TestParseAngle:
    @pytest.mark.parametrize(
        "spec,expected",
        [
            ("1/8pi", DyadicPi(1, 3)),
            ("3/16pi", DyadicPi(3, 4)),
            ("pi", DyadicPi(1, 0)),
            ("3pi", DyadicPi(1, 0)),
            ("2pi", DyadicPi(0, 0)),
            ("0", DyadicPi(0, 0)),
            ("PI", DyadicPi(1, 0)),
        ],
    )
    def test_dyadic_forms(self, spec, expected):
        assert parse_angle(spec) == expected

    def test_rational_forms(self):
        assert parse_angle("pi/3").rational == Fraction(1, 3)
        assert parse_angle("2/6pi").rational == Fraction(1, 3)
        assert parse_angle("pi / 5").rational == Fraction(1, 5)

    def test_decimal_becomes_raw(self):
        x = parse_angle("0.5")
        assert isinstance(x, RawReal) and x.value == 0.5
        assert isinstance(parse_angle("1e-3"), RawReal)

    @pytest.mark.parametrize("spec", ["", "foo", "1/0pi", "pi/0", "1/8xi"])
    def test_rejects_malformed(self, spec):
        with pytest.raises(AngleParseError):
            parse_angle(spec)

    def test_error_carries_position(self):
        with pytest.raises(AngleParseError) as err:
            parse_angle("1/8xi")
        assert err.value.position == 3
        assert "position 3" in str(err.value)

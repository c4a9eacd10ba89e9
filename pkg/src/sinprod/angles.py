"""Angle representations and exact dyadic argument reduction.

Everything internal works in half-turns: an angle x is carried as y = x/pi,
because sin(2^n x) = sin(pi * frac_2(2^n y)) and frac_2 of the stored y is an
integer shift -- exact for dyadic and bit-stream angles at any depth, where a
naive sin(2^n x) in radians would lose n bits to argument reduction.

Three representations:

- DyadicPi(m, n): x = m * pi / 2^n exactly, canonical (m odd unless m = 0).
- BitStream: lazy binary expansion of y. Two backings: an exact rational p/q
  (distances come from modular arithmetic, exact at any depth) and a bit rule
  (bits generated on demand; runs are skipped via their known flip positions).
- RawReal(value): machine radians with an honest depth budget
  max_reliable_depth = floor(53 - log2|y| - 8); reduction past it refuses.

reduce_argument() returns a ReducedArg carrying the reduced phase and the
exact distance from 2^n y to the nearest integer. The distance is a Fraction
whenever its denominator is printable; for the astronomically small distances
a run-structured stream can produce, it degrades to an exact (mantissa,
big-integer exponent) pair so downstream log-domain code never overflows.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

from .errors import AngleParseError, DepthExceedsPrecision

# Fraction distances keep exact denominators up to 2^_MAX_FRAC_BITS; beyond
# that reduce_argument switches to the (mantissa, exponent) form.
_MAX_FRAC_BITS = 4096
_WINDOW_BITS = 120  # significand bits carried per reduced distance; >> float53


@dataclass(frozen=True)
class DyadicPi:
    """x = m * pi / 2^n with m odd (or m = 0, n = 0)."""

    m: int
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("dyadic denominator exponent must be non-negative")
        m, n = abs(self.m), self.n  # f is even: fold sign away
        object.__setattr__(self, "m", m)
        if m == 0:
            if n != 0:
                object.__setattr__(self, "n", 0)
            return
        while m % 2 == 0 and n > 0:
            m //= 2
            n -= 1
        # n == 0: fold multiples of 2*pi, keep m in {0, 1} plus parity
        if n == 0:
            m %= 2
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)

    @property
    def y(self) -> Fraction:
        return Fraction(self.m, 2**self.n)

    def radians(self) -> float:
        return float(self.y) * math.pi


class BitStream:
    """Lazy binary expansion of y = x/pi (integer part plus fractional bits).

    bit(0) is the integer part's parity; bit(i) for i >= 1 is the i-th
    fractional bit. next_flip(i) returns the smallest j >= i with
    bit(j) != bit(i), so run-structured streams can be reduced without
    enumerating their (possibly doubly-exponential) runs.
    """

    def __init__(
        self,
        bit_at: Callable[[int], int],
        next_flip: Callable[[int], int],
        label: str = "bitstream",
        rational: Optional[Fraction] = None,
    ):
        self._bit_at = bit_at
        self._next_flip = next_flip
        self.label = label
        self.rational = rational

    @classmethod
    def from_fraction(cls, y: Fraction, label: Optional[str] = None) -> "BitStream":
        y = Fraction(abs(y))
        p, q = y.numerator, y.denominator

        def bit_at(i: int) -> int:
            # floor(p * 2^i / q) mod 2 == [p * 2^i mod 2q >= q]
            return 1 if (p * pow(2, i, 2 * q)) % (2 * q) >= q else 0

        def next_flip(i: int) -> int:
            b = bit_at(i)
            j = i + 1
            cap = i + 4 * q + 64  # expansion period divides ord_2 mod (odd part of q)
            while bit_at(j) == b:
                j += 1
                if j > cap:
                    raise RuntimeError(f"constant bit expansion for {p}/{q}")
            return j

        return cls(bit_at, next_flip, label or f"{p}/{q}", rational=y)

    @classmethod
    def from_rule(
        cls, bit_at: Callable[[int], int], next_flip: Callable[[int], int], label: str
    ) -> "BitStream":
        return cls(bit_at, next_flip, label)

    def bit(self, i: int) -> int:
        return self._bit_at(i)

    def next_flip(self, i: int) -> int:
        return self._next_flip(i)

    def window(self, lo: int, count: int) -> int:
        """Bits lo .. lo+count-1 as an integer, bit lo the most significant.

        Filled run-by-run so doubly-exponential runs cost O(1) each.
        """
        out = 0
        pos = lo
        end = lo + count
        while pos < end:
            b = self.bit(pos)
            nf = self.next_flip(pos)
            take = min(nf, end) - pos
            out <<= take
            if b:
                out |= (1 << take) - 1
            pos += take
        return out

    def __repr__(self):
        return f"BitStream({self.label})"


class RawReal:
    """An angle in machine radians with a precision-depth budget."""

    def __init__(self, value: float):
        self.value = float(value)
        y = abs(self.value) / math.pi
        self.y = y
        if y == 0.0:
            self.max_reliable_depth = 2**31
        else:
            self.max_reliable_depth = int(math.floor(53.0 - math.log2(y) - 8.0))

    def __repr__(self):
        return f"RawReal({self.value!r}, max_reliable_depth={self.max_reliable_depth})"


AngleRep = Union[DyadicPi, BitStream, RawReal]


@dataclass(frozen=True)
class ReducedArg:
    """The reduced phase of 2^n x: sin(2^n x) = sin(pi * t), t in [0, 2).

    dist is the exact distance from 2^n y to the nearest integer, in [0, 1/2],
    so |sin(2^n x)| = sin(pi * dist). When the distance's exact denominator
    would be astronomically large, dist is None and the pair
    (dist_mant, dist_exp2) carries d = dist_mant * 2^dist_exp2 with an exact
    big-integer exponent and >= 120 significand bits.
    """

    t: float
    exact: bool
    dist: Optional[Fraction] = None
    dist_mant: float = 0.0
    dist_exp2: Optional[int] = None

    def dist_float(self) -> float:
        """Best float64 of the distance (may underflow to 0 for extreme runs)."""
        if self.dist is not None:
            return float(self.dist)
        if self.dist_exp2 is None:
            return 0.0
        if self.dist_exp2 < -1100:
            return 0.0
        return math.ldexp(self.dist_mant, self.dist_exp2)


def _reduced_from_mant_exp(mant: float, exp2: int, lead_bit: int, unit_bit: int) -> ReducedArg:
    # normalize mant into [1, 2)
    if mant >= 2.0:
        mant /= 2.0
        exp2 += 1
    d_approx = math.ldexp(mant, exp2) if exp2 > -1100 else 0.0
    frac = d_approx if lead_bit == 0 else 1.0 - d_approx
    return ReducedArg(t=float(unit_bit) + frac, exact=True, dist=None, dist_mant=mant, dist_exp2=exp2)


def _reduce_dyadic(x: DyadicPi, n: int) -> ReducedArg:
    if x.m == 0:
        return ReducedArg(t=0.0, exact=True, dist=Fraction(0))
    p = x.n - n
    if p <= 0:
        # 2^n x is an integer multiple of pi: phase 0 or 1, distance 0
        t = float((x.m << (-p)) % 2)
        return ReducedArg(t=t, exact=True, dist=Fraction(0))
    r2 = x.m % (1 << (p + 1))
    r = r2 % (1 << p)
    d_int = min(r, (1 << p) - r)
    return ReducedArg(
        t=float(Fraction(r2, 1 << p)), exact=True, dist=Fraction(d_int, 1 << p)
    )


def _reduce_rational(y: Fraction, n: int) -> ReducedArg:
    p, q = y.numerator, y.denominator
    r2 = (p * pow(2, n, 2 * q)) % (2 * q)
    r = r2 % q
    d = Fraction(min(r, q - r), q)
    return ReducedArg(t=float(Fraction(r2, q)), exact=True, dist=d)


def _reduce_stream(x: BitStream, n: int) -> ReducedArg:
    unit_bit = x.bit(n)
    lead = x.bit(n + 1)
    flip = x.next_flip(n + 1)  # first position after n+1 whose bit differs
    run = flip - (n + 1)
    if lead == 0:
        # frac = 0.00..0 1 bits...  -> d = frac = window * 2^-(flip - n - 1 + W)
        v = x.window(flip, _WINDOW_BITS)
        exp_bits = (flip - n - 1) + _WINDOW_BITS
        if exp_bits <= _MAX_FRAC_BITS:
            d = Fraction(v, 1 << exp_bits)
            t = float(unit_bit) + float(d)
            return ReducedArg(t=t, exact=True, dist=d)
        mant = v / float(1 << (_WINDOW_BITS - 1))  # in [1, 2)
        return _reduced_from_mant_exp(mant, -(flip - n), lead, unit_bit)
    # frac = 0.11..1 0 bits... -> d = 1 - frac = 2^-run * (1 - h), h = 0.(bits from flip)
    w = _WINDOW_BITS + 1
    h_int = x.window(flip, w)  # top bit is bit(flip) = 0, so h_int < 2^(w-1)
    c = (1 << w) - h_int  # in (2^(w-1), 2^w]
    exp_bits = run + w
    if exp_bits <= _MAX_FRAC_BITS:
        d = Fraction(c, 1 << exp_bits)
        t = float(unit_bit) + 1.0 - float(d)
        return ReducedArg(t=t, exact=True, dist=d)
    mant = c / float(1 << (w - 1))  # in (1, 2]
    return _reduced_from_mant_exp(mant, -(run + 1), lead, unit_bit)


def _reduce_raw(x: RawReal, n: int) -> ReducedArg:
    if n > x.max_reliable_depth:
        raise DepthExceedsPrecision(n, x.max_reliable_depth)
    s = math.ldexp(x.y, n)  # exact: exponent shift only
    fl = math.floor(s)
    frac = s - fl  # exact: difference of nearby representables
    d = frac if frac <= 0.5 else 1.0 - frac  # 1-frac exact by Sterbenz for frac >= 1/2
    return ReducedArg(
        t=float(int(fl) & 1) + frac, exact=False, dist=Fraction(d)
    )


def reduce_argument(x: AngleRep, n: int) -> ReducedArg:
    """Reduce 2^n x modulo 2*pi into a phase t in [0, 2) half-turns.

    Exact (integer shift-and-mask) for DyadicPi and BitStream angles; raises
    DepthExceedsPrecision for RawReal beyond its budget.
    """
    if n < 0:
        raise ValueError("depth index must be non-negative")
    if isinstance(x, DyadicPi):
        return _reduce_dyadic(x, n)
    if isinstance(x, BitStream):
        if x.rational is not None:
            return _reduce_rational(x.rational, n)
        return _reduce_stream(x, n)
    if isinstance(x, RawReal):
        return _reduce_raw(x, n)
    raise TypeError(f"not an angle representation: {x!r}")


def angle_to_radians(x: AngleRep) -> float:
    """Best-effort float64 of the angle, for display and plotting only."""
    if isinstance(x, DyadicPi):
        return x.radians()
    if isinstance(x, BitStream):
        if x.rational is not None:
            return float(x.rational) * math.pi
        v = x.window(1, 64)
        return (x.bit(0) + v / float(1 << 64)) * math.pi
    if isinstance(x, RawReal):
        return x.value
    raise TypeError(f"not an angle representation: {x!r}")


def angle_from_half_turns(y: Fraction) -> AngleRep:
    """Exact rational y = x/pi to the tightest representation."""
    y = Fraction(abs(y))
    q = y.denominator
    if q & (q - 1) == 0:  # power of two: exact dyadic
        return DyadicPi(y.numerator, q.bit_length() - 1)
    return BitStream.from_fraction(y)


_DYADIC_RE = re.compile(r"^(\d+)\s*/\s*(\d+)\s*pi$")
_PI_OVER_RE = re.compile(r"^pi\s*/\s*(\d+)$")
_PI_TIMES_RE = re.compile(r"^(\d+)\s*pi$")
_DECIMAL_RE = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def parse_angle(spec: str) -> AngleRep:
    """Parse an angle spec: 'm/2^n pi' (e.g. 1/8pi), 'pi/q', 'pi', or decimal radians.

    Rational multiples of pi become exact representations (DyadicPi for
    power-of-two denominators, rational bit streams otherwise); decimals
    become RawReal with a precision budget. The 'constructed' keyword is the
    caller's to resolve (it names a specific special-values angle).
    """
    s = spec.strip().lower()
    if not s:
        raise AngleParseError(spec, 0, "empty spec")
    if s == "pi":
        return DyadicPi(1, 0)
    if s in ("0", "0.0"):
        return DyadicPi(0, 0)
    m = _DYADIC_RE.match(s)
    if m:
        num, den = int(m.group(1)), int(m.group(2))
        if den == 0:
            raise AngleParseError(spec, s.index("/") + 1, "zero denominator")
        return angle_from_half_turns(Fraction(num, den))
    m = _PI_OVER_RE.match(s)
    if m:
        den = int(m.group(1))
        if den == 0:
            raise AngleParseError(spec, len(s) - 1, "zero denominator")
        return angle_from_half_turns(Fraction(1, den))
    m = _PI_TIMES_RE.match(s)
    if m:
        return angle_from_half_turns(Fraction(int(m.group(1))))
    if _DECIMAL_RE.match(s):
        return RawReal(abs(float(s)))
    # pinpoint the first character that cannot start a valid form
    pos = 0
    for i, ch in enumerate(s):
        if not (ch.isdigit() or ch in "+-./epi "):
            pos = i
            break
    raise AngleParseError(spec, pos, "expected 'm/2^n pi', 'pi/q', 'pi', or decimal radians")

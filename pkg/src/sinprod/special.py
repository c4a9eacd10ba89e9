"""Closed-form values and the constructed irrational zero.

The product vanishes on the dyadic lattice, but it also vanishes at the
irrational angle x = pi * y with

    y = sum_{k>=0} (-1)^k 2^(-d_k),   d_0 = 2, d_{k+1} = d_k^2.

The alternating pairs produce runs of ones in y's binary expansion exactly
on the intervals (d_j, d_{j+1}] for even j. At each depth n = d_j the tail
of the expansion sits 2^(n - n^2)-close to the lattice, so the depth-n
factor is pinned below pi^(2/(2n+1)^2) * 2^(-2(n^2-n)/(2n+1)^2), a sequence
that tends to sqrt(2)/2 < 1. Infinitely many such factors force f(x) = 0
even though x is not a lattice point.

Bits are generated from the run rule on demand; the run table is a chain of
integer squarings, so depth 65536 costs the same handful of big-int ops as
depth 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import kernels
from .angles import AngleRep, BitStream, DyadicPi
from .product import ProductEnclosure, factor_value, partial_product


def special_depth(j: int) -> int:
    """The j-th near-lattice depth 2^(2^j): 2, 4, 16, 256, 65536, ..."""
    if j < 0:
        raise ValueError("run index must be non-negative")
    return 2 ** (2**j)


def _locate_run(i: int, max_run_index: Optional[int]) -> tuple[int, int]:
    """(end, index) of the bit run containing position i: end is the smallest
    special depth >= i, index the number of special depths strictly below i."""
    end, idx = 2, 0
    while end < i:
        end *= end
        idx += 1
        if max_run_index is not None and idx > max_run_index:
            raise RuntimeError(
                f"bit position {i} lies beyond run index cap {max_run_index}"
            )
    return end, idx


def constructed_zero_angle(max_run_index: Optional[int] = None) -> BitStream:
    """The lazily generated zero angle, in half-turns, as a bit stream.

    bit i is 1 iff some even j has 2^(2^j) < i <= 2^(2^(j+1)). With a
    max_run_index cap, classifying a position past run max_run_index raises
    instead of silently squaring onward.
    """

    def bit_at(i: int) -> int:
        if i <= 2:  # integer part 0; leading fractional bits 1..2 are 0
            return 0
        _, idx = _locate_run(i, max_run_index)
        return idx & 1

    def next_flip(i: int) -> int:
        end, _ = _locate_run(max(i, 1), max_run_index)
        return end + 1

    return BitStream.from_rule(bit_at, next_flip, label="constructed")


def constructed_zero_truncation(terms: int) -> Fraction:
    """Exact value of the alternating sum truncated after `terms` terms.

    Agrees with the infinite expansion on all bit positions <= 2^(2^terms);
    used to cross-check the run rule against direct summation.
    """
    if terms < 1:
        raise ValueError("need at least one term")
    return sum(
        (Fraction((-1) ** k, 2 ** special_depth(k)) for k in range(terms)),
        Fraction(0),
    )


def closed_form_pi_thirds() -> float:
    """f(pi/3) = (3/4)^(pi^2/8): every factor has distance 1/3 to the lattice,
    so the product telescopes to sin(pi/3)^2 raised to the full exponent sum."""
    return float(np.exp(np.float64(math.pi**2 / 8.0) * np.log(np.float64(0.75))))


@dataclass(frozen=True)
class FactorBound:
    """Upper bound pi^(2/(2n+1)^2) * 2^(-2(n^2-n)/(2n+1)^2) on the depth-n
    factor at the constructed zero; tends to sqrt(2)/2, below 9/10 for n > 3."""

    n: int
    bound: float
    below_nine_tenths: bool


def factor_bound_at(n: int) -> FactorBound:
    if n < 1:
        raise ValueError("depth must be >= 1")
    den = (2 * n + 1) ** 2
    # exact rational exponents; the ratios stay bounded so float conversion
    # is safe even when n itself is a big integer
    log_bound = float(Fraction(2, den)) * kernels.LNPI - float(
        Fraction(2 * n * (n - 1), den)
    ) * kernels.LN2
    bound = float(np.exp(np.float64(log_bound)))
    return FactorBound(n=n, bound=bound, below_nine_tenths=bound < 0.9)


def constructed_zero_partial(j_max: int, n_depth: int) -> ProductEnclosure:
    """f_{n_depth} at the constructed zero via lazily generated bits.

    j_max caps the run table; reducing depth n touches bit positions up to
    roughly (the first special depth >= n) squared, so j_max two past the
    run containing n_depth always suffices (j_max = 6 covers n_depth = 10^3).
    """
    if n_depth < 4:
        raise ValueError("depth must be >= 4 (the second special depth)")
    return partial_product(constructed_zero_angle(max_run_index=j_max), n_depth)


@dataclass(frozen=True)
class ChainStep:
    """One special depth's factor at the constructed zero, with its bound and
    the running product of special-depth factors so far."""

    j: int
    depth: int
    factor: float
    bound: float
    running: float
    within_bound: bool


def special_depth_chain(j_max: int) -> list[ChainStep]:
    """Factors at depths 2^(2^j), j = 0..j_max, each checked against its bound.

    The running product alone already forces the limit to zero; the full
    partial products fall much faster since every skipped factor is < 1.
    """
    x = constructed_zero_angle()
    steps: list[ChainStep] = []
    running = 1.0
    for j in range(j_max + 1):
        n = special_depth(j)
        fac = factor_value(x, n)
        bnd = factor_bound_at(n).bound
        running *= fac
        steps.append(
            ChainStep(
                j=j, depth=n, factor=fac, bound=bnd, running=running,
                within_bound=fac <= bnd,
            )
        )
    return steps


def verify_constructed_zero(threshold: float, j_max: int) -> Optional[int]:
    """Smallest special depth where the running special-factor product drops
    below threshold, or None if not reached by run j_max."""
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must lie in (0, 1]")
    for step in special_depth_chain(j_max):
        if step.running < threshold:
            return step.depth
    return None


def pi_thirds_angle() -> AngleRep:
    """x = pi/3 as an exact rational bit stream (distance 1/3 at every depth)."""
    return BitStream.from_fraction(Fraction(1, 3), label="pi/3")


def lattice_angle(m: int, n: int) -> DyadicPi:
    """x = m pi / 2^n, a lattice zero of the product for depths >= n."""
    return DyadicPi(m, n)

"""Lattice clearance: quantified distance from the dyadic zeros of f.

A point x is *clear at level k* (up to depth n_max) when
|x - m*pi/2^n| > 2^-(n + sqrt(n) + k) for every lattice point with n <= n_max,
equivalently dist(2^n * x/pi, Z) > 2^-(sqrt(n) + k) / pi. On clear points
every factor satisfies |sin(2^n x)| > (23/24) * 2^-(sqrt(n) + k), which is
what certifies positive lower bounds on the infinite product and bounds the
measure of the complement by 37/(6*2^k).

Rounding is conservative throughout: thresholds and radii are nudged up one
ulp, so floating-point noise can only shrink the claimed clearance set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from .angles import AngleRep, BitStream, DyadicPi, RawReal, reduce_argument


def excluded_length_bound(k: int) -> float:
    """Total length of the depth-summed exclusion intervals: 37/(6*2^k)."""
    if k < 1:
        raise ValueError("clearance level must be >= 1")
    return 37.0 / (6.0 * 2.0**k)


def pointwise_lower_bound(k: int) -> float:
    """Floor for f on the level-k clearance set: 1/(3.15 * 5.531^k)."""
    if k < 1:
        raise ValueError("clearance level must be >= 1")
    return 1.0 / (3.15 * 5.531**k)


def distance_threshold(n: int, k: int) -> float:
    """Half-turn distance a clear point must beat at depth n: 2^-(sqrt(n)+k)/pi.

    Rounded up so a borderline point is never falsely certified.
    """
    return math.nextafter(2.0 ** -(math.sqrt(n) + k) / math.pi, math.inf)


def interval_radius(n: int, k: int) -> float:
    """Radian radius of the excluded interval at depth n: 2^-(n+sqrt(n)+k), rounded up."""
    return math.nextafter(2.0 ** -(n + math.sqrt(n) + k), math.inf)


@dataclass(frozen=True)
class ExcludedInterval:
    """The neighborhood of one lattice point a clear point must avoid."""

    center: DyadicPi
    radius: float
    n: int
    m: int
    k: int


@dataclass(frozen=True)
class ClearanceReport:
    """Outcome of a finite-depth clearance check (decidable only up to n_max)."""

    level: int
    depth_checked: int
    member_up_to_depth: bool
    violation: Optional[ExcludedInterval] = None


def distances(x: AngleRep, n_max: int) -> np.ndarray:
    """dist(2^n * x/pi, Z) for n = 0..n_max as float64 (array of n_max+1 values).

    Exact representations use integer arithmetic (iterated doubling for
    rationals); values are rounded once, to nearest, at the end.
    """
    out = np.empty(n_max + 1)
    if isinstance(x, BitStream) and x.rational is not None:
        p, q = x.rational.numerator, x.rational.denominator
        r = p % q
        for n in range(n_max + 1):
            out[n] = min(r, q - r) / q
            r = (2 * r) % q
        return out
    if isinstance(x, DyadicPi):
        for n in range(n_max + 1):
            p = x.n - n
            if p <= 0 or x.m == 0:
                out[n] = 0.0
            else:
                r = x.m % (1 << p)
                out[n] = min(r, (1 << p) - r) / (1 << p)
        return out
    for n in range(n_max + 1):
        out[n] = reduce_argument(x, n).dist_float()
    return out


def _nearest_lattice_m(x: AngleRep, n: int) -> int:
    """Nearest integer to 2^n * x/pi, canonically mod 2^(n+1)."""
    mod = 1 << (n + 1)
    if isinstance(x, DyadicPi):
        p = x.n - n
        if p <= 0:
            return (x.m << (-p)) % mod
        return ((x.m + (1 << (p - 1))) >> p) % mod
    if isinstance(x, BitStream) and x.rational is not None:
        p, q = x.rational.numerator, x.rational.denominator
        num = p * pow(2, n, 2 * q * mod)  # enough headroom to round then reduce
        return ((2 * num + q) // (2 * q)) % mod
    red = reduce_argument(x, n)
    t = red.t  # in [0, 2)
    return int(round(t)) % 2


def clearance_report(x: AngleRep, k: int, n_max: int = 64) -> ClearanceReport:
    """Check level-k clearance for depths 0..n_max; report the first violation."""
    if k < 1:
        raise ValueError("clearance level must be >= 1")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    d = distances(x, n_max)
    for n in range(n_max + 1):
        if d[n] <= distance_threshold(n, k):
            m = _nearest_lattice_m(x, n)
            violation = ExcludedInterval(
                center=DyadicPi(m, n), radius=interval_radius(n, k), n=n, m=m, k=k
            )
            return ClearanceReport(k, n_max, False, violation)
    return ClearanceReport(k, n_max, True, None)


def clearance_scan(
    dists: np.ndarray, k_max: int
) -> Optional[int]:
    """Smallest level k in 1..k_max whose clearance test all depths pass, or None.

    Takes the distance array (from distances()) so callers can reuse it.
    Thresholds are rounded up after scaling, like distance_threshold.
    """
    n_max = len(dists) - 1
    base = 2.0 ** -np.sqrt(np.arange(n_max + 1, dtype=np.float64)) / np.pi
    for k in range(1, k_max + 1):
        thresholds = np.nextafter(base * 2.0**-k, np.inf)
        if np.all(dists > thresholds):
            return k
    return None


def excluded_intervals(k: int, n_max: int) -> Iterator[ExcludedInterval]:
    """All excluded intervals with centers in [0, pi], depths 0..n_max.

    Depth 0 contributes the two endpoints; depth n >= 1 contributes the
    2^(n-1) odd-numerator centers (even numerators already appeared shallower).
    """
    if k < 1:
        raise ValueError("clearance level must be >= 1")
    yield ExcludedInterval(DyadicPi(0, 0), interval_radius(0, k), 0, 0, k)
    yield ExcludedInterval(DyadicPi(1, 0), interval_radius(0, k), 0, 1, k)
    for n in range(1, n_max + 1):
        r = interval_radius(n, k)
        for m in range(1, 1 << n, 2):
            yield ExcludedInterval(DyadicPi(m, n), r, n, m, k)

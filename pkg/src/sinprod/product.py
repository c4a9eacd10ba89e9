"""Partial products, log-products, and certified enclosures of the infinite product.

f(x) = prod_{n>=0} |sin(2^n x)|^(2/(2n+1)^2). Partial products f_k are
computed in the log domain (math.fsum over per-factor log terms) with an
exact-zero short-circuit, so structural zeros (a factor hitting the dyadic
lattice) are exact zeros and deep underflow still leaves a usable log value.

evaluate_limit certifies a positive lower bound on the full product: if the
point clears the lattice at some level k (clearance module), every discarded
factor beyond depth N is at least [(23/24) * 2^-(sqrt(n)+k)]^(2/(2n+1)^2),
and the resulting tail sum is evaluated with conservative remainder bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .angles import AngleRep, BitStream, DyadicPi, RawReal, reduce_argument
from .clearance import clearance_scan, distances
from .errors import DepthExceedsPrecision
from .kernels import factor_exponent, factor_exponent_float

_LN_23_24 = float(np.log(np.float64(23.0 / 24.0)))
# multiplicative safety margin on certified lower bounds: covers the float
# rounding of f_N and of the tail sum (both ~1e-13 relative at worst)
_CERT_SLACK = 1.0 - 1e-10


@dataclass(frozen=True)
class ProductEnclosure:
    """A truncation of the product plus whatever can be certified about the limit.

    0 <= lower <= f(x) <= value <= 1; log_value is -inf iff value == 0;
    exact_zero means a factor vanished structurally (lattice hit), not underflow.
    """

    depth: int
    value: float
    log_value: float
    lower: float
    exact_zero: bool


def factor_value(x: AngleRep, n: int) -> float:
    """|sin(2^n x)|^(2/(2n+1)^2); exactly 0 on the lattice, exactly 1 at half-integers."""
    red = reduce_argument(x, n)
    if red.dist is not None:
        d = red.dist
        if d == 0:
            return 0.0
        if d == Fraction(1, 2):
            return 1.0
        return kernels.pow_sin_pi(float(d), factor_exponent_float(n))
    return float(np.exp(np.float64(_factor_log_extreme(red, n))))


def log_factor(x: AngleRep, n: int) -> float:
    """log of factor_value; -inf on the lattice."""
    red = reduce_argument(x, n)
    if red.dist is not None:
        d = red.dist
        if d == 0:
            return -math.inf
        return factor_exponent_float(n) * kernels.log_sin_pi(float(d))
    return _factor_log_extreme(red, n)


def _factor_log_extreme(red, n: int) -> float:
    """Log factor for a (mantissa, big exponent) distance.

    log sin(pi d) = ln pi + ln mant + exp2 * ln 2 up to a sinc correction
    below 2^-240. The product exponent * exp2 is taken exactly (Fraction *
    bigint) before conversion, so doubly-exponential depths cannot overflow.
    """
    e_frac = factor_exponent(n)
    main = float(e_frac * red.dist_exp2) * kernels.LN2
    e = float(e_frac) if n < 2**500 else 0.0
    return main + e * (kernels.LNPI + math.log(red.dist_mant))


def _log_terms(x: AngleRep, k: int) -> tuple[np.ndarray, bool]:
    """Per-factor log terms for depths 0..k and whether a structural zero occurred.

    Terms after the first structural zero are not evaluated (short-circuit).
    """
    if k < 0:
        raise ValueError("depth must be non-negative")
    if isinstance(x, BitStream) and x.rational is not None:
        p, q = x.rational.numerator, x.rational.denominator
        r = p % q
        dists = np.empty(k + 1)
        for n in range(k + 1):
            if r == 0:
                return dists[:n], True
            dists[n] = min(r, q - r) / q
            r = (2 * r) % q
        ns = np.arange(k + 1, dtype=np.float64)
        e = 2.0 / (2.0 * ns + 1.0) ** 2
        return e * kernels.log_sin_pi_array(dists), False
    if isinstance(x, DyadicPi):
        if x.m == 0:
            return np.empty(0), True
        terms = np.empty(k + 1)
        for n in range(k + 1):
            if n >= x.n:
                return terms[:n], True
            pbits = x.n - n
            r = x.m % (1 << pbits)
            d = min(r, (1 << pbits) - r) / (1 << pbits)
            terms[n] = factor_exponent_float(n) * kernels.log_sin_pi(d)
        return terms, False
    terms = np.empty(k + 1)
    for n in range(k + 1):
        red = reduce_argument(x, n)  # DepthExceedsPrecision propagates for RawReal
        if red.dist is not None:
            if red.dist == 0:
                return terms[:n], True
            terms[n] = factor_exponent_float(n) * kernels.log_sin_pi(float(red.dist))
        else:
            terms[n] = _factor_log_extreme(red, n)
    return terms, False


def log_partial_product(x: AngleRep, k: int) -> float:
    """sum_{n=0}^{k} (2/(2n+1)^2) log|sin(2^n x)|; -inf iff some factor is zero."""
    terms, hit_zero = _log_terms(x, k)
    if hit_zero:
        return -math.inf
    return math.fsum(terms)


def partial_product(x: AngleRep, k: int) -> ProductEnclosure:
    """f_k(x) as an enclosure with no certificate attempted (lower = 0)."""
    terms, hit_zero = _log_terms(x, k)
    if hit_zero:
        return ProductEnclosure(k, 0.0, -math.inf, 0.0, True)
    log_value = math.fsum(terms)
    value = float(np.exp(np.float64(log_value)))
    return ProductEnclosure(k, value, log_value, 0.0, False)


def _certified_tail(n_from: int, level: int) -> float:
    """Conservative lower bound on sum_{n > n_from} e_n (ln(23/24) - (sqrt(n)+k) ln 2).

    Sums to M = max(2*n_from, 10^5) numerically, then subtracts closed-form
    majorants of the discarded remainder: sum_{n>M} 1/(2n+1)^2 < 1/(2(2M+1))
    and sum_{n>M} sqrt(n)/(2n+1)^2 < 1/(2 sqrt(M)).
    """
    m_stop = max(2 * n_from, 100_000)
    ns = np.arange(n_from + 1, m_stop + 1, dtype=np.float64)
    e = 2.0 / (2.0 * ns + 1.0) ** 2
    tail = float(np.sum(e * (_LN_23_24 - (np.sqrt(ns) + level) * kernels.LN2)))
    r1 = 1.0 / (2.0 * (2.0 * m_stop + 1.0))
    r2 = 1.0 / (2.0 * math.sqrt(m_stop))
    tail -= 2.0 * (abs(_LN_23_24) * r1 + kernels.LN2 * (level * r1 + r2))
    return tail


def evaluate_limit(
    x: AngleRep, n_depth: int, want_certificate: bool = False, k_max: int = 12
) -> ProductEnclosure:
    """f_{n_depth}(x) plus, on request, a certified lower bound on f(x).

    The certificate exists when the point clears the lattice at some level
    k <= k_max for every depth up to n_depth; the smallest such level gives
    the sharpest tail bound. Without a certificate, lower = 0.
    """
    base = partial_product(x, n_depth)
    if base.exact_zero or not want_certificate or base.value == 0.0:
        return base
    dists = distances(x, n_depth)
    level = clearance_scan(dists, k_max)
    if level is None:
        return base
    tail = _certified_tail(n_depth, level)
    lower = base.value * float(np.exp(np.float64(tail))) * _CERT_SLACK
    return ProductEnclosure(base.depth, base.value, base.log_value, lower, False)

"""Measure experiments: small-value sets, superlevel sets, and the layer cake.

Three numerical claims are exercised here:

1. The set where f falls below 1/(3.15 * 5.531^k) has measure at most
   37/(6 * 2^k). Tested by Monte Carlo: f <= f_N makes {f_N <= bound} a
   subset of {f <= bound}, so the sampled proportion must respect the same
   ceiling claimed for the larger set.
2. The set where f_k exceeds e^(-pi^2/2) has measure above pi/2 for every k.
   Tested on a midpoint grid with an explicit resolution slack.
3. The integral of f_k equals the integral over levels y of the superlevel
   measure mu{f_k > y} (layer cake), cross-checked against direct quadrature.

Sampling uses a counter-based generator and exact integer bit windows, so
hit counts are reproducible integers: no float reduction order enters the
estimates and worker partitioning cannot change them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import kernels
from .clearance import (  # noqa: F401  (re-exported set machinery)
    ClearanceReport,
    ExcludedInterval,
    clearance_report,
    excluded_intervals,
    excluded_length_bound,
    pointwise_lower_bound,
)
from .errors import InvalidSampleCount

# one-sided 95% normal quantile for the binomial CI half-width
Z_ONE_SIDED_95 = 1.6448536269514722

# superlevel threshold e^(-pi^2/2) of the positive-integral argument
SUPERLEVEL_THRESHOLD = float(np.exp(np.float64(-(math.pi**2) / 2.0)))


@dataclass(frozen=True)
class MeasureEstimate:
    """A one-sided measure test on [0, pi].

    For the small-value test, passes means estimate - ci_halfwidth does not
    exceed theoretical_bound. For the superlevel test the direction flips
    (the claim is a lower bound): passes means estimate + ci_halfwidth
    (there: grid-resolution slack) still exceeds theoretical_bound.
    """

    estimate: float
    samples: int
    ci_halfwidth: float
    theoretical_bound: float
    passes: bool


def _log_threshold(k: int) -> float:
    # log of pointwise_lower_bound(k), formed in log space
    return -math.log(3.15) - k * math.log(5.531)


def empirical_small_value_measure(
    k: int, n_depth: int = 64, samples: int = 1_000_000, seed: int = 0
) -> MeasureEstimate:
    """Monte Carlo measure of {x in [0, pi] : f_{n_depth}(x) <= 1/(3.15*5.531^k)}.

    Points are drawn as exact dyadic rationals with enough bits that every
    depth up to n_depth sees a full 64-bit window of the fractional part;
    the distance to the nearest integer is then exact to 2^-64 relative,
    far below anything the threshold comparison can notice.
    """
    if k < 2:
        raise ValueError("k must be >= 2 (the bound is vacuous below that)")
    if n_depth < 64:
        raise ValueError("evaluation depth must be >= 64")
    if samples < 1:
        raise InvalidSampleCount(samples)
    n_limbs = (n_depth + 64) // 64 + 1
    rng = np.random.Generator(np.random.Philox(key=seed))
    limbs = rng.integers(0, 2**64, size=(n_limbs, samples), dtype=np.uint64)

    log_f = np.zeros(samples)
    with np.errstate(divide="ignore"):
        for n in range(n_depth + 1):
            q, r = divmod(n, 64)
            if r == 0:
                win = limbs[q]
            else:
                win = (limbs[q] << np.uint64(r)) | (limbs[q + 1] >> np.uint64(64 - r))
            # distance of the 64-bit fractional window to the nearest integer
            d_int = np.minimum(win, ~win + np.uint64(1))  # min(w, 2^64 - w)
            d = d_int.astype(np.float64) * 2.0**-64
            log_f += kernels.factor_exponent_float(n) * kernels.log_sin_pi_array(d)

    hits = int(np.count_nonzero(log_f <= _log_threshold(k)))
    p_hat = hits / samples
    estimate = math.pi * p_hat
    ci = math.pi * Z_ONE_SIDED_95 * math.sqrt(p_hat * (1.0 - p_hat) / samples)
    bound = excluded_length_bound(k)
    return MeasureEstimate(
        estimate=estimate,
        samples=samples,
        ci_halfwidth=ci,
        theoretical_bound=bound,
        passes=estimate - ci <= bound,
    )


def _midpoint_log_partials(k: int, grid_points: int) -> np.ndarray:
    """log f_k at the midpoints x_j = pi*(2j+1)/(2G), j = 0..G-1.

    Phases are reduced exactly: 2^n * (2j+1)/(2G) mod 1 is integer doubling
    modulo 2G, so no argument-reduction error enters even at depth 32.
    """
    g = grid_points
    r = np.arange(1, 2 * g, 2, dtype=np.uint64)  # (2j+1) mod 2G, exact
    mod = np.uint64(2 * g)
    log_f = np.zeros(g)
    with np.errstate(divide="ignore"):
        for n in range(k + 1):
            d_int = np.minimum(r, mod - r)
            d = d_int.astype(np.float64) / float(2 * g)
            log_f += kernels.factor_exponent_float(n) * kernels.log_sin_pi_array(d)
            r = (r << np.uint64(1)) % mod
    return log_f


def superlevel_measure(k: int, grid_points: int) -> MeasureEstimate:
    """Grid estimate of mu{x in [0, pi] : f_k(x) > e^(-pi^2/2)}.

    Midpoint classification is wrong by at most one cell per boundary of the
    superlevel set, so pi*(transitions+1)/G is an honest resolution slack.
    The test direction is a lower bound: pass iff estimate + slack > pi/2.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if grid_points < 2:
        raise ValueError("need at least 2 grid points")
    if grid_points <= 2**k:
        raise ValueError("grid must be finer than 2^k to resolve f_k")
    log_thr = math.log(SUPERLEVEL_THRESHOLD)
    inside = _midpoint_log_partials(k, grid_points) > log_thr
    transitions = int(np.count_nonzero(inside[1:] != inside[:-1]))
    estimate = math.pi * int(np.count_nonzero(inside)) / grid_points
    slack = math.pi * (transitions + 1) / grid_points
    return MeasureEstimate(
        estimate=estimate,
        samples=grid_points,
        ci_halfwidth=slack,
        theoretical_bound=math.pi / 2.0,
        passes=estimate + slack > math.pi / 2.0,
    )


def exact_log_integral(k: int) -> float:
    """int_0^pi log f_k = -2 pi ln2 * sum_{n=0}^k 1/(2n+1)^2, from the classical
    identity int_0^pi ln|sin u| du = -pi ln 2 (each substituted level keeps it)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    s = math.fsum(1.0 / (2 * n + 1.0) ** 2 for n in range(k + 1))
    return -2.0 * math.pi * math.log(2.0) * s


def layer_cake_integral(
    k: int,
    x_points: int,
    y_points: int,
    fn: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> float:
    """int_0^pi f_k dx as int_0^1 mu{x : f_k(x) > y} dy.

    The superlevel measure is estimated on a midpoint x-grid (exact dyadic
    reduction) and integrated over y by trapezoid; values lie in [0, 1] so
    the y-grid spans exactly [0, 1]. Passing fn replaces f_k by an arbitrary
    vectorized function of x (radians) -- the test hook for known integrals.
    Choose x_points > 2^k, else a power-of-two grid can sit on the lattice.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if x_points < 2 or y_points < 2:
        raise ValueError("need at least 2 points in each grid")
    if fn is None:
        values = np.exp(_midpoint_log_partials(k, x_points))
    else:
        xs = math.pi * np.arange(1, 2 * x_points, 2, dtype=np.float64) / (2.0 * x_points)
        values = np.asarray(fn(xs), dtype=np.float64)
    values = np.sort(values)
    ys = np.linspace(0.0, 1.0, y_points)
    above = x_points - np.searchsorted(values, ys, side="right")
    level_measure = math.pi * above / x_points
    return float(np.trapezoid(level_measure, ys))

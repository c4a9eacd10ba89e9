"""Upper-semicontinuity witnesses and their property checks.

f is upper semicontinuous everywhere: for each x and eps > 0 there is a
delta > 0 with f(t) < f(x) + eps whenever |t - x| < delta. The witness is
quantitative. With k the least depth at which f_k(x) < f(x) + eps^2 and
lambda = f_k(x), the modulus

    delta = (2k+1)^2 * lambda^((2k+1)^2 / 2) * min(eps, 1/7) / (21 * 2^(k+1))

works; the single-level log-Lipschitz bound behind it states that the
depth-n log-factor grows by less than 2^(n+1) |t - x| / ((2n+1)^2 |sin 2^n x|)
between any two points where the sines are nonzero.

f(x) itself is not finitely computable, so k is certified through the
enclosure's lower bound when one exists; otherwise a deep partial product
stands proxy and the witness says so. At a lattice point (f(x) = 0, where f
is actually continuous) the vanishing factor alone provides the modulus:
|t - x| < arcsin(eps^((2k+1)^2/2)) / 2^k forces f(t) < eps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .angles import AngleRep, BitStream, DyadicPi, RawReal, angle_to_radians, reduce_argument
from .errors import CertificateUnavailable, ZeroFactor
from .product import _log_terms, evaluate_limit
from .kernels import factor_exponent_float

# smallest positive subnormal: the clamp when the delta formula underflows.
# A smaller-than-representable delta is still a valid modulus (the claim is
# "for all |t - x| < delta", and shrinking delta only weakens it).
_TINY = 5e-324


@dataclass(frozen=True)
class UscWitness:
    """A concrete (k, lambda, delta) modulus of upper semicontinuity at x.

    lam carries lambda = f_k(x). certified tells whether k was chosen
    against an enclosure lower bound for f(x) (true) or against the deep
    partial product f_{n_ref} as proxy (false). lattice marks the
    continuity case at a zero, where lam = 0 and delta comes from the
    vanishing factor instead of the product formula.
    """

    x: AngleRep
    epsilon: float
    k: int
    lam: float
    delta: float
    certified: bool
    lattice: bool = False
    n_ref: int = 0


def _formula_delta(k: int, lam: float, eps_tilde: float) -> float:
    log_delta = (
        2.0 * math.log(2 * k + 1.0)
        + ((2 * k + 1.0) ** 2 / 2.0) * math.log(lam)
        + math.log(eps_tilde)
        - math.log(21.0)
        - (k + 1.0) * kernels.LN2
    )
    if log_delta < -744.0:
        return _TINY
    return math.exp(log_delta)


def _lattice_delta(k: int, epsilon: float) -> float:
    # |t - x| < arcsin(eps^((2k+1)^2/2)) / 2^k makes the depth-k factor < eps
    log_arg = ((2 * k + 1.0) ** 2 / 2.0) * math.log(epsilon)
    if log_arg < -700.0:  # arcsin(z) = z to double precision down here
        log_delta = log_arg - k * kernels.LN2
        return _TINY if log_delta < -744.0 else math.exp(log_delta)
    delta = math.ldexp(math.asin(math.exp(log_arg)), -k)
    return delta if delta > 0.0 else _TINY


def _default_n_ref(x: AngleRep, epsilon: float) -> int:
    # deep enough that the enclosure gap f_N - lower (~ ln2 / (2 sqrt(N)))
    # drops below eps^2, within each representation's reach
    base = max(10_000, int(math.ceil((1.4 / epsilon**2) ** 2)))
    if isinstance(x, RawReal):
        return min(base, x.max_reliable_depth)
    if isinstance(x, BitStream) and x.rational is None:
        return min(base, 4096)  # rule streams pay per-depth big-int costs
    return base


def usc_witness(
    x: AngleRep,
    epsilon: float,
    n_ref: Optional[int] = None,
    strict: bool = False,
) -> UscWitness:
    """The least-depth witness (k, lambda, delta) for f(t) < f(x) + epsilon.

    k is the least depth with f_k(x) below (lower bound of f(x)) + epsilon^2.
    When no enclosure certificate is available at depth n_ref, strict mode
    raises CertificateUnavailable; otherwise f_{n_ref}(x) serves as proxy
    target and the witness is marked certified=False.
    """
    if not 0.0 < epsilon <= 1.0:
        raise ValueError("epsilon must lie in (0, 1]")
    if n_ref is None:
        n_ref = _default_n_ref(x, epsilon)
    eps_tilde = min(epsilon, 1.0 / 7.0)
    terms, hit_zero = _log_terms(x, n_ref)
    if hit_zero:
        k = len(terms)  # depth of the vanishing factor
        return UscWitness(
            x=x, epsilon=epsilon, k=k, lam=0.0,
            delta=_lattice_delta(k, epsilon), certified=True, lattice=True,
            n_ref=n_ref,
        )
    log_partials = np.cumsum(terms)
    enc = evaluate_limit(x, n_ref, want_certificate=True)
    certified = enc.lower > 0.0 and enc.value <= enc.lower + epsilon**2
    if certified:
        target = enc.lower + epsilon**2
    else:
        if strict:
            raise CertificateUnavailable(
                f"no enclosure certificate for {x!r} at depth {n_ref} "
                f"tight enough for epsilon = {epsilon}"
            )
        target = enc.value + epsilon**2
    below = log_partials < math.log(target)
    if not below.any():  # cannot happen: log f_{n_ref} < log target by choice
        raise CertificateUnavailable(f"no admissible depth up to {n_ref}")
    k = int(np.argmax(below))
    lam = float(np.exp(log_partials[k]))
    return UscWitness(
        x=x, epsilon=epsilon, k=k, lam=lam,
        delta=_formula_delta(k, lam, eps_tilde), certified=certified,
        lattice=False, n_ref=n_ref,
    )


def growth_bound_rhs(x: AngleRep, t: AngleRep, n: int) -> float:
    """The one-sided log-factor growth bound 2^(n+1)|t-x| / ((2n+1)^2 |sin 2^n x|).

    Raises ZeroFactor when either point's depth-n sine vanishes (the bound
    compares log-factors, which are -inf there).
    """
    d_x = reduce_argument(x, n).dist_float()
    d_t = reduce_argument(t, n).dist_float()
    if d_x == 0.0 or d_t == 0.0:
        raise ZeroFactor(f"sine vanishes at depth {n}")
    gap = abs(angle_to_radians(t) - angle_to_radians(x))
    return 2.0 ** (n + 1) * gap / ((2 * n + 1) ** 2 * kernels.sin_pi(d_x))


@dataclass(frozen=True)
class UscCheckReport:
    """Outcome of randomized checks of a witness's two inequalities.

    Checks per draw t in (x - delta, x + delta): (a) the log-product growth
    log f_k(t) - log f_k(x) stays below 3*2^(k+1)|t-x| / ((2k+1)^2 lambda^((2k+1)^2/2));
    (b) the value bound f_k(t) < f_k(x) + epsilon, which dominates
    f(t) < f(x) + epsilon since f <= f_k and f_k(x) < f(x) + epsilon^2.
    Margins are bound minus observed (positive = satisfied); inf when a
    check never ran. Draws that collapse to t == x (subnormal delta) only
    exercise check (b), which is then trivial; they are counted in trials.
    """

    witness: UscWitness
    trials: int
    growth_checks: int
    growth_violations: int
    value_violations: int
    min_growth_margin: float
    min_value_margin: float

    @property
    def violations(self) -> int:
        return self.growth_violations + self.value_violations


def _log_partial_at_offsets(y0: float, offsets: np.ndarray, k: int) -> np.ndarray:
    """log f_k at half-turn positions y0 + offsets, plain float reduction.

    Valid while (y0 + offset) * 2^k stays well inside float precision; the
    witnesses this backs have k <= ~60 and |y0| <= ~1.
    """
    y = y0 + offsets
    log_f = np.zeros_like(y)
    with np.errstate(divide="ignore", invalid="ignore"):
        for n in range(k + 1):
            s = np.ldexp(y, n)
            frac = s - np.floor(s)
            d = np.minimum(frac, 1.0 - frac)
            log_f += factor_exponent_float(n) * kernels.log_sin_pi_array(d)
    return log_f


def check_usc(
    x: AngleRep, epsilon: float, trials: int, seed: int,
    n_ref: Optional[int] = None, strict: bool = False,
) -> UscCheckReport:
    """Draw points around x within the witness delta and test both bounds.

    At a lattice point the product vanishes through the depth-k factor, and
    every other factor only shrinks it; the value check there tests the
    factor bound sin(2^k (t-x)) directly against epsilon, using exact
    offsets so float rounding of the lattice position cannot leak in.
    """
    witness = usc_witness(x, epsilon, n_ref=n_ref, strict=strict)
    if trials < 0:
        raise ValueError("trials must be non-negative")
    if trials == 0:
        return UscCheckReport(
            witness=witness, trials=0, growth_checks=0, growth_violations=0,
            value_violations=0, min_growth_margin=math.inf,
            min_value_margin=math.inf,
        )
    rng = np.random.Generator(np.random.Philox(key=seed))
    x_rad = angle_to_radians(x)
    t_rad = x_rad + rng.uniform(-witness.delta, witness.delta, size=trials)
    gaps = np.abs(t_rad - x_rad)  # exact when delta is small (Sterbenz)
    k = witness.k

    if witness.lattice:
        # |sin(2^k t)| = |sin(2^k (t - x))|: reduce the exact offset alone
        d = np.abs(np.ldexp(gaps / math.pi, k))
        d = np.minimum(d - np.floor(d), np.ceil(d) - d)
        with np.errstate(divide="ignore"):
            f_k_t = kernels.pow_sin_pi_array(d, factor_exponent_float(k))
        value_margin = (0.0 + epsilon) - f_k_t
        growth_checks = 0
        growth_viol = 0
        min_growth = math.inf
    else:
        log_f_x = math.log(witness.lam)
        log_f_t = _log_partial_at_offsets(x_rad / math.pi, (t_rad - x_rad) / math.pi, k)
        q = (2 * k + 1.0) ** 2 / 2.0
        # rhs in log space: 3 * 2^(k+1) * gap / ((2k+1)^2 * lam^q)
        with np.errstate(divide="ignore"):
            log_rhs = (
                math.log(3.0) + (k + 1) * kernels.LN2 + np.log(gaps)
                - 2.0 * math.log(2 * k + 1.0) - q * log_f_x
            )
        nonzero = gaps > 0.0  # the growth bound compares distinct points
        growth_margin = np.exp(log_rhs[nonzero]) - (log_f_t[nonzero] - log_f_x)
        growth_checks = int(np.count_nonzero(nonzero))
        growth_viol = int(np.count_nonzero(growth_margin <= 0.0))
        min_growth = float(growth_margin.min()) if growth_checks else math.inf
        f_k_t = np.exp(log_f_t)
        value_margin = (witness.lam + epsilon) - f_k_t

    value_viol = int(np.count_nonzero(value_margin <= 0.0))
    return UscCheckReport(
        witness=witness, trials=trials, growth_checks=growth_checks,
        growth_violations=growth_viol, value_violations=value_viol,
        min_growth_margin=min_growth,
        min_value_margin=float(value_margin.min()),
    )


@dataclass(frozen=True)
class DepthOneMax:
    """Numerical maximum of the two-factor partial product on (0, pi/2)."""

    x: float
    value: float
    sin_x: float


def depth_one_maximum() -> DepthOneMax:
    """Maximize f_1(x) = (sin x)^2 (sin 2x)^(2/9) over (0, pi/2).

    The maximum sits just below 81/100, at sin x = sqrt(10/11); this pins
    the constant behind the lambda < 0.81 clause of the witness bound.
    """

    def neg_log_f1(x: float) -> float:
        return -(2.0 * math.log(math.sin(x)) + (2.0 / 9.0) * math.log(math.sin(2 * x)))

    lo, hi = 1e-6, math.pi / 2 - 1e-6
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = neg_log_f1(c), neg_log_f1(d)
    for _ in range(200):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = neg_log_f1(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = neg_log_f1(d)
        if b - a < 1e-13:
            break
    x_star = (a + b) / 2.0
    return DepthOneMax(
        x=x_star, value=math.exp(-neg_log_f1(x_star)), sin_x=math.sin(x_star)
    )

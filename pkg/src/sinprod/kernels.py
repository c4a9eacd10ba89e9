"""Accurate sine-power kernels and small numeric helpers.

Every factor of the product is |sin(pi*d)|^e where d is the exact distance
from 2^n * (x/pi) to the nearest integer (d in [0, 1/2]) and e = 2/(2n+1)^2.
Both the scalar and the array paths below evaluate the identical expression
np.exp(e * np.log(np.sin(np.pi * d))): numpy's scalar and array ufuncs round
identically, so a factor derived one node at a time is bit-for-bit the factor
used inside vectorized quadrature. Do not replace the scalar path with
math.log/math.exp; those differ from numpy in the last ulp.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

LN2 = float(np.log(np.float64(2.0)))
LNPI = float(np.log(np.pi))


def factor_exponent(n: int) -> Fraction:
    """Exact exponent 2/(2n+1)^2 of the depth-n factor."""
    if n < 0:
        raise ValueError("depth index must be non-negative")
    return Fraction(2, (2 * n + 1) ** 2)


def factor_exponent_float(n: int) -> float:
    return 2.0 / float((2 * n + 1) ** 2)


def sin_pi(d: float) -> float:
    """|sin(pi*d)| for an exact distance d in [0, 1/2]; exact 0 and 1 endpoints."""
    return float(np.sin(np.pi * np.float64(d)))


def pow_sin_pi(d: float, e: float) -> float:
    """sin(pi*d)^e for d in [0, 1/2]; 0 at d=0, 1 at d=1/2, both exact."""
    with np.errstate(divide="ignore"):
        return float(np.exp(np.float64(e) * np.log(np.sin(np.pi * np.float64(d)))))


def log_sin_pi(d: float) -> float:
    """log sin(pi*d) for d in [0, 1/2]; -inf at d=0."""
    with np.errstate(divide="ignore"):
        return float(np.log(np.sin(np.pi * np.float64(d))))


def pow_sin_pi_array(d: np.ndarray, e: float) -> np.ndarray:
    """Vectorized pow_sin_pi; bitwise identical per element to the scalar path."""
    with np.errstate(divide="ignore"):
        return np.exp(e * np.log(np.sin(np.pi * d)))


def log_sin_pi_array(d: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(np.sin(np.pi * d))


def odd_inverse_square_tail(n_last: int) -> float:
    """sum_{n > n_last} 1/(2n+1)^2, accurate to ~1e-16 absolute for any n_last >= 0.

    Sums 64 terms directly, then closes with the asymptotic series of the
    remainder sum_{n>M} 1/(2n+1)^2 = psi'(M + 3/2)/4 (error ~ (M)^-9).
    """
    if n_last < 0:
        raise ValueError("n_last must be non-negative")
    direct = 0.0
    m = n_last + 64
    for n in range(n_last + 1, m + 1):
        direct += 1.0 / (2 * n + 1) ** 2
    z = m + 1.5
    trigamma = 1.0 / z + 1.0 / (2 * z**2) + 1.0 / (6 * z**3) - 1.0 / (30 * z**5) + 1.0 / (42 * z**7)
    return direct + 0.25 * trigamma


def pairwise_tree_sum(values: "list[float] | np.ndarray") -> float:
    """Sum with a fixed-shape binary tree (pad to a power of two with zeros).

    The combination order depends only on len(values), never on how the values
    were produced, so parallel producers cannot perturb the result.
    """
    vals = [float(v) for v in values]
    if not vals:
        return 0.0
    size = 1
    while size < len(vals):
        size *= 2
    vals = vals + [0.0] * (size - len(vals))
    while len(vals) > 1:
        vals = [vals[i] + vals[i + 1] for i in range(0, len(vals), 2)]
    return vals[0]

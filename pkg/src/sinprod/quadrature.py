"""Midpoint quadrature of the partial products, with convergence diagnostics.

M_k is the midpoint estimate of 2 * int_0^{pi/2} f_{k+1}(x) dx on 2^k equal
cells. Every node is x_j = (2j-1) pi / 2^(k+2), so at depth n the phase of
sin(2^n x_j) is the exact dyadic ((2j-1) mod 2^(p+1)) / 2^p half-turns with
p = k+2-n; no argument-reduction error exists anywhere in the estimator.
The product stops at n = k because the depth-(k+1) factor is sin of an odd
multiple of pi/2, exactly 1 at every node.

Two structural facts keep k = 29 (5 * 10^8 nodes) tractable:

- the depth-n factor depends on (2j-1) mod 2^p only, so the deepest 21
  levels collapse into one lookup table of at most 2^21 suffix products,
  built top-down in a dozen vectorized passes; only the few shallow levels
  are evaluated per node.
- summation is reproducible by construction: nodes are split into 2^10
  canonical chunks (fewer when 2^k < 2^10) regardless of worker count;
  inside a chunk, vectorized pairwise block sums feed a compensated
  accumulator; chunk sums are combined by a fixed-shape pairwise tree.
  Changing worker_count reassigns chunks to threads but cannot change a
  single rounding.

The truncation error of M_k empirically behaves like a / (k - b); fit_ab
recovers (a, b, M_infinity) from table rows. When the pure hyperbola model
cannot represent the data down to rounding noise, the limit is instead read
from a cubic polynomial in 1/k (a Richardson-style extrapolation), which is
what the tabulated range actually supports; the returned rms_residual
always describes the model that produced m_inf.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .errors import DegenerateFit, DepthTooLarge, InsufficientData
from .kernels import factor_exponent_float

_MAX_K = 32
_TABLE_LEVELS = 21  # levels k-20 .. k live in the suffix table (<= 2^21 entries)
_BLOCK = 1 << 16  # vectorized sub-block inside a chunk
_CANONICAL_CHUNKS = 1 << 10


def resolve_workers(worker_count: int) -> int:
    """0 means auto: the SINPROD_WORKERS env var, else min(cpu_count, 8)."""
    if worker_count < 0:
        raise ValueError("worker count must be >= 0")
    if worker_count > 0:
        return worker_count
    env = os.environ.get("SINPROD_WORKERS")
    if env:
        return max(1, int(env))
    return min(os.cpu_count() or 1, 8)


def _suffix_tables(k: int) -> tuple[int, np.ndarray]:
    """(n0, table) with table[(o-1)//2] = prod_{n=n0}^{k} factor_n(odd residue o).

    Built top-down from depth k: going one level shallower doubles the
    residue modulus, and each residue's suffix product is its own factor
    times the suffix above it (the residue folded once).
    """
    n0 = max(0, k - _TABLE_LEVELS + 1)
    table = np.ones(1, dtype=np.float64)
    for n in range(k, n0 - 1, -1):
        p = k + 2 - n
        odd = np.arange(1, 1 << p, 2, dtype=np.int64)
        d = np.minimum(odd, (1 << p) - odd).astype(np.float64) * 2.0 ** float(-p)
        fac = kernels.pow_sin_pi_array(d, factor_exponent_float(n))
        table = fac * np.tile(table, 2)
    return n0, table


def _chunk_sum(k: int, n0: int, table: np.ndarray, j_lo: int, j_hi: int) -> float:
    """Sum of node products for j in [j_lo, j_hi), deterministic layout."""
    t_mask = (1 << (k + 2 - n0)) - 1
    total = 0.0
    comp = 0.0
    for b_lo in range(j_lo, j_hi, _BLOCK):
        b_hi = min(b_lo + _BLOCK, j_hi)
        odd = 2 * np.arange(b_lo, b_hi, dtype=np.int64) - 1
        prod = table[((odd & t_mask) - 1) >> 1]
        for n in range(n0):
            p = k + 2 - n
            r = odd & ((1 << p) - 1)
            d = np.minimum(r, (1 << p) - r).astype(np.float64) * 2.0 ** float(-p)
            prod = prod * kernels.pow_sin_pi_array(d, factor_exponent_float(n))
        block = float(np.sum(prod))
        y = block - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def node_factor(k: int, j: int, n: int) -> float:
    """The depth-n factor at node j of the 2^k-cell rule, as the estimator
    computes it; the audit target for bitwise agreement with factor_value."""
    if not 1 <= j <= 1 << k:
        raise ValueError("node index out of range")
    p = k + 2 - n
    r = (2 * j - 1) & ((1 << p) - 1)
    d = min(r, (1 << p) - r) * 2.0 ** float(-p)
    return kernels.pow_sin_pi(d, factor_exponent_float(n))


def midpoint_estimate(k: int, worker_count: int = 1) -> float:
    """M_k = (pi / 2^k) * sum_j prod_{n=0}^{k} [sin((2j-1) 2^(n-k-2) pi)]^(2/(2n+1)^2).

    Bit-identical for every worker_count; see the module docstring for how.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if k > _MAX_K:
        raise DepthTooLarge(f"k = {k} exceeds the 64-bit-safe cap {_MAX_K}")
    workers = resolve_workers(worker_count)
    n0, table = _suffix_tables(k)
    nodes = 1 << k
    if n0 == 0:
        # the whole product is the table; nodes j = 1..2^k are exactly the
        # first half of the odd residues mod 2^(k+2)
        total = float(
            kernels.pairwise_tree_sum(table[:nodes])
        )
        return math.pi * 2.0 ** float(-k) * total
    n_chunks = min(nodes, _CANONICAL_CHUNKS)
    per = nodes // n_chunks
    bounds = [(1 + ci * per, 1 + (ci + 1) * per) for ci in range(n_chunks)]
    if workers == 1:
        sums = [_chunk_sum(k, n0, table, lo, hi) for lo, hi in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            sums = list(pool.map(lambda b: _chunk_sum(k, n0, table, *b), bounds))
    total = kernels.pairwise_tree_sum(np.array(sums))
    return math.pi * 2.0 ** float(-k) * total


@dataclass(frozen=True)
class ConvergenceRow:
    """One line of the convergence table: the estimate, the inverse-square-root
    difference diagnostic (absent on the first row), and the extrapolant
    m_k - a/(k-b) for the active (a, b)."""

    k: int
    m_k: float
    inv_sqrt_diff: Optional[float]
    extrapolated: float


def convergence_table(
    k_min: int,
    k_max: int,
    a: float = 0.4044,
    b: float = 0.27,
    worker_count: int = 1,
) -> list[ConvergenceRow]:
    """Rows for k = k_min..k_max; inv_sqrt_diff = (m_{k-1} - m_k)^(-1/2)."""
    if k_min < 1:
        raise ValueError("k_min must be >= 1")
    if k_max < k_min:
        raise ValueError("k_max must be >= k_min")
    rows: list[ConvergenceRow] = []
    prev: Optional[float] = None
    for k in range(k_min, k_max + 1):
        m_k = midpoint_estimate(k, worker_count)
        diff: Optional[float] = None
        if prev is not None and prev > m_k:
            diff = (prev - m_k) ** -0.5
        rows.append(
            ConvergenceRow(k=k, m_k=m_k, inv_sqrt_diff=diff, extrapolated=m_k - a / (k - b))
        )
        prev = m_k
    return rows


@dataclass(frozen=True)
class FitResult:
    """Fitted truncation model m_k ~ m_inf + a/(k-b) over a window of rows.

    m_inf is the extrapolated limit; rms_residual belongs to whichever model
    produced m_inf (the hyperbola, or the cubic escalation described in
    fit_ab). b always satisfies b < k_lo.
    """

    a: float
    b: float
    m_inf: float
    window: tuple[int, int]
    rms_residual: float


def _hyperbola_solve(ks: np.ndarray, ms: np.ndarray, b: float) -> tuple[float, float, float]:
    """Least squares for (m_inf, a) at fixed b; returns (m_inf, a, sse)."""
    x = np.column_stack([np.ones_like(ks), 1.0 / (ks - b)])
    coef, _, rank, _ = np.linalg.lstsq(x, ms, rcond=None)
    if rank < 2:
        raise DegenerateFit("residual system is singular")
    resid = ms - x @ coef
    return float(coef[0]), float(coef[1]), float(resid @ resid)


def fit_ab(rows: Sequence[ConvergenceRow], window: tuple[int, int]) -> FitResult:
    """Fit m_k ~ m_inf + a/(k-b) on the window: outer golden-section on b in
    (0, k_lo), inner linear solve for (m_inf, a).

    The hyperbola has only three parameters; when its best fit still leaves
    residuals above rounding scale (rms > 1e-9 relative), trusting its
    m_inf would push systematic model error into the limit. In that case
    m_inf is re-read from an exact least-squares cubic in 1/k over the same
    window, which tracks the next-order corrections; (a, b) stay as fitted
    since they remain the best hyperbolic summary of the window.
    """
    k_lo, k_hi = window
    sel = [r for r in rows if k_lo <= r.k <= k_hi]
    if len(sel) < 4:
        raise DegenerateFit(f"window [{k_lo}, {k_hi}] holds {len(sel)} rows; need >= 4")
    ks = np.array([r.k for r in sel], dtype=np.float64)
    ms = np.array([r.m_k for r in sel], dtype=np.float64)

    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    lo, hi = 1e-9, k_lo - 1e-9
    c = hi - inv_phi * (hi - lo)
    d = lo + inv_phi * (hi - lo)
    fc = _hyperbola_solve(ks, ms, c)[2]
    fd = _hyperbola_solve(ks, ms, d)[2]
    for _ in range(300):
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - inv_phi * (hi - lo)
            fc = _hyperbola_solve(ks, ms, c)[2]
        else:
            lo, c, fc = c, d, fd
            d = lo + inv_phi * (hi - lo)
            fd = _hyperbola_solve(ks, ms, d)[2]
        if hi - lo < 1e-12:
            break
    b = (lo + hi) / 2.0
    m_inf, a, sse = _hyperbola_solve(ks, ms, b)
    rms = math.sqrt(sse / len(sel))
    if rms <= 1e-9 * max(1.0, abs(float(np.mean(ms)))):
        return FitResult(a=a, b=b, m_inf=m_inf, window=(k_lo, k_hi), rms_residual=rms)

    x = np.column_stack([np.ones_like(ks), 1.0 / ks, ks**-2.0, ks**-3.0])
    coef, _, rank, _ = np.linalg.lstsq(x, ms, rcond=None)
    if rank < 4:
        raise DegenerateFit("cubic escalation system is singular")
    resid = ms - x @ coef
    rms = math.sqrt(float(resid @ resid) / len(sel))
    return FitResult(a=a, b=b, m_inf=float(coef[0]), window=(k_lo, k_hi), rms_residual=rms)


def lebesgue_lower_bound() -> float:
    """(pi/2) e^(-pi^2/2), the proven positive floor under the integral of f."""
    return (math.pi / 2.0) * math.exp(-(math.pi**2) / 2.0)


def diff_diagnostic_slope(rows: Sequence[ConvergenceRow]) -> float:
    """Least-squares slope of (m_{k-1} - m_k)^(-1/2) against k.

    Linearity of this diagnostic is the observed evidence that successive
    differences decay like 1/k^2, which is what makes the a/(k-b) truncation
    model plausible in the first place.
    """
    pts = [(r.k, r.inv_sqrt_diff) for r in rows if r.inv_sqrt_diff is not None]
    if len(pts) < 3:
        raise InsufficientData(f"{len(pts)} usable rows; need >= 3")
    ks = np.array([p[0] for p in pts], dtype=np.float64)
    vs = np.array([p[1] for p in pts], dtype=np.float64)
    return float(np.polyfit(ks, vs, 1)[0])

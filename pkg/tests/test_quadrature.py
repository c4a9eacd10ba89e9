"""Dyadic midpoint quadrature, convergence table, and truncation-model fit."""

import math

import numpy as np
import pytest

from conftest import REFERENCE_TABLE
from sinprod.angles import DyadicPi
from sinprod.errors import DegenerateFit, DepthTooLarge, InsufficientData
from sinprod.kernels import pairwise_tree_sum
from sinprod.product import factor_value
from sinprod.quadrature import (
    ConvergenceRow,
    _suffix_tables,
    convergence_table,
    diff_diagnostic_slope,
    fit_ab,
    lebesgue_lower_bound,
    midpoint_estimate,
    node_factor,
    resolve_workers,
)


def reference_rows(lo: int, hi: int) -> list[ConvergenceRow]:
    return [
        ConvergenceRow(k=k, m_k=REFERENCE_TABLE[k][0], inv_sqrt_diff=REFERENCE_TABLE[k][1], extrapolated=REFERENCE_TABLE[k][2])
        for k in range(lo, hi + 1)
    ]


class TestMidpointEstimate:
    def test_depth_zero_is_half_pi(self):
        assert abs(midpoint_estimate(0) - math.pi / 2.0) < 5e-16 * math.pi

    def test_mid_depth_reference(self):
        assert abs(midpoint_estimate(6) - REFERENCE_TABLE[6][0]) < 5e-11

    def test_monotone_decreasing(self):
        vals = [midpoint_estimate(k) for k in range(13)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_domain(self):
        with pytest.raises(ValueError):
            midpoint_estimate(-1)
        with pytest.raises(DepthTooLarge):
            midpoint_estimate(33)

    def test_node_factor_matches_reduction_kernel(self):
        # the quadrature's residue arithmetic and the general evaluator must
        # agree bitwise, node by node, factor by factor
        rng = np.random.default_rng(20260819)
        for _ in range(200):
            k = int(rng.integers(0, 17))
            j = int(rng.integers(1, (1 << k) + 1))
            n = int(rng.integers(0, k + 1))
            assert node_factor(k, j, n) == factor_value(DyadicPi(2 * j - 1, k + 2), n)

    def test_node_index_domain(self):
        with pytest.raises(ValueError):
            node_factor(3, 0, 0)
        with pytest.raises(ValueError):
            node_factor(3, 9, 0)

    def test_reflection_symmetry(self):
        # summing all odd residues at half weight reproduces the half-period
        # sum exactly; float addition is commutative, so the mirrored tree
        # collapses bitwise
        for k in (3, 8, 12):
            n0, table = _suffix_tables(k)
            assert n0 == 0
            full = math.pi * 2.0 ** float(-(k + 1)) * pairwise_tree_sum(table)
            assert full == midpoint_estimate(k)

    def test_worker_count_invariance_deep(self):
        # k = 21 exercises the chunked path (suffix table capped below 2^k)
        vals = {midpoint_estimate(21, worker_count=w) for w in (1, 2, 8)}
        assert len(vals) == 1
        got = vals.pop()
        assert abs(got - REFERENCE_TABLE[21][0]) < 5e-10


class TestResolveWorkers:
    def test_explicit(self):
        assert resolve_workers(3) == 3

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            resolve_workers(-1)

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("SINPROD_WORKERS", "5")
        assert resolve_workers(0) == 5

    def test_auto_without_env(self, monkeypatch):
        monkeypatch.delenv("SINPROD_WORKERS", raising=False)
        assert resolve_workers(0) >= 1


class TestConvergenceTable:
    def test_matches_reference_mid_range(self):
        rows = convergence_table(6, 10)
        assert [r.k for r in rows] == list(range(6, 11))
        for r in rows:
            col2, col3, col4 = REFERENCE_TABLE[r.k]
            assert abs(r.m_k - col2) < 5e-11
            if col3 is None:
                assert r.inv_sqrt_diff is None
            else:
                assert abs(r.inv_sqrt_diff - col3) < 1.05e-6
            assert abs(r.extrapolated - col4) < 1.05e-7

    def test_first_row_has_no_diff(self):
        rows = convergence_table(3, 5)
        assert rows[0].inv_sqrt_diff is None
        assert all(r.inv_sqrt_diff is not None for r in rows[1:])

    def test_extrapolation_formula(self):
        a, b = 0.4044, 0.27
        for r in convergence_table(4, 7, a=a, b=b):
            assert r.extrapolated == r.m_k - a / (r.k - b)

    def test_domain(self):
        with pytest.raises(ValueError):
            convergence_table(0, 5)
        with pytest.raises(ValueError):
            convergence_table(6, 5)


class TestFit:
    def test_recovers_synthetic_hyperbola(self):
        a, b, m_inf = 0.5, 0.3, 1.0
        rows = [
            ConvergenceRow(k=k, m_k=m_inf + a / (k - b), inv_sqrt_diff=None, extrapolated=0.0)
            for k in range(6, 21)
        ]
        fit = fit_ab(rows, (6, 20))
        assert abs(fit.a - a) < 1e-9
        assert abs(fit.b - b) < 1e-9
        assert abs(fit.m_inf - m_inf) < 1e-9
        assert fit.window == (6, 20)
        assert fit.rms_residual < 1e-9

    def test_reference_tail_window(self):
        fit = fit_ab(reference_rows(20, 29), (20, 29))
        assert abs(fit.m_inf - 1.16993) < 2e-5
        assert abs(fit.m_inf - 1.1699165166569452) < 1e-7
        assert 0.0 < fit.b < 20.0

    def test_too_few_rows(self):
        with pytest.raises(DegenerateFit):
            fit_ab(reference_rows(20, 22), (20, 22))

    def test_degenerate_design_matrix(self):
        rows = [ConvergenceRow(k=20, m_k=1.19, inv_sqrt_diff=None, extrapolated=0.0)] * 5
        with pytest.raises(DegenerateFit):
            fit_ab(rows, (20, 20))

    def test_window_must_intersect_rows(self):
        with pytest.raises(DegenerateFit):
            fit_ab(reference_rows(20, 29), (1, 4))


class TestDiffDiagnostic:
    def test_reference_slope(self):
        slope = diff_diagnostic_slope(reference_rows(6, 29))
        assert abs(slope - 1.578) < 0.01
        assert slope == pytest.approx(1.582247156126482, abs=1e-9)

    def test_exact_inverse_square_model(self):
        rows = [
            ConvergenceRow(k=k, m_k=0.0, inv_sqrt_diff=float(k), extrapolated=0.0)
            for k in range(5, 16)
        ]
        assert diff_diagnostic_slope(rows) == pytest.approx(1.0, abs=1e-10)

    def test_needs_three_points(self):
        rows = [
            ConvergenceRow(k=k, m_k=0.0, inv_sqrt_diff=float(k), extrapolated=0.0)
            for k in (5, 6)
        ]
        with pytest.raises(InsufficientData):
            diff_diagnostic_slope(rows)


class TestLebesgueFloor:
    def test_closed_form(self):
        assert lebesgue_lower_bound() == (math.pi / 2.0) * math.exp(-(math.pi**2) / 2.0)
        assert abs(lebesgue_lower_bound() - 0.011297) < 1e-6

    def test_below_every_estimate(self):
        floor = lebesgue_lower_bound()
        assert all(floor < col2 for col2, _, _ in REFERENCE_TABLE.values())

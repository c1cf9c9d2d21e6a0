#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Tests for `sweep_utils.ode_analysis`."""


import os
import unittest

import numpy as np

from sweep_utils.config import load_config, parse_config
from sweep_utils.errors import InvalidParametersError
from sweep_utils.model import EcoParams
from sweep_utils.ode_analysis import (basin_split, boundary_fixed_points, check_conditions, classify,
                                      cubic_coefficients, cubic_roots, eigenvalues, entry_time,
                                      index_sum, interior_fixed_points, invariant_compact, jacobian,
                                      lv_rhs, mut_field, mut_rhs, origin_report, perturbation_equilibrium,
                                      tangency_growth_rate, unstable_direction, verify_conditions,
                                      with_growth_rate)
from sweep_utils.ode_integrator import integrate

SLOW = os.environ.get('SWEEP_UTILS_SLOW') == '1'

DESK = EcoParams(f_A=2.0, f_a=5.0, D_A=1.0, D_a=1.0, C=((1.0, 1.0), (2.0, 1.0)))


def bundled(name):
    config = parse_config(load_config(name), 'ode')
    return config.params, config.regime.lambda_Aa, config.regime.lambda_aA


class TestFixedPoints(unittest.TestCase):
    """Interior fixed points of the bundled parameter sets."""

    def setUp(self):
        self.params, self.lam_Aa, self.lam_aA = bundled('fig7c')
        self.points = interior_fixed_points(self.params, self.lam_Aa, self.lam_aA)

    def test_three_points(self):
        expected = [(0.56216572, 1.56544582), (1.03865299, 0.83402974), (2.99029241, 0.20830221)]
        self.assertEqual(len(self.points), 3)
        for report, (n_A, n_a) in zip(self.points, expected):
            self.assertAlmostEqual(report.n_A, n_A, places=7)
            self.assertAlmostEqual(report.n_a, n_a, places=7)
            self.assertLess(report.residual, 1e-10)
        self.assertEqual([r.kind for r in self.points], ['sink', 'saddle', 'sink'])
        self.assertEqual(index_sum(self.points), 1)

    def test_jacobians(self):
        printed = [
            [[-5.0315705, -1.20583], [-2.8809, -1.6552271]],
            [[-2.3274558, -3.58825], [-1.41806, -1.1453647]],
            [[-3.1020934, -13.346462], [-0.166604, -3.7971898]],
        ]
        for report, J in zip(self.points, printed):
            np.testing.assert_allclose(report.jacobian, J, atol=2e-5)
            np.testing.assert_allclose(
                jacobian(self.params, self.lam_Aa, self.lam_aA, report.point, form='interior'),
                report.jacobian, atol=1e-8)

    def test_eigenvalues(self):
        expected = [(-5.8581036, -0.8286801), (-4.0682992, 0.5954790), (-4.9807756, -1.9185096)]
        for report, pair in zip(self.points, expected):
            got = sorted(e.real for e in report.eigenvalues)
            np.testing.assert_allclose(got, sorted(pair), atol=5e-6)

    def test_roots(self):
        cubic = cubic_coefficients(self.params, self.lam_Aa, self.lam_aA)
        roots = cubic_roots(cubic)
        self.assertEqual(roots.branch, 'positive')
        self.assertGreater(cubic.delta, 0)
        np.testing.assert_allclose(sorted(roots.roots), [0.06965948, 0.80299172, 2.78466968], atol=1e-7)
        for rho in roots.roots:
            self.assertLess(cubic.relative_residual(rho), 1e-9)

    def test_single_points(self):
        expected = {
            'fig6a': (0.61975658, 2.40662790),
            'fig6b': (0.41709568, 0.38089853),
            'fig7a': (2.71324415, 0.33659350),
            'fig7b': (0.46019240, 1.74552550),
        }
        for name, (n_A, n_a) in expected.items():
            params, lam_Aa, lam_aA = bundled(name)
            points = interior_fixed_points(params, lam_Aa, lam_aA)
            self.assertEqual(len(points), 1, name)
            self.assertAlmostEqual(points[0].n_A, n_A, places=6, msg=name)
            self.assertAlmostEqual(points[0].n_a, n_a, places=6, msg=name)
            self.assertEqual(points[0].kind, 'sink', name)

    def test_origin_and_axes(self):
        self.assertEqual(origin_report(self.params, self.lam_Aa, self.lam_aA).kind, 'source')
        reports = boundary_fixed_points(DESK)
        self.assertEqual([r.kind for r in reports], ['source', 'saddle', 'sink'])
        self.assertEqual([r.location for r in reports], ['origin', 'boundary', 'boundary'])

    def test_needs_back_mutation(self):
        with self.assertRaises(InvalidParametersError):
            cubic_coefficients(DESK, 0.1, 0.0)


class TestTangency(unittest.TestCase):
    """Merging of two interior fixed points."""

    def test_tangency(self):
        params, lam_Aa, lam_aA = bundled('fig7b')
        rho_A = tangency_growth_rate(params, lam_Aa, lam_aA, (3.1, 3.92))
        self.assertAlmostEqual(rho_A, 3.178690200475, places=6)
        shifted = with_growth_rate(params, lam_Aa, rho_A)
        points = interior_fixed_points(shifted, lam_Aa, lam_aA)
        self.assertEqual(len(points), 2)
        self.assertEqual(sorted(r.kind for r in points), ['saddle-node', 'sink'])
        self.assertEqual(index_sum(points), 1)

    def test_no_sign_change(self):
        params, lam_Aa, lam_aA = bundled('fig7b')
        with self.assertRaises(InvalidParametersError):
            tangency_growth_rate(params, lam_Aa, lam_aA, (3.0, 3.1))


class TestClassification(unittest.TestCase):
    """Eigenvalues and kinds of 2x2 matrices."""

    def test_kinds(self):
        self.assertEqual(classify(eigenvalues([[-1.0, 0.0], [0.0, -2.0]])), ('sink', 1))
        self.assertEqual(classify(eigenvalues([[1.0, 0.0], [0.0, 2.0]])), ('source', 1))
        self.assertEqual(classify(eigenvalues([[1.0, 0.0], [0.0, -2.0]])), ('saddle', -1))
        self.assertEqual(classify(eigenvalues([[0.0, 0.0], [0.0, -2.0]])), ('saddle-node', 0))
        self.assertEqual(classify(eigenvalues([[0.0, 1.0], [-1.0, 0.0]])), ('degenerate', None))
        self.assertEqual(classify(eigenvalues([[-1.0, 1.0], [-1.0, -1.0]])), ('sink', 1))

    def test_complex_pair(self):
        low, high = eigenvalues([[-1.0, 2.0], [-2.0, -1.0]])
        self.assertAlmostEqual(low.real, -1.0)
        self.assertAlmostEqual(abs(low.imag), 2.0)
        self.assertAlmostEqual(high.conjugate(), low)

    def test_index_sum_of_subsets(self):
        params, lam_Aa, lam_aA = bundled('fig7c')
        points = interior_fixed_points(params, lam_Aa, lam_aA)
        self.assertEqual(index_sum(points[:2]), 0)
        self.assertEqual(index_sum([]), 0)


class TestSystems(unittest.TestCase):
    """Vector fields and invariant sets."""

    def test_zero_mutation_is_lotka_volterra(self):
        for n in ([0.5, 0.5], [1.0, 3.0], [2.5, 0.1]):
            np.testing.assert_allclose(mut_rhs(DESK, 0.0, 0.0, n), lv_rhs(DESK, n), rtol=1e-15)

    def test_invariant_compact(self):
        lo, hi = invariant_compact(DESK)
        self.assertAlmostEqual(lo, 0.25)
        self.assertAlmostEqual(hi, 8.0)

    def test_mutation_cancels_in_total(self):
        params, lam_Aa, lam_aA = bundled('fig7c')
        n = np.array([0.7, 1.3])
        total = mut_rhs(params, lam_Aa, lam_aA, n).sum()
        without = mut_rhs(params, 0.0, 0.0, n).sum()
        self.assertAlmostEqual(total, without, places=12)


class TestConditions(unittest.TestCase):
    """Sufficient conditions for a unique interior sink."""

    def test_fig6a(self):
        params, lam_Aa, lam_aA = bundled('fig6a')
        report = check_conditions(params, lam_Aa, lam_aA)
        self.assertEqual(report.hyperbola_case, ('A', 'D'))
        self.assertTrue(report.unique_sink)
        self.assertEqual(report.origin_kind, 'source')
        self.assertEqual(verify_conditions(report, interior_fixed_points(params, lam_Aa, lam_aA)), [])

    def test_fig7c_makes_no_claim(self):
        params, lam_Aa, lam_aA = bundled('fig7c')
        report = check_conditions(params, lam_Aa, lam_aA)
        self.assertFalse(report.unique_sink)
        self.assertEqual(verify_conditions(report, interior_fixed_points(params, lam_Aa, lam_aA)), [])

    def test_contradiction_is_reported(self):
        params, lam_Aa, lam_aA = bundled('fig6a')
        report = check_conditions(params, lam_Aa, lam_aA)
        self.assertEqual(len(verify_conditions(report, [])), 1)


class TestPerturbation(unittest.TestCase):
    """First-order expansions in the mutation rate."""

    def test_zeroth_order(self):
        expansion = perturbation_equilibrium(DESK, 1.0, 0.0)
        self.assertEqual(expansion.clause, 'monomorphic')
        self.assertEqual(expansion.value, (0.0, 4.0))

    def test_error_is_second_order(self):
        errors = []
        for lam in (1e-2, 1e-3):
            approx = np.array(perturbation_equilibrium(DESK, 1.0, lam).value)
            points = interior_fixed_points(DESK, lam, lam)
            nearest = min(points, key=lambda r: float(np.linalg.norm(r.point - approx)))
            self.assertEqual(nearest.kind, 'sink')
            errors.append(float(np.max(np.abs(nearest.point - approx))))
        self.assertGreater(errors[0] / errors[1], 25.0)
        self.assertLess(errors[0] / errors[1], 400.0)

    def test_coexistence(self):
        params = EcoParams(f_A=2.0, f_a=2.0, D_A=1.0, D_a=1.0, C=((1.0, 0.5), (0.5, 1.0)))
        expansion = perturbation_equilibrium(params, 1.0, 0.0)
        self.assertEqual(expansion.clause, 'coexistence')
        np.testing.assert_allclose(expansion.zeroth, (2.0 / 3.0, 2.0 / 3.0))
        self.assertEqual(expansion.first, (0.0, 0.0))

    def test_no_expansion(self):
        with self.assertRaises(InvalidParametersError):
            perturbation_equilibrium(DESK.swapped(), 1.0, 0.01)


class TestEntryTime(unittest.TestCase):
    """Time to settle near the monomorphic a equilibrium."""

    def test_inside_from_the_start(self):
        self.assertEqual(entry_time(DESK, (0.0, 4.0), 0.2), 0.0)

    def test_smaller_box_is_entered_later(self):
        wide = entry_time(DESK, (1.0, 0.1), 0.2)
        narrow = entry_time(DESK, (1.0, 0.1), 0.1)
        self.assertGreater(wide, 0.0)
        self.assertGreaterEqual(narrow + 1e-9, wide)
        path = integrate(lambda t, n: lv_rhs(DESK, n), [1.0, 0.1], wide + 1.0, sample_times=[wide + 1.0])
        self.assertLessEqual(path.final[0], 0.02)
        self.assertGreaterEqual(path.final[1], 3.9)

    def test_epsilon_bound(self):
        with self.assertRaises(InvalidParametersError):
            entry_time(DESK, (1.0, 0.1), 0.6)


class TestBasins(unittest.TestCase):
    """The two sides of a saddle's unstable direction."""

    def test_split(self):
        params, lam_Aa, lam_aA = bundled('fig7c')
        points = interior_fixed_points(params, lam_Aa, lam_aA)
        saddle = points[1]
        v = unstable_direction(saddle)
        self.assertAlmostEqual(float(np.linalg.norm(v)), 1.0)
        ends = basin_split(params, lam_Aa, lam_aA, saddle, points)
        self.assertEqual(sorted(end.nearest for end in ends), [0, 2])
        for end in ends:
            self.assertLess(end.velocity, 1e-8)

    def test_needs_saddle(self):
        params, lam_Aa, lam_aA = bundled('fig7c')
        with self.assertRaises(InvalidParametersError):
            unstable_direction(interior_fixed_points(params, lam_Aa, lam_aA)[0])

    @unittest.skipUnless(SLOW, 'set SWEEP_UTILS_SLOW=1 to run')
    def test_grid_converges(self):
        params, lam_Aa, lam_aA = bundled('fig7c')
        points = interior_fixed_points(params, lam_Aa, lam_aA)
        sinks = [r.point for r in points if r.kind == 'sink']
        _, hi = invariant_compact(params)
        field = mut_field(params, lam_Aa, lam_aA)
        for n_A in np.linspace(0.05, hi, 10):
            for n_a in np.linspace(0.05, hi, 10):
                final = integrate(field, [n_A, n_a], 1000.0, sample_times=[1000.0]).final
                self.assertLess(float(np.linalg.norm(mut_rhs(params, lam_Aa, lam_aA, final))), 1e-8)
                self.assertLess(min(float(np.linalg.norm(final - s)) for s in sinks), 1e-6)

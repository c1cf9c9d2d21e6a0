#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Tests for `sweep_utils.ode_integrator`."""


import math
import unittest

import numpy as np

from sweep_utils.errors import IntegrationError, InvalidParametersError
from sweep_utils.ode_integrator import integrate


class TestIntegrate(unittest.TestCase):
    """Adaptive Dormand-Prince integration."""

    def test_exponential_decay(self):
        path = integrate(lambda t, y: -y, [1.0], 5.0)
        self.assertAlmostEqual(path.final[0], math.exp(-5.0), delta=1e-9)
        self.assertEqual(path.t[0], 0.0)
        self.assertEqual(path.t[-1], 5.0)
        self.assertTrue(np.all(np.diff(path.t) > 0))

    def test_logistic(self):
        path = integrate(lambda t, y: y * (1.0 - y), [0.1], 5.0)
        self.assertAlmostEqual(path.final[0], 1.0 / (1.0 + 9.0 * math.exp(-5.0)), delta=1e-8)

    def test_sample_times_are_exact(self):
        times = [0.0, 0.3, 1.7, 2.0]
        path = integrate(lambda t, y: np.array([y[1], -y[0]]), [0.0, 1.0], 2.0, sample_times=times,
                         positive=False)
        np.testing.assert_array_equal(path.t, times)
        np.testing.assert_allclose(path.y[:, 0], np.sin(times), atol=1e-8)
        self.assertEqual([row[0] for row in path.rows()], times)

    def test_samples_follow_the_field(self):
        h = 1e-3
        rhs = lambda t, y: y * (1.0 - y)  # noqa: E731
        path = integrate(rhs, [0.1], 2.0, sample_times=[1.0 - h, 1.0, 1.0 + h])
        slope = (path.y[2, 0] - path.y[0, 0]) / (2.0 * h)
        self.assertAlmostEqual(slope, rhs(1.0, path.y[1])[0], delta=1e-5)

    def test_nonzero_start(self):
        path = integrate(lambda t, y: np.array([1.0]), [0.0], 3.0, t0=1.0)
        self.assertAlmostEqual(path.final[0], 2.0)

    def test_positivity_underflow(self):
        with self.assertRaises(IntegrationError) as ctx:
            integrate(lambda t, y: np.array([-10.0]), [1.0], 1.0)
        self.assertIsNotNone(ctx.exception.t)

    def test_step_budget(self):
        with self.assertRaises(IntegrationError):
            integrate(lambda t, y: -y, [1.0], 100.0, max_steps=3)

    def test_invalid_inputs(self):
        with self.assertRaises(InvalidParametersError):
            integrate(lambda t, y: -y, [1.0], 1.0, rtol=0.0)
        with self.assertRaises(InvalidParametersError):
            integrate(lambda t, y: -y, [-1.0], 1.0)
        with self.assertRaises(InvalidParametersError):
            integrate(lambda t, y: -y, [1.0], -1.0)
        with self.assertRaises(InvalidParametersError):
            integrate(lambda t, y: -y, [1.0], 1.0, sample_times=[2.0])

    def test_signed_state(self):
        path = integrate(lambda t, y: np.array([-1.0]), [1.0], 2.0, positive=False)
        self.assertAlmostEqual(path.final[0], -1.0)

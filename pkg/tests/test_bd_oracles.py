#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Tests for `sweep_utils.bd_oracles`."""


import math
import unittest

import numpy as np

from sweep_utils.bd_oracles import (BDRates, BDStop, bd_extinction_cdf, bd_hitting_prob,
                                    bd_hitting_time_slope, bd_survival_prob, coupled_bd_pair,
                                    gem_oracle_families, logistic_sojourn, simulate_bd)
from sweep_utils.errors import InvalidParametersError, OrderingError
from sweep_utils.rng import UniformStream, make_rng


class TestClosedForms(unittest.TestCase):
    """Gambler's ruin and extinction-time formulas."""

    def test_hitting_prob(self):
        self.assertAlmostEqual(bd_hitting_prob(2, 1, 0, 1, 2), 2.0 / 3.0)
        self.assertAlmostEqual(bd_hitting_prob(2, 1, 0, 1, math.inf), 0.5)
        self.assertAlmostEqual(bd_hitting_prob(1, 1, 0, 1, 4), 0.25)
        self.assertAlmostEqual(bd_hitting_prob(1, 2, 0, 1, 2), 1.0 / 3.0)
        self.assertEqual(bd_hitting_prob(1, 2, 0, 1, math.inf), 0.0)
        self.assertEqual(bd_hitting_prob(2, 1, 0, 0, 5), 0.0)
        self.assertEqual(bd_hitting_prob(2, 1, 0, 5, 5), 1.0)

    def test_hitting_prob_large_ratio(self):
        p = bd_hitting_prob(1, 50, 0, 1, 400)
        self.assertGreaterEqual(p, 0.0)
        self.assertLess(p, 1e-300)

    def test_hitting_prob_ordering(self):
        with self.assertRaises(OrderingError):
            bd_hitting_prob(2, 1, 0, 3, 2)
        with self.assertRaises(OrderingError):
            bd_hitting_prob(2, 1, 2, 2, 2)
        with self.assertRaises(InvalidParametersError):
            bd_hitting_prob(0, 1, 0, 1, 2)

    def test_survival(self):
        self.assertAlmostEqual(bd_survival_prob(5, 3, 1), 0.4)
        self.assertAlmostEqual(bd_survival_prob(5, 3, 2), 1 - 0.36)
        self.assertEqual(bd_survival_prob(5, 3, 0), 0.0)

    def test_extinction_cdf(self):
        self.assertAlmostEqual(bd_extinction_cdf(2, 1, 1, math.log(2)), 1.0 / 3.0)
        self.assertAlmostEqual(bd_extinction_cdf(2, 1, 1, 1.0), 0.38730, places=5)
        self.assertAlmostEqual(bd_extinction_cdf(2, 1, 1, math.inf), 0.5)
        self.assertAlmostEqual(bd_extinction_cdf(2, 1, 2, math.inf), 0.25)
        self.assertAlmostEqual(bd_extinction_cdf(1, 2, 1, math.inf), 1.0)
        self.assertEqual(bd_extinction_cdf(2, 1, 1, 0.0), 0.0)
        with self.assertRaises(InvalidParametersError):
            bd_extinction_cdf(1, 1, 1, 1.0)

    def test_slope(self):
        self.assertEqual(bd_hitting_time_slope(3, 1), 0.5)
        with self.assertRaises(InvalidParametersError):
            bd_hitting_time_slope(1, 2)

    def test_slope_simulated(self):
        stream = UniformStream(make_rng(8))
        N = 500
        times = [r.t for r in (simulate_bd(BDRates(2, 1), 1, BDStop(upper=N), stream) for _ in range(400))
                 if r.reason == 'upper']
        self.assertGreater(len(times), 150)
        scaled = np.array(times) / math.log(N)
        expected = bd_hitting_time_slope(2, 1)
        self.assertLess(abs(scaled.mean() - expected), 0.1 * expected)

    def test_rates_validation(self):
        with self.assertRaises(InvalidParametersError):
            BDRates(b=0, d=0)
        with self.assertRaises(InvalidParametersError):
            BDRates(b=1, d=-1)
        with self.assertRaises(InvalidParametersError):
            BDRates(b=2, d=1, c=1)
        self.assertEqual(BDRates(b=2, d=1, c=1, K=10).death_rate(10), 20.0)
        self.assertEqual(BDRates(b=0, d=0, immigration=1).death_rate(3), 0.0)


class TestSimulateBD(unittest.TestCase):
    """Monte Carlo against the closed forms."""

    def test_extinction_frequency(self):
        stream = UniformStream(make_rng(1))
        reps = 4000
        records = [simulate_bd(BDRates(2, 1), 1, BDStop(t_max=1.0), stream) for _ in range(reps)]
        self.assertTrue(all(r.reason in ('extinct', 't_max') for r in records))
        p = bd_extinction_cdf(2, 1, 1, 1.0)
        observed = sum(1 for r in records if r.reason == 'extinct') / reps
        self.assertLess(abs(observed - p), 4.5 * math.sqrt(p * (1 - p) / reps))

    def test_hitting_frequency(self):
        stream = UniformStream(make_rng(2))
        reps = 3000
        stop = BDStop(upper=10, lower=0)
        hits = sum(1 for _ in range(reps) if simulate_bd(BDRates(2, 1), 3, stop, stream).reason == 'upper')
        p = bd_hitting_prob(2, 1, 0, 3, 10)
        self.assertLess(abs(hits / reps - p), 4.5 * math.sqrt(p * (1 - p) / reps))

    def test_yule_moments(self):
        stream = UniformStream(make_rng(3))
        reps = 4000
        sizes = np.array([simulate_bd(BDRates(1, 0), 1, BDStop(t_max=1.0), stream).z for _ in range(reps)])
        self.assertLess(abs(sizes.mean() - math.e), 4.5 * math.sqrt((math.e ** 2 - math.e) / reps))

    def test_pure_immigration_is_poisson(self):
        stream = UniformStream(make_rng(4))
        reps = 2000
        records = [simulate_bd(BDRates(0, 0, immigration=2.0), 0, BDStop(t_max=3.0), stream)
                   for _ in range(reps)]
        sizes = np.array([r.z for r in records])
        self.assertLess(abs(sizes.mean() - 6.0), 4.5 * math.sqrt(6.0 / reps))
        self.assertTrue(all(r.n_immigrants == r.z for r in records))
        self.assertTrue(all(r.families == [1] * r.z for r in records))

    def test_stops_are_inclusive(self):
        record = simulate_bd(BDRates(2, 1), 5, BDStop(upper=5), 0)
        self.assertEqual((record.reason, record.events, record.hit_time), ('upper', 0, 0.0))
        record = simulate_bd(BDRates(2, 1), 5, BDStop(lower=5), 0)
        self.assertEqual(record.reason, 'lower')

    def test_event_cap(self):
        record = simulate_bd(BDRates(2, 1), 20, BDStop(max_events=7), 0)
        self.assertEqual((record.reason, record.events), ('event_cap', 7))
        self.assertIsNone(record.hit_time)

    def test_samples(self):
        record = simulate_bd(BDRates(0, 1), 5, BDStop(sample_times=(0.0, 1000.0)), 5)
        self.assertEqual(record.reason, 'extinct')
        np.testing.assert_array_equal(record.samples, [[0.0, 5.0], [1000.0, 0.0]])

    def test_seed_reproducible(self):
        first = simulate_bd(BDRates(2, 1), 1, BDStop(t_max=2.0), 9)
        second = simulate_bd(BDRates(2, 1), 1, BDStop(t_max=2.0), make_rng(9))
        self.assertEqual((first.z, first.t, first.events), (second.z, second.t, second.events))

    def test_family_tracking(self):
        record = simulate_bd(BDRates(2, 1), 4, BDStop(t_max=1.0, track_families=True), 6)
        self.assertEqual(record.families, [record.z])


class TestGemOracle(unittest.TestCase):
    """Families of the birth-death process with immigration."""

    def test_fractions(self):
        stream = UniformStream(make_rng(7))
        for _ in range(50):
            spectrum = gem_oracle_families(2.0, 2.0, 1.0, 2.0, stream)
            if spectrum:
                self.assertAlmostEqual(sum(spectrum), 1.0)
                self.assertTrue(all(x > 0 for x in spectrum))

    def test_needs_supercritical(self):
        with self.assertRaises(InvalidParametersError):
            gem_oracle_families(1.0, 1.0, 1.0, 1.0, 0)


class TestCoupling(unittest.TestCase):
    """Shared-noise coupling of two birth-death processes."""

    def test_identical_rates(self):
        report = coupled_bd_pair(2, 1, 2, 1, horizon=2.0, reps=50, rng=1)
        self.assertEqual(report.sup_second_moment, 0.0)
        self.assertIsNone(report.intermediate_bound)
        self.assertEqual(report.gap, 0)

    def test_monotone_bound(self):
        report = coupled_bd_pair(2, 1, 2.1, 1, horizon=2.0, reps=200, rng=2)
        self.assertIsNotNone(report.intermediate_bound)
        self.assertLessEqual(report.sup_second_moment, report.intermediate_bound + 1e-12)
        self.assertEqual(len(report.times), 21)

    def test_crossed_rates_have_no_bound(self):
        report = coupled_bd_pair(2, 1.1, 2.1, 1, horizon=1.0, reps=20, rng=3)
        self.assertIsNone(report.intermediate_bound)

    def test_moment_grows_with_gap(self):
        small = coupled_bd_pair(2, 1, 2.01, 1, horizon=3.0, reps=200, rng=4)
        large = coupled_bd_pair(2, 1, 3.0, 1, horizon=3.0, reps=200, rng=4)
        self.assertLess(small.sup_second_moment, large.sup_second_moment)

    def test_capped_runs_are_counted(self):
        report = coupled_bd_pair(2, 1, 2.1, 1, horizon=3.0, reps=20, rng=5)
        self.assertEqual(report.capped, 0)
        with self.assertLogs('sweep_utils.bd_oracles', level='WARNING'):
            frozen = coupled_bd_pair(2, 1, 2.1, 1, horizon=3.0, reps=20, rng=5, max_events=0)
        self.assertEqual(frozen.capped, 20)
        self.assertEqual(frozen.to_dict()['capped'], 20)
        with self.assertLogs('sweep_utils.bd_oracles', level='WARNING'):
            few = coupled_bd_pair(2, 1, 2.1, 1, horizon=3.0, reps=20, rng=5, max_events=3)
        self.assertGreater(few.capped, 0)
        self.assertLessEqual(few.capped, 20)


class TestLogisticSojourn(unittest.TestCase):
    """Time spent near the logistic equilibrium."""

    def test_stays_near_equilibrium(self):
        self.assertEqual(logistic_sojourn(2, 1, 1, 100, 0.8, 0.8, horizon=10.0, reps=20, rng=1), 0.0)

    def test_edge_cases(self):
        self.assertEqual(logistic_sojourn(2, 1, 1, 100, 0.2, 0.2, horizon=10.0, reps=5, z0=10), 1.0)
        self.assertEqual(logistic_sojourn(2, 1, 1, 100, 0.2, 0.2, horizon=0.0, reps=5), 0.0)
        with self.assertRaises(InvalidParametersError):
            logistic_sojourn(1, 2, 1, 100, 0.2, 0.2, horizon=1.0, reps=5)
        with self.assertRaises(InvalidParametersError):
            logistic_sojourn(2, 1, 1, 100, 1.5, 0.2, horizon=1.0, reps=5)

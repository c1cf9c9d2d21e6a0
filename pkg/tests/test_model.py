#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Tests for `sweep_utils.model`."""


import math
import unittest

from sweep_utils.errors import InvalidParametersError, RegimeMismatchError
from sweep_utils.gillespie import PopulationState
from sweep_utils.model import (EVENT_CLASSES, EcoParams, Regime1, Regime2, Regime3, Regime4,
                               aggregate_rates, coexistence_equilibrium, derived_quantities,
                               equilibrium_density, event_rates, ewens_theta, gem_theta, growth_rates,
                               invasion_fitness, mutation_probability, validate_sweep_conditions)

DESK = EcoParams(f_A=2.0, f_a=5.0, D_A=1.0, D_a=1.0, C=((1.0, 1.0), (2.0, 1.0)))


class TestEcoParams(unittest.TestCase):
    """Parameter validation and constructors."""

    def test_rejects_nonpositive_rates(self):
        with self.assertRaises(InvalidParametersError):
            EcoParams(f_A=0.0, f_a=5.0, D_A=1.0, D_a=1.0, C=((1, 1), (2, 1)))
        with self.assertRaises(InvalidParametersError):
            EcoParams(f_A=2.0, f_a=5.0, D_A=0.0, D_a=1.0, C=((1, 1), (2, 1)))
        with self.assertRaises(InvalidParametersError):
            EcoParams(f_A=2.0, f_a=5.0, D_A=1.0, D_a=1.0, C=((1, 1), (-2, 1)))
        with self.assertRaises(InvalidParametersError):
            EcoParams(f_A=2.0, f_a=5.0, D_A=1.0, D_a=1.0, C=((1, 1),))

    def test_from_growth_rates(self):
        params = EcoParams.from_growth_rates(f_A=5, f_a=5, rho_A=3.92, rho_a=2.6, C=((1, 5), (2, 1)),
                                             lambda_Aa=0.05, lambda_aA=0.321)
        self.assertAlmostEqual(params.D_A, 0.83, places=12)
        self.assertAlmostEqual(params.D_a, 0.795, places=12)
        rho_A, rho_a = growth_rates(params, 0.05, 0.321)
        self.assertAlmostEqual(rho_A, 3.92, places=12)
        self.assertAlmostEqual(rho_a, 2.6, places=12)

    def test_from_growth_rates_zero_death(self):
        params = EcoParams.from_growth_rates(f_A=5, f_a=2.19, rho_A=4.075, rho_a=1.02, C=((1, 4.17), (3, 1)),
                                             lambda_Aa=0.185, lambda_aA=0.154)
        self.assertEqual(params.D_A, 0.0)
        self.assertGreater(params.D_a, 0.0)

    def test_swapped_twice_is_identity(self):
        self.assertEqual(DESK.swapped().swapped(), DESK)
        self.assertEqual(DESK.swapped().competition('A', 'a'), DESK.competition('a', 'A'))


class TestRegimes(unittest.TestCase):
    """Per-birth mutation probabilities."""

    def test_regime2(self):
        self.assertEqual(mutation_probability(Regime2(0.5, 0.25), 1000), (0.5 / 1000, 0.25 / 1000))

    def test_regime3(self):
        mu_Aa, mu_aA = mutation_probability(Regime3(1.0, 2.0, 0.5), 10_000)
        self.assertAlmostEqual(mu_Aa, 0.01, places=15)
        self.assertAlmostEqual(mu_aA, 0.02, places=15)

    def test_regime4_independent_of_K(self):
        for K in (10, 1000, 1e6):
            self.assertEqual(mutation_probability(Regime4(0.05, 0.321), K), (0.05, 0.321))

    def test_regime1_default_rate(self):
        K = math.e ** 2
        mu_Aa, _ = mutation_probability(Regime1(), K)
        self.assertAlmostEqual(mu_Aa, 1.0 / (4.0 * K), places=15)
        with self.assertRaises(InvalidParametersError):
            mutation_probability(Regime1(), 1)

    def test_nonincreasing_in_K(self):
        capacities = [10.0 ** k for k in range(1, 7)]
        for regime in (Regime1(), Regime2(0.5, 0.25), Regime3(1.0, 2.0, 0.5)):
            with self.subTest(regime=regime.number):
                probabilities = [mutation_probability(regime, K) for K in capacities]
                for (mu_Aa, mu_aA), (next_Aa, next_aA) in zip(probabilities, probabilities[1:]):
                    self.assertLessEqual(next_Aa, mu_Aa)
                    self.assertLessEqual(next_aA, mu_aA)

    def test_invalid_regimes(self):
        with self.assertRaises(InvalidParametersError):
            Regime4(0.0, 0.5)
        with self.assertRaises(InvalidParametersError):
            Regime3(0.5, 0.5, 1.0)
        with self.assertRaises(InvalidParametersError):
            mutation_probability(Regime2(2000, 0), 1000)
        with self.assertRaises(InvalidParametersError):
            mutation_probability(Regime2(0.5, 0.5), 0.5)


class TestDerived(unittest.TestCase):
    """Equilibria, invasion fitnesses and the GEM parameter."""

    def test_desk_quantities(self):
        self.assertEqual(equilibrium_density(DESK, 'A'), 1.0)
        self.assertEqual(equilibrium_density(DESK, 'a'), 4.0)
        self.assertEqual(invasion_fitness(DESK, 'a'), 2.0)
        self.assertEqual(invasion_fitness(DESK, 'A'), -3.0)
        self.assertTrue(validate_sweep_conditions(DESK))
        derived = derived_quantities(DESK, Regime2(0.5, 0.5))
        self.assertAlmostEqual(derived.s, 0.4)
        self.assertAlmostEqual(derived.theta, 0.2)

    def test_failed_conditions_are_listed(self):
        conditions = validate_sweep_conditions(DESK.swapped())
        self.assertFalse(conditions)
        self.assertEqual(len(conditions.failures), 2)

    def test_label_swap(self):
        derived = derived_quantities(DESK)
        swapped = derived_quantities(DESK.swapped())
        self.assertEqual((swapped.S_aA, swapped.S_Aa), (derived.S_Aa, derived.S_aA))
        self.assertEqual((swapped.n_bar_A, swapped.n_bar_a), (derived.n_bar_a, derived.n_bar_A))
        self.assertEqual((swapped.S_aA, swapped.S_Aa), (-3.0, 2.0))

    def test_gem_theta(self):
        self.assertAlmostEqual(gem_theta(DESK, Regime2(0.5, 0.5)), 0.2)
        self.assertAlmostEqual(ewens_theta(DESK, Regime2(0.5, 0.5)), 0.4)
        with self.assertRaises(RegimeMismatchError):
            gem_theta(DESK, Regime3(0.5, 0.5, 0.5))

    def test_coexistence_equilibrium(self):
        params = EcoParams(f_A=2.0, f_a=2.0, D_A=1.0, D_a=1.0, C=((1.0, 0.5), (0.5, 1.0)))
        n_A, n_a = coexistence_equilibrium(params)
        self.assertAlmostEqual(n_A, 2.0 / 3.0)
        self.assertAlmostEqual(n_a, 2.0 / 3.0)


class TestEventRates(unittest.TestCase):
    """Rates of the event classes at a frozen state."""

    def setUp(self):
        self.state = PopulationState(n_A_ancestral=10, n_A_back=2, families=(3, 1))
        self.rates = event_rates(DESK, Regime2(0.5, 0.5), 100, self.state)

    def test_values(self):
        expected = {
            'A_birth': 19.9,
            'A_back_birth': 3.98,
            'back_mutation': 0.1,
            'new_family': 0.12,
            'a_birth': 19.9,
            'A_death': 11.6,
            'A_back_death': 2.32,
            'a_death': 5.12,
        }
        for name in EVENT_CLASSES:
            self.assertAlmostEqual(self.rates.rates[name], expected[name], places=12, msg=name)

    def test_per_family_rates(self):
        self.assertEqual(len(self.rates.a_birth_per_family), 2)
        self.assertAlmostEqual(sum(self.rates.a_death_per_family), self.rates.rates['a_death'])
        self.assertAlmostEqual(self.rates.a_death_per_capita, 1.28)

    def test_matches_aggregate_rates(self):
        b_A, d_A, b_a, d_a = aggregate_rates(DESK, Regime2(0.5, 0.5), 100, 12, 4)
        r = self.rates.rates
        self.assertAlmostEqual(b_A, r['A_birth'] + r['A_back_birth'] + r['back_mutation'])
        self.assertAlmostEqual(b_a, r['a_birth'] + r['new_family'])
        self.assertAlmostEqual(d_A, r['A_death'] + r['A_back_death'])
        self.assertAlmostEqual(d_a, r['a_death'])

    def test_zero_mutation_has_no_mutation_events(self):
        rates = event_rates(DESK, Regime2(0.0, 0.0), 100, self.state)
        self.assertEqual(rates.rates['new_family'], 0.0)
        self.assertEqual(rates.rates['back_mutation'], 0.0)

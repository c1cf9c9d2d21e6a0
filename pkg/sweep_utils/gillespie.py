# -*- coding: utf-8 -*-

"""Exact event-driven simulation of the two-allele population process.

The state tracks ancestral A individuals, A individuals descending from a
back mutation, and the size of every a-family (all descendants of one
A -> a mutation), oldest first. A sweep runs from a single fresh mutant
until the ancestral A population dies out.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from sweep_utils.bd_oracles import BDRates
from sweep_utils.errors import InvalidParametersError, OrderingError
from sweep_utils.model import (EVENT_CLASSES, equilibrium_density, invasion_fitness,
                               mutation_probability, validate_sweep_conditions)
from sweep_utils.rng import UniformStream, make_rng
from sweep_utils.sum_tree import FamilyTree

logger = logging.getLogger(__name__)

ABSORBED = 'absorbed'
TIME_LIMIT = 'time_limit'

TERMINATIONS = ('fixed', 'a_extinct_cap', 'event_cap', 'time_cap')

(A_BIRTH, A_BACK_BIRTH, BACK_MUTATION, NEW_FAMILY,
 a_BIRTH, A_DEATH, A_BACK_DEATH, a_DEATH) = range(len(EVENT_CLASSES))


class PopulationState:
    """Counts of the three subpopulations plus elapsed time and event tallies."""

    def __init__(self, n_A_ancestral, n_A_back=0, families=(1,), t=0.0):
        if n_A_ancestral < 0 or n_A_back < 0 or any(n < 0 for n in families):
            raise InvalidParametersError('population counts must be nonnegative')
        self.n_A_ancestral = int(n_A_ancestral)
        self.n_A_back = int(n_A_back)
        self.tree = FamilyTree(max(64, len(families)))
        for n in families:
            self.tree.append(int(n))
        self.t = float(t)
        self.tallies = [0] * len(EVENT_CLASSES)

    @property
    def families(self):
        return self.tree.counts()

    @property
    def n_A(self):
        return self.n_A_ancestral + self.n_A_back

    @property
    def n_a(self):
        return self.tree.total()

    def tally_dict(self):
        return dict(zip(EVENT_CLASSES, self.tallies))

    def __repr__(self):
        return (f'PopulationState(n_A_ancestral={self.n_A_ancestral}, n_A_back={self.n_A_back}, '
                f'families={self.families}, t={self.t})')


def default_epsilon(params):
    return 0.05 * min(1.0, equilibrium_density(params, 'A'), equilibrium_density(params, 'a'))


def epsilon_bound(params):
    """Upper bound on epsilon below which the coupling brackets are valid."""
    C = params.C
    return min(equilibrium_density(params, 'a'),
               invasion_fitness(params, 'a') / (2.0 * C[1][0] * C[0][1] / C[0][0] + C[1][1]))


def I_eps_bounds(params, K, epsilon):
    """Interval the total A population must stay in during the first phase."""
    n_A = equilibrium_density(params, 'A')
    half_width = 2.0 * epsilon * params.C[0][1] / params.C[0][0]
    return K * (n_A - half_width), K * (n_A + half_width)


def _check_epsilon(params, epsilon):
    if not epsilon > 0:
        raise InvalidParametersError(f'epsilon must be positive, got {epsilon}')
    if validate_sweep_conditions(params):
        bound = epsilon_bound(params)
        if not epsilon < bound:
            raise InvalidParametersError(f'epsilon = {epsilon} must be below {bound}')


def rescaled_fitness_brackets(params, epsilon):
    """(s_minus, s_plus) around s = S_aA / f_a."""
    C = params.C
    s = invasion_fitness(params, 'a') / params.f_a
    s_minus = s - epsilon * (2.0 * C[1][0] * C[0][1] + C[1][1] * C[0][0]) / (params.f_a * C[0][0])
    s_plus = s + 2.0 * epsilon * C[1][0] * C[0][1] / (params.f_a * C[0][0])
    return s_minus, s_plus


def coupling_brackets(params, regime, K, epsilon):
    """Birth-death processes bounding one a-family from below and above during the first phase."""
    _, mu_aA = mutation_probability(regime, K)
    s_minus, s_plus = rescaled_fitness_brackets(params, epsilon)
    b = params.f_a * (1.0 - mu_aA)
    return BDRates(b=b, d=params.f_a * (1.0 - s_minus)), BDRates(b=b, d=params.f_a * (1.0 - s_plus))


def init_sweep(params, K, force=False):
    """Resident A at floor(n_bar_A K) plus one fresh a mutant."""
    if not K >= 1:
        raise InvalidParametersError(f'K must be at least 1, got {K}')
    if not force:
        conditions = validate_sweep_conditions(params)
        if not conditions:
            raise InvalidParametersError('sweep conditions fail: ' + '; '.join(conditions.failures))
    n_A = math.floor(equilibrium_density(params, 'A') * K)
    if n_A < 0:
        raise InvalidParametersError(f'negative resident equilibrium at K={K}')
    return PopulationState(n_A_ancestral=n_A, n_A_back=0, families=(1,))


class SweepSimulator:
    """Gillespie loop over one ``PopulationState``."""

    def __init__(self, params, regime, K, stream, state):
        mu_Aa, mu_aA = mutation_probability(regime, K)
        C = params.C
        self.params = params
        self.regime = regime
        self.K = K
        self.stream = stream
        self.state = state
        self.mu_Aa = mu_Aa
        self.mu_aA = mu_aA
        self._b_A = (1.0 - mu_Aa) * params.f_A
        self._b_new = mu_Aa * params.f_A
        self._b_back = mu_aA * params.f_a
        self._b_a = (1.0 - mu_aA) * params.f_a
        self._c_AA = C[0][0] / K
        self._c_Aa = C[0][1] / K
        self._c_aA = C[1][0] / K
        self._c_aa = C[1][1] / K

    def rates(self):
        s = self.state
        n_anc = s.n_A_ancestral
        n_back = s.n_A_back
        n_A = n_anc + n_back
        n_a = s.tree.total()
        d_A = self.params.D_A + self._c_AA * n_A + self._c_Aa * n_a
        d_a = self.params.D_a + self._c_aA * n_A + self._c_aa * n_a
        return (self._b_A * n_anc, self._b_A * n_back, self._b_back * n_a, self._b_new * n_A,
                self._b_a * n_a, d_A * n_anc, d_A * n_back, d_a * n_a)

    def choose_event(self, rates, total, u):
        """Index of the event class holding u * total in the cumulative rates."""
        x = u * total
        last = None
        for k, rate in enumerate(rates):
            if rate > 0:
                if x < rate:
                    return k
                x -= rate
                last = k
        return last

    def step(self, t_limit=None):
        """Apply one event; returns its class name, ``ABSORBED`` or ``TIME_LIMIT``.

        With ``t_limit`` set, an event that would occur after ``t_limit`` is
        not applied and the clock stops at ``t_limit``.
        """
        s = self.state
        rates = self.rates()
        total = sum(rates)
        if total <= 0:
            if t_limit is not None:
                s.t = max(s.t, t_limit)
            return ABSORBED
        t_next = s.t + self.stream.exponential(total)
        if t_limit is not None and t_next > t_limit:
            s.t = t_limit
            return TIME_LIMIT
        s.t = t_next
        k = self.choose_event(rates, total, self.stream.next())
        if k == A_BIRTH:
            s.n_A_ancestral += 1
        elif k == A_BACK_BIRTH or k == BACK_MUTATION:
            s.n_A_back += 1
        elif k == NEW_FAMILY:
            s.tree.append(1)
        elif k == a_BIRTH:
            s.tree.add(s.tree.find(self.stream.next()), 1)
        elif k == A_DEATH:
            s.n_A_ancestral -= 1
        elif k == A_BACK_DEATH:
            s.n_A_back -= 1
        else:
            s.tree.add(s.tree.find(self.stream.next()), -1)
        s.tallies[k] += 1
        return EVENT_CLASSES[k]


def step(state, params, regime, K, rng):
    """One event of the process applied to ``state`` in place.

    ``rng`` is a ``UniformStream``. Returns ``(event, state)`` where event is
    ``ABSORBED`` when the total rate is zero.
    """
    return SweepSimulator(params, regime, K, rng, state).step(), state


MAX_EVENTS = 500_000_000


@dataclass(frozen=True)
class SweepCaps:
    epsilon: Optional[float] = None
    max_events: Optional[int] = MAX_EVENTS
    max_time: Optional[float] = None
    max_a_extinctions: Optional[int] = None

    def resolve(self, params, K):
        epsilon = self.epsilon if self.epsilon is not None else default_epsilon(params)
        max_time = self.max_time
        if max_time is None:
            S_aA = invasion_fitness(params, 'a')
            S_Aa = invasion_fitness(params, 'A')
            if S_aA > 0 and S_Aa < 0:
                max_time = 10.0 * math.log(max(K, math.e)) * (1.0 / S_aA + 1.0 / abs(S_Aa))
            else:
                max_time = math.inf
        max_events = MAX_EVENTS if self.max_events is None else int(self.max_events)
        return SweepCaps(epsilon=epsilon, max_events=max_events, max_time=max_time,
                         max_a_extinctions=self.max_a_extinctions)

    def to_dict(self):
        return {'epsilon': self.epsilon, 'max_events': self.max_events,
                'max_time': None if self.max_time == math.inf else self.max_time,
                'max_a_extinctions': self.max_a_extinctions}


@dataclass
class SweepOutcome:
    seed: int
    K: float
    regime: int
    T_eps: Optional[float]
    S_eps: Optional[float]
    T_F: Optional[float]
    spectrum: Tuple[float, ...]
    identity: Optional[float]
    termination: str
    tallies: dict
    events: int
    t_end: float
    n_families: int
    a_extinctions: int = 0
    replicate: Optional[int] = None
    final_counts: dict = field(default_factory=dict)

    def to_record(self):
        record = {
            'type': 'replicate',
            'seed': self.seed,
            'K': self.K,
            'regime': self.regime,
            'T_eps': self.T_eps,
            'S_eps': self.S_eps,
            'T_F': self.T_F,
            'spectrum': list(self.spectrum),
            'identity': self.identity,
            'tallies': dict(self.tallies),
            'termination': self.termination,
            'events': self.events,
            't_end': self.t_end,
            'n_families': self.n_families,
            'a_extinctions': self.a_extinctions,
            'final_counts': dict(self.final_counts),
        }
        if self.replicate is not None:
            record['replicate'] = self.replicate
        return record


def haplotype_spectrum(state):
    """Fractions of the surviving a-families, oldest first."""
    families = state.families if isinstance(state, PopulationState) else list(state)
    n_a = sum(families)
    if n_a == 0:
        return ()
    return tuple(n / n_a for n in families if n > 0)


def pairwise_identity(state):
    """Probability two a individuals drawn without replacement share a mutational origin."""
    families = state.families if isinstance(state, PopulationState) else list(state)
    n_a = sum(families)
    if n_a < 2:
        raise OrderingError(f'pairwise identity needs at least two a individuals, got {n_a}')
    return sum(n * (n - 1) for n in families) / (n_a * (n_a - 1))


def run_sweep(params, regime, K, seed, caps=None, force=False):
    """Simulate one sweep from a single mutant until the ancestral A population dies out.

    Cap exhaustion is reported in ``termination``; stopping times that were
    not reached are ``None``.
    """
    caps = (caps or SweepCaps()).resolve(params, K)
    _check_epsilon(params, caps.epsilon)
    state = init_sweep(params, K, force=force)
    sim = SweepSimulator(params, regime, K, UniformStream(make_rng(seed)), state)
    threshold = max(1, math.floor(caps.epsilon * K))
    lo, hi = I_eps_bounds(params, K, caps.epsilon)

    T_eps = 0.0 if state.n_a >= threshold else None
    S_eps = 0.0 if not lo <= state.n_A <= hi else None
    T_F = None
    a_extinctions = 0
    events = 0
    termination = None
    while termination is None:
        if state.n_A_ancestral == 0:
            T_F = state.t
            termination = 'fixed'
            break
        if events >= caps.max_events:
            termination = 'event_cap'
            break
        event = sim.step(t_limit=caps.max_time)
        if event == TIME_LIMIT:
            termination = 'time_cap'
            break
        if event == ABSORBED:
            termination = 'a_extinct_cap'
            break
        events += 1
        k = EVENT_CLASSES.index(event)
        if k in (a_BIRTH, NEW_FAMILY):
            if T_eps is None and state.tree.total() >= threshold:
                T_eps = state.t
        elif k == a_DEATH and state.tree.total() == 0:
            a_extinctions += 1
            if sim.mu_Aa == 0 or state.n_A == 0:
                termination = 'a_extinct_cap'
            elif caps.max_a_extinctions is not None and a_extinctions > caps.max_a_extinctions:
                termination = 'a_extinct_cap'
        if S_eps is None and k != a_BIRTH and k != a_DEATH and k != NEW_FAMILY:
            n_A = state.n_A_ancestral + state.n_A_back
            if n_A < lo or n_A > hi:
                S_eps = state.t

    spectrum = haplotype_spectrum(state)
    identity = pairwise_identity(state) if state.n_a >= 2 else None
    logger.debug('sweep seed=%d K=%r ended by %s at t=%r after %d events',
                 seed, K, termination, state.t, events)
    return SweepOutcome(
        seed=seed,
        K=K,
        regime=regime.number,
        T_eps=T_eps,
        S_eps=S_eps,
        T_F=T_F,
        spectrum=spectrum,
        identity=identity,
        termination=termination,
        tallies=state.tally_dict(),
        events=events,
        t_end=state.t,
        n_families=len(state.tree),
        a_extinctions=a_extinctions,
        final_counts={'n_A_ancestral': state.n_A_ancestral, 'n_A_back': state.n_A_back,
                      'n_a': state.n_a},
    )


@dataclass(frozen=True)
class FirstPhaseOutcome:
    outcome: str
    time: float
    threshold: int
    left_interval: bool
    events: int


def run_first_phase(params, regime, K, seed, epsilon=None, max_events=10_000_000):
    """Follow the first a-family until it reaches floor(epsilon K) or dies out.

    ``outcome`` is ``'hit'``, ``'extinct'`` or ``'event_cap'``;
    ``left_interval`` records whether the A population left its first-phase
    interval on the way.
    """
    epsilon = epsilon if epsilon is not None else default_epsilon(params)
    _check_epsilon(params, epsilon)
    state = init_sweep(params, K)
    sim = SweepSimulator(params, regime, K, UniformStream(make_rng(seed)), state)
    threshold = max(1, math.floor(epsilon * K))
    lo, hi = I_eps_bounds(params, K, epsilon)
    left = False
    events = 0
    tree = state.tree
    while True:
        first = tree.count(0)
        if first >= threshold:
            return FirstPhaseOutcome('hit', state.t, threshold, left, events)
        if first == 0:
            return FirstPhaseOutcome('extinct', state.t, threshold, left, events)
        if events >= max_events:
            return FirstPhaseOutcome('event_cap', state.t, threshold, left, events)
        sim.step()
        events += 1
        n_A = state.n_A_ancestral + state.n_A_back
        if n_A < lo or n_A > hi:
            left = True


def run_trajectory(params, regime, K, seed, z0, sample_times, max_events=100_000_000):
    """Rescaled path (t, N_A / K, N_a / K) sampled at ``sample_times``.

    Starts from floor(z_A K) ancestral A individuals and one a-family of size
    floor(z_a K).
    """
    times = [float(t) for t in sample_times]
    if any(b < a for a, b in zip(times, times[1:])) or (times and times[0] < 0):
        raise InvalidParametersError('sample times must be nonnegative and nondecreasing')
    n_a0 = math.floor(z0[1] * K)
    state = PopulationState(n_A_ancestral=math.floor(z0[0] * K), families=(n_a0,) if n_a0 else ())
    sim = SweepSimulator(params, regime, K, UniformStream(make_rng(seed)), state)
    rows = []
    events = 0
    for t in times:
        while events < max_events:
            event = sim.step(t_limit=t)
            if event == TIME_LIMIT or event == ABSORBED:
                break
            events += 1
        else:
            logger.warning('trajectory stopped by the event cap at t=%r', state.t)
            break
        rows.append((t, state.n_A / K, state.n_a / K))
    return np.array(rows, dtype=float).reshape(-1, 3)

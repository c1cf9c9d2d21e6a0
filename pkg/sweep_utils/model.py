# -*- coding: utf-8 -*-

"""Ecological parameters, mutation regimes and the closed-form quantities
derived from them.

Alleles are labelled ``'A'`` (resident) and ``'a'`` (mutant). The
competition kernel ``C`` is indexed ``C[alpha][alpha']`` with index 0 for
``A`` and 1 for ``a``: ``C[0][1]`` is the impact of one ``a`` individual on
an ``A`` individual (C_{A,a}).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

from sweep_utils.errors import InvalidParametersError, RegimeMismatchError

logger = logging.getLogger(__name__)

ALLELES = ('A', 'a')
_INDEX = {'A': 0, 'a': 1}

# Event classes of the population process, in the order the simulator
# stores its rates and tallies.
EVENT_CLASSES = (
    'A_birth',          # clonal birth of an ancestral A
    'A_back_birth',     # clonal birth of a back-mutant A
    'back_mutation',    # a parent, A child (credited to back-mutant A)
    'new_family',       # A parent, a child founding a new family
    'a_birth',          # clonal a birth inside a family
    'A_death',
    'A_back_death',
    'a_death',
)


def _other(allele):
    return 'a' if allele == 'A' else 'A'


def _check_allele(allele):
    if allele not in _INDEX:
        raise InvalidParametersError(f'unknown allele {allele!r}, expected one of {ALLELES}')
    return _INDEX[allele]


@dataclass(frozen=True)
class EcoParams:
    f_A: float
    f_a: float
    D_A: float
    D_a: float
    C: Tuple[Tuple[float, float], Tuple[float, float]]
    K: float = 1.0
    # parameters built from growth rates may carry a zero intrinsic death rate
    zero_death_ok: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        C = tuple(tuple(float(c) for c in row) for row in self.C)
        if len(C) != 2 or any(len(row) != 2 for row in C):
            raise InvalidParametersError('competition kernel C must be 2x2')
        object.__setattr__(self, 'C', C)
        for name in ('f_A', 'f_a'):
            if not getattr(self, name) > 0:
                raise InvalidParametersError(f'{name} must be strictly positive, got {getattr(self, name)}')
        for name in ('D_A', 'D_a'):
            value = getattr(self, name)
            if not (value > 0 or (self.zero_death_ok and value == 0)):
                raise InvalidParametersError(f'{name} must be strictly positive, got {value}')
        for i, row in enumerate(C):
            for j, c in enumerate(row):
                if not c > 0:
                    raise InvalidParametersError(f'C[{i}][{j}] must be strictly positive, got {c}')
        if not self.K > 0:
            raise InvalidParametersError(f'K must be positive, got {self.K}')

    @classmethod
    def from_growth_rates(cls, f_A, f_a, rho_A, rho_a, C, lambda_Aa, lambda_aA, K=1.0):
        """Build parameters from (f, rho) pairs, solving D = f(1 - lambda) - rho.

        A death rate within rounding of zero is set to exactly zero.
        """
        D_A = f_A * (1.0 - lambda_Aa) - rho_A
        D_a = f_a * (1.0 - lambda_aA) - rho_a
        if abs(D_A) <= 1e-12 * f_A:
            D_A = 0.0
        if abs(D_a) <= 1e-12 * f_a:
            D_a = 0.0
        logger.debug('intrinsic death rates from growth rates: D_A=%r D_a=%r', D_A, D_a)
        return cls(f_A=f_A, f_a=f_a, D_A=D_A, D_a=D_a, C=C, K=K, zero_death_ok=True)

    def fertility(self, allele):
        return self.f_A if _check_allele(allele) == 0 else self.f_a

    def death(self, allele):
        return self.D_A if _check_allele(allele) == 0 else self.D_a

    def competition(self, allele, other):
        return self.C[_check_allele(allele)][_check_allele(other)]

    def swapped(self):
        """Exchange the roles of the two alleles."""
        C = self.C
        return EcoParams(f_A=self.f_a, f_a=self.f_A, D_A=self.D_a, D_a=self.D_A,
                         C=((C[1][1], C[1][0]), (C[0][1], C[0][0])), K=self.K,
                         zero_death_ok=self.zero_death_ok)

    def to_dict(self):
        return {'f_A': self.f_A, 'f_a': self.f_a, 'D_A': self.D_A, 'D_a': self.D_a,
                'C': [list(row) for row in self.C], 'K': self.K}


def _check_probability(value, name, K):
    if not 0.0 <= value <= 1.0 or math.isnan(value):
        raise InvalidParametersError(f'{name} = {value} at K={K} is not a probability')
    return value


def _default_weak_rate(K):
    return 1.0 / (K * math.log(K) ** 2)


@dataclass(frozen=True)
class Regime1:
    """Rare mutations: mu = lambda * rate(K), rate(K) = o(1 / (K log K))."""

    lambda_Aa: float = 1.0
    lambda_aA: float = 1.0
    rate: Optional[Callable[[float], float]] = field(default=None, compare=False)
    number = 1

    def probabilities(self, K):
        if K <= 1:
            raise InvalidParametersError(f'regime 1 needs K > 1, got {K}')
        base = (self.rate or _default_weak_rate)(K)
        return self.lambda_Aa * base, self.lambda_aA * base

    def to_dict(self):
        return {'variant': 1, 'lambda_Aa': self.lambda_Aa, 'lambda_aA': self.lambda_aA}


@dataclass(frozen=True)
class Regime2:
    """mu = lambda / K."""

    lambda_Aa: float
    lambda_aA: float
    number = 2

    def __post_init__(self):
        if self.lambda_Aa < 0 or self.lambda_aA < 0:
            raise InvalidParametersError('regime 2 mutation constants must be nonnegative')

    def probabilities(self, K):
        return self.lambda_Aa / K, self.lambda_aA / K

    def to_dict(self):
        return {'variant': 2, 'lambda_Aa': self.lambda_Aa, 'lambda_aA': self.lambda_aA}


@dataclass(frozen=True)
class Regime3:
    """mu = lambda * K**(beta - 1), 0 < beta < 1."""

    lambda_Aa: float
    lambda_aA: float
    beta: float
    number = 3

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise InvalidParametersError(f'regime 3 needs 0 < beta < 1, got {self.beta}')
        if self.lambda_Aa < 0 or self.lambda_aA < 0:
            raise InvalidParametersError('regime 3 mutation constants must be nonnegative')

    def probabilities(self, K):
        scale = K ** (-1.0 + self.beta)
        return self.lambda_Aa * scale, self.lambda_aA * scale

    def to_dict(self):
        return {'variant': 3, 'lambda_Aa': self.lambda_Aa, 'lambda_aA': self.lambda_aA,
                'beta': self.beta}


@dataclass(frozen=True)
class Regime4:
    """Frequent mutations: mu = lambda, independent of K."""

    lambda_Aa: float
    lambda_aA: float
    number = 4

    def __post_init__(self):
        for name in ('lambda_Aa', 'lambda_aA'):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise InvalidParametersError(f'regime 4 needs 0 < {name} < 1, got {value}')

    def probabilities(self, K):
        return self.lambda_Aa, self.lambda_aA

    def to_dict(self):
        return {'variant': 4, 'lambda_Aa': self.lambda_Aa, 'lambda_aA': self.lambda_aA}


REGIMES = {1: Regime1, 2: Regime2, 3: Regime3, 4: Regime4}


def mutation_probability(regime, K):
    """Per-birth mutation probabilities (mu_Aa, mu_aA) at carrying capacity K."""
    if K < 1:
        raise InvalidParametersError(f'K must be at least 1, got {K}')
    mu_Aa, mu_aA = regime.probabilities(K)
    return _check_probability(mu_Aa, 'mu_Aa', K), _check_probability(mu_aA, 'mu_aA', K)


def equilibrium_density(params, allele):
    i = _check_allele(allele)
    return (params.fertility(allele) - params.death(allele)) / params.C[i][i]


def invasion_fitness(params, allele):
    """Growth rate of a rare ``allele`` mutant in a resident population at equilibrium."""
    other = _other(allele)
    return (params.fertility(allele) - params.death(allele)
            - params.competition(allele, other) * equilibrium_density(params, other))


@dataclass(frozen=True)
class SweepConditions:
    valid: bool
    failures: Tuple[str, ...]

    def __bool__(self):
        return self.valid


def validate_sweep_conditions(params):
    failures = []
    n_A = equilibrium_density(params, 'A')
    n_a = equilibrium_density(params, 'a')
    S_aA = invasion_fitness(params, 'a')
    S_Aa = invasion_fitness(params, 'A')
    if not n_A > 0:
        failures.append(f'n_bar_A = {n_A} is not positive')
    if not n_a > 0:
        failures.append(f'n_bar_a = {n_a} is not positive')
    if not S_aA > 0:
        failures.append(f'S_aA = {S_aA} is not positive')
    if not S_Aa < 0:
        failures.append(f'S_Aa = {S_Aa} is not negative')
    return SweepConditions(valid=not failures, failures=tuple(failures))


def growth_rates(params, lambda_Aa, lambda_aA):
    """Mutation-discounted growth rates (rho_A, rho_a)."""
    return (params.f_A * (1.0 - lambda_Aa) - params.D_A,
            params.f_a * (1.0 - lambda_aA) - params.D_a)


def gem_theta(params, regime):
    """GEM parameter f_A * n_bar_A * lambda_Aa / f_a of the regime-2 haplotype spectrum.

    The rate of new a-families is proportional to mu_Aa, so lambda_Aa is
    used; the value computed with lambda_aA is logged for comparison.
    """
    if not isinstance(regime, Regime2):
        raise RegimeMismatchError(f'the GEM parameter is defined for regime 2, got regime {regime.number}')
    n_A = equilibrium_density(params, 'A')
    theta = params.f_A * n_A * regime.lambda_Aa / params.f_a
    logger.debug('theta with lambda_Aa=%r, with lambda_aA=%r',
                 theta, params.f_A * n_A * regime.lambda_aA / params.f_a)
    return theta


def ewens_theta(params, regime):
    return 2.0 * gem_theta(params, regime)


@dataclass(frozen=True)
class DerivedQuantities:
    n_bar_A: float
    n_bar_a: float
    S_aA: float
    S_Aa: float
    s: float
    rho_A: Optional[float] = None
    rho_a: Optional[float] = None
    theta: Optional[float] = None
    theta_back: Optional[float] = None

    def to_dict(self):
        return dict(self.__dict__)


def derived_quantities(params, regime=None):
    S_aA = invasion_fitness(params, 'a')
    rho_A = rho_a = theta = theta_back = None
    if isinstance(regime, Regime4):
        rho_A, rho_a = growth_rates(params, regime.lambda_Aa, regime.lambda_aA)
    if isinstance(regime, Regime2):
        theta = gem_theta(params, regime)
        theta_back = params.f_A * equilibrium_density(params, 'A') * regime.lambda_aA / params.f_a
    return DerivedQuantities(
        n_bar_A=equilibrium_density(params, 'A'),
        n_bar_a=equilibrium_density(params, 'a'),
        S_aA=S_aA,
        S_Aa=invasion_fitness(params, 'A'),
        s=S_aA / params.f_a,
        rho_A=rho_A,
        rho_a=rho_a,
        theta=theta,
        theta_back=theta_back,
    )


def coexistence_equilibrium(params):
    """Interior equilibrium of the Lotka-Volterra system without mutation."""
    C = params.C
    det = C[0][0] * C[1][1] - C[0][1] * C[1][0]
    if det == 0:
        raise InvalidParametersError('singular competition kernel, no isolated coexistence equilibrium')
    r_A = params.f_A - params.D_A
    r_a = params.f_a - params.D_a
    return ((C[1][1] * r_A - C[0][1] * r_a) / det,
            (C[0][0] * r_a - C[1][0] * r_A) / det)


@dataclass(frozen=True)
class RateTable:
    """Rates of every event class at one population state."""

    rates: dict
    a_birth_per_family: Tuple[float, ...]
    a_death_per_family: Tuple[float, ...]
    A_death_per_capita: float
    a_death_per_capita: float

    @property
    def total(self):
        return math.fsum(self.rates.values())

    def as_tuple(self):
        return tuple(self.rates[name] for name in EVENT_CLASSES)


def event_rates(params, regime, K, state):
    """Rate of every event class of the process at ``state``.

    ``state`` needs ``n_A_ancestral``, ``n_A_back`` and ``families``.
    """
    mu_Aa, mu_aA = mutation_probability(regime, K)
    n_anc = state.n_A_ancestral
    n_back = state.n_A_back
    families = tuple(state.families)
    if n_anc < 0 or n_back < 0 or any(n < 0 for n in families):
        raise InvalidParametersError('population counts must be nonnegative')
    n_A = n_anc + n_back
    n_a = sum(families)
    C = params.C
    dA = params.D_A + (C[0][0] * n_A + C[0][1] * n_a) / K
    da = params.D_a + (C[1][0] * n_A + C[1][1] * n_a) / K
    clonal_a = (1.0 - mu_aA) * params.f_a
    rates = {
        'A_birth': (1.0 - mu_Aa) * params.f_A * n_anc,
        'A_back_birth': (1.0 - mu_Aa) * params.f_A * n_back,
        'back_mutation': mu_aA * params.f_a * n_a,
        'new_family': mu_Aa * params.f_A * n_A,
        'a_birth': clonal_a * n_a,
        'A_death': dA * n_anc,
        'A_back_death': dA * n_back,
        'a_death': da * n_a,
    }
    return RateTable(
        rates=rates,
        a_birth_per_family=tuple(clonal_a * n for n in families),
        a_death_per_family=tuple(da * n for n in families),
        A_death_per_capita=dA,
        a_death_per_capita=da,
    )


def aggregate_rates(params, regime, K, n_A, n_a):
    """(b_A, d_A, b_a, d_a) from the population-level birth and death formulas."""
    mu_Aa, mu_aA = mutation_probability(regime, K)
    C = params.C
    b_A = (1.0 - mu_Aa) * params.f_A * n_A + mu_aA * params.f_a * n_a
    b_a = (1.0 - mu_aA) * params.f_a * n_a + mu_Aa * params.f_A * n_A
    d_A = (params.D_A + C[0][0] * n_A / K + C[0][1] * n_a / K) * n_A
    d_a = (params.D_a + C[1][0] * n_A / K + C[1][1] * n_a / K) * n_a
    return b_A, d_A, b_a, d_a

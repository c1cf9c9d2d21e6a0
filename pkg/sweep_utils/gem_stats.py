# -*- coding: utf-8 -*-

"""GEM stick-breaking samples and haplotype-spectrum statistics."""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from sweep_utils.errors import InvalidParametersError, RegimeMismatchError
from sweep_utils.model import Regime1, Regime2, Regime3, gem_theta
from sweep_utils.rng import UniformStream, make_rng

logger = logging.getLogger(__name__)

MAX_STICKS = 100_000


@dataclass(frozen=True)
class GEMSample:
    weights: tuple
    residual: float

    @property
    def first(self):
        return self.weights[0]

    def identity(self):
        return math.fsum(w * w for w in self.weights)


def gem_sample(theta, rng, tail_tol=1e-6, max_sticks=MAX_STICKS):
    """Stick-breaking draw of GEM(theta), B_i = 1 - U**(1/theta) by inversion.

    Stops once the unassigned mass drops below ``tail_tol`` or after
    ``max_sticks`` sticks.
    """
    if not theta > 0:
        raise InvalidParametersError(f'GEM parameter must be positive, got {theta}')
    if not 0 < tail_tol < 1:
        raise InvalidParametersError(f'tail tolerance must lie in (0, 1), got {tail_tol}')
    stream = rng if isinstance(rng, UniformStream) else UniformStream(
        rng if isinstance(rng, np.random.Generator) else make_rng(rng))
    inv_theta = 1.0 / theta
    weights = []
    remaining = 1.0
    while remaining >= tail_tol and len(weights) < max_sticks:
        # 1 - u lies in (0, 1]
        stick = -math.expm1(inv_theta * math.log1p(-stream.next()))
        if stick <= 0.0:
            continue
        weight = remaining * stick
        if weight <= 0.0:
            break
        weights.append(weight)
        remaining -= weight
    if remaining >= tail_tol:
        logger.debug('GEM(%r) draw truncated at %d sticks, residual %r', theta, len(weights), remaining)
    return GEMSample(weights=tuple(weights), residual=max(remaining, 0.0))


@dataclass(frozen=True)
class IdentityPrediction:
    """Identity-by-descent probability of two sampled a individuals, both candidate formulas."""

    theta: float
    gem: float
    doubled: float

    def to_dict(self):
        return {'theta': self.theta, 'gem': self.gem, 'doubled': self.doubled}


def gem_identity_prob(theta):
    """GEM(theta) value 1/(1+theta) and the doubled-parameter value 1/(1+2 theta)."""
    if theta < 0:
        raise InvalidParametersError(f'GEM parameter must be nonnegative, got {theta}')
    return IdentityPrediction(theta=theta, gem=1.0 / (1.0 + theta), doubled=1.0 / (1.0 + 2.0 * theta))


def identity_limit(params, regime):
    """Large-K identity probability for the rare and intermediate mutation regimes."""
    if isinstance(regime, Regime1):
        return IdentityPrediction(theta=0.0, gem=1.0, doubled=1.0)
    if isinstance(regime, Regime2):
        return gem_identity_prob(gem_theta(params, regime))
    if isinstance(regime, Regime3):
        return IdentityPrediction(theta=math.inf, gem=0.0, doubled=0.0)
    raise RegimeMismatchError(f'no haplotype-spectrum limit for regime {regime.number}')


@dataclass(frozen=True)
class SpectrumSummary:
    n: int
    mean_first: float
    mean_largest: float
    mean_identity: float
    identity_se: float
    mean_families: float
    first_ecdf: tuple
    age_ordered_mean: tuple
    rank_ordered_mean: tuple

    def to_dict(self):
        return {
            'n': self.n,
            'mean_first': self.mean_first,
            'mean_largest': self.mean_largest,
            'mean_identity': self.mean_identity,
            'identity_se': self.identity_se,
            'mean_families': self.mean_families,
            'first_ecdf': [list(p) for p in self.first_ecdf],
            'age_ordered_mean': list(self.age_ordered_mean),
            'rank_ordered_mean': list(self.rank_ordered_mean),
        }


def _padded_mean(rows, width):
    table = np.zeros((len(rows), width))
    for i, row in enumerate(rows):
        table[i, :len(row)] = row[:width]
    return tuple(table.mean(axis=0).tolist())


def spectrum_summary(spectra, width=20):
    """Replicate statistics of age-ordered family fractions.

    Identity here is sum p_i**2, two draws with replacement.
    """
    spectra = [tuple(s) for s in spectra]
    if not spectra:
        raise InvalidParametersError('no spectra to summarise')
    for s in spectra:
        if not s or abs(math.fsum(s) - 1.0) > 1e-9:
            raise InvalidParametersError(f'spectrum does not sum to 1: {s[:5]}')
    n = len(spectra)
    first = np.array([s[0] for s in spectra])
    identity = np.array([math.fsum(p * p for p in s) for s in spectra])
    xs = np.sort(first)
    ecdf = tuple((float(x), (i + 1) / n) for i, x in enumerate(xs))
    return SpectrumSummary(
        n=n,
        mean_first=float(first.mean()),
        mean_largest=float(np.mean([max(s) for s in spectra])),
        mean_identity=float(identity.mean()),
        identity_se=float(identity.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0,
        mean_families=float(np.mean([len(s) for s in spectra])),
        first_ecdf=ecdf,
        age_ordered_mean=_padded_mean(spectra, width),
        rank_ordered_mean=_padded_mean([sorted(s, reverse=True) for s in spectra], width),
    )


def first_stick_ks(samples, theta):
    """Kolmogorov-Smirnov test of first weights against Beta(1, theta)."""
    firsts = [s.first if isinstance(s, GEMSample) else float(s[0]) if isinstance(s, (tuple, list)) else float(s)
              for s in samples]
    return stats.kstest(firsts, stats.beta(1.0, theta).cdf)


@dataclass(frozen=True)
class Adjudication:
    measured: float
    se: float
    predictions: dict
    within: dict
    verdict: str

    def to_dict(self):
        return {'measured': self.measured, 'se': self.se, 'predictions': dict(self.predictions),
                'within_3se': dict(self.within), 'verdict': self.verdict}


def adjudicate(measured, se, theta, width=3.0):
    """Which identity prediction a measured mean lies within ``width`` standard errors of."""
    prediction = gem_identity_prob(theta)
    predictions = {'gem': prediction.gem, 'doubled': prediction.doubled}
    within = {name: abs(measured - value) <= width * se for name, value in predictions.items()}
    if within['gem'] and within['doubled']:
        verdict = 'both'
    elif within['gem']:
        verdict = 'gem'
    elif within['doubled']:
        verdict = 'doubled'
    else:
        verdict = 'neither'
    return Adjudication(measured=measured, se=se, predictions=predictions, within=within, verdict=verdict)

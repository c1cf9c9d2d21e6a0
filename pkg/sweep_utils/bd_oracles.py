# -*- coding: utf-8 -*-

"""Birth-death process analytics and small exact simulators.

These serve as independent checks of the sweep simulator: hitting and
extinction probabilities, the logarithmic growth of hitting times, a
birth-death process with immigration whose family sizes follow a GEM law,
the shared-noise coupling of two close birth-death processes and the
sojourn of a logistic process near its equilibrium.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from sweep_utils.errors import InvalidParametersError, OrderingError
from sweep_utils.rng import UniformStream, make_rng
from sweep_utils.sum_tree import FamilyTree

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BDRates:
    """Per-capita rates; the death rate of a population of n is (d + c n / K) n."""

    b: float
    d: float
    immigration: float = 0.0
    c: float = 0.0
    K: Optional[float] = None

    def __post_init__(self):
        if self.b < 0 or self.d < 0 or self.immigration < 0 or self.c < 0:
            raise InvalidParametersError('birth-death rates must be nonnegative')
        if self.b == 0 and self.d == 0 and self.immigration == 0:
            raise InvalidParametersError('birth and death rates are both zero')
        if self.c > 0 and not (self.K and self.K > 0):
            raise InvalidParametersError('a logistic death term needs a positive K')

    def death_rate(self, n):
        if self.c:
            return (self.d + self.c * n / self.K) * n
        return self.d * n


def _stream(rng):
    if isinstance(rng, UniformStream):
        return rng
    if isinstance(rng, np.random.Generator):
        return UniformStream(rng)
    return UniformStream(make_rng(rng))


def _one_minus_power(ratio, n):
    """1 - ratio**n without cancellation for ratio near 1."""
    if ratio == 0:
        return 1.0
    return -math.expm1(n * math.log(ratio))


def bd_hitting_prob(b, d, i, j, k):
    """Probability that a birth-death process started at j reaches k before i.

    ``k`` may be ``math.inf``, giving the probability of never reaching i.
    """
    if not i <= j <= k or i == k:
        raise OrderingError(f'need i <= j <= k with i < k, got i={i}, j={j}, k={k}')
    if b <= 0 or d < 0:
        raise InvalidParametersError(f'need b > 0 and d >= 0, got b={b}, d={d}')
    if j == i:
        return 0.0
    if j == k:
        return 1.0
    ratio = d / b
    if k == math.inf:
        return _one_minus_power(ratio, j - i) if ratio < 1 else 0.0
    if ratio == 1:
        return (j - i) / (k - i)
    if ratio > 1:
        # (r^(j-i) - 1) / (r^(k-i) - 1), rescaled to avoid overflow
        log_r = math.log(ratio)
        return math.exp((j - k) * log_r) * (-math.expm1(-(j - i) * log_r)) / (-math.expm1(-(k - i) * log_r))
    return _one_minus_power(ratio, j - i) / _one_minus_power(ratio, k - i)


def bd_survival_prob(b, d, i=1):
    """Probability that a process started from i never dies out."""
    return bd_hitting_prob(b, d, 0, i, math.inf) if i > 0 else 0.0


def bd_extinction_cdf(b, d, i, t):
    """P_i(T_0 <= t) for a linear birth-death process with b != d."""
    if b == d:
        raise InvalidParametersError('the extinction time distribution is only available for b != d')
    if i < 0 or t < 0:
        raise InvalidParametersError(f'need i >= 0 and t >= 0, got i={i}, t={t}')
    if i == 0:
        return 1.0
    if t == math.inf:
        return (d / b) ** i if b > d else 1.0
    e = math.exp((d - b) * t)
    if e == math.inf:
        return 1.0
    return (d * (1.0 - e) / (b - d * e)) ** i


def bd_hitting_time_slope(b, d):
    """Almost sure limit of T_N / log N on survival, 1 / (b - d)."""
    if not 0 <= d < b:
        raise InvalidParametersError(f'need a supercritical process 0 <= d < b, got b={b}, d={d}')
    return 1.0 / (b - d)


@dataclass(frozen=True)
class BDStop:
    """Stopping rules of ``simulate_bd``; the first one met ends the run."""

    t_max: float = math.inf
    upper: Optional[int] = None
    lower: Optional[int] = None
    max_events: int = 10_000_000
    sample_times: Optional[tuple] = None
    track_families: bool = False


@dataclass
class BDRecord:
    z: int
    t: float
    reason: str
    events: int
    hit_time: Optional[float] = None
    samples: Optional[np.ndarray] = None
    families: Optional[list] = None
    n_immigrants: int = 0


def simulate_bd(rates, z0, stop=None, rng=None):
    """Exact simulation of a birth-death process, optionally with immigration and logistic deaths.

    ``reason`` is one of ``'extinct'``, ``'upper'``, ``'lower'``, ``'t_max'``
    or ``'event_cap'``. Immigrants found families of size one; the ``z0``
    initial individuals form family 0. ``samples`` holds (t, z) rows at
    ``stop.sample_times``.
    """
    if z0 < 0:
        raise InvalidParametersError(f'initial size must be nonnegative, got {z0}')
    stop = stop or BDStop()
    stream = _stream(rng)
    track = stop.track_families or rates.immigration > 0
    tree = None
    if track:
        tree = FamilyTree()
        if z0 > 0:
            tree.append(z0)
    sample_times = list(stop.sample_times) if stop.sample_times is not None else []
    samples = []
    next_sample = 0

    z = int(z0)
    t = 0.0
    events = 0
    immigrants = 0
    reason = None
    b = rates.b
    imm = rates.immigration
    while reason is None:
        if stop.upper is not None and z >= stop.upper:
            reason = 'upper'
            break
        if stop.lower is not None and z <= stop.lower:
            reason = 'lower'
            break
        birth = b * z
        death = rates.death_rate(z)
        total = birth + death + imm
        if total <= 0:
            reason = 'extinct'
            break
        if events >= stop.max_events:
            reason = 'event_cap'
            break
        t_next = t + stream.exponential(total)
        while next_sample < len(sample_times) and sample_times[next_sample] < t_next:
            if sample_times[next_sample] > stop.t_max:
                break
            samples.append((sample_times[next_sample], z))
            next_sample += 1
        if t_next > stop.t_max:
            t = stop.t_max
            reason = 't_max'
            break
        t = t_next
        x = stream.next() * total
        events += 1
        if x < birth:
            z += 1
            if track:
                tree.add(tree.find(stream.next()), 1)
        elif x < birth + death:
            z -= 1
            if track:
                tree.add(tree.find(stream.next()), -1)
        else:
            z += 1
            immigrants += 1
            tree.append(1)

    while next_sample < len(sample_times) and sample_times[next_sample] <= stop.t_max:
        # population is frozen after absorption; no sample beyond t_max
        if reason in ('t_max', 'extinct') or sample_times[next_sample] <= t:
            samples.append((sample_times[next_sample], z))
            next_sample += 1
        else:
            break

    return BDRecord(
        z=z,
        t=t,
        reason=reason,
        events=events,
        hit_time=t if reason in ('upper', 'lower', 'extinct') else None,
        samples=np.array(samples, dtype=float).reshape(-1, 2) if stop.sample_times is not None else None,
        families=tree.counts() if track else None,
        n_immigrants=immigrants,
    )


def gem_oracle_families(imm_rate, b, d, t, rng, seed_family=True):
    """Surviving-family fractions, oldest first, of a birth-death process with immigration at time t.

    Each immigrant founds a new family; with ``seed_family`` one family of
    size one is present at time 0. Returns ``()`` when nothing survives.
    """
    if not b > d:
        raise InvalidParametersError(f'need a supercritical process b > d, got b={b}, d={d}')
    rates = BDRates(b=b, d=d, immigration=imm_rate)
    record = simulate_bd(rates, 1 if seed_family else 0, BDStop(t_max=t, track_families=True), rng)
    families = record.families
    total = sum(families)
    if total == 0:
        return ()
    return tuple(n / total for n in families if n > 0)


@dataclass(frozen=True)
class CouplingReport:
    """Empirical sup over sample times of E[(M_1 - M_2)^2], M_i = Z_i exp(-(b_i - d_i) t)."""

    sup_second_moment: float
    times: tuple
    second_moments: tuple
    intermediate_bound: Optional[float]
    reps: int
    gap: float
    capped: int = 0

    def to_dict(self):
        return {'sup_second_moment': self.sup_second_moment, 'times': list(self.times),
                'second_moments': list(self.second_moments),
                'intermediate_bound': self.intermediate_bound, 'reps': self.reps, 'gap': self.gap,
                'capped': self.capped}


def _coupled_run(rates, horizon, times, stream, max_events):
    """Processes driven by one pair of Poisson measures (births, deaths) by thinning.

    Returns the counts at ``times`` and whether ``max_events`` froze the
    processes before the last sample time.
    """
    z = [1] * len(rates)
    out = np.zeros((len(times), len(rates)))
    t = 0.0
    k = 0
    events = 0
    capped = False
    while k < len(times):
        births = [b * n for (b, _), n in zip(rates, z)]
        deaths = [d * n for (_, d), n in zip(rates, z)]
        b_max = max(births)
        d_max = max(deaths)
        total = b_max + d_max
        if total > 0 and events >= max_events:
            capped = True
            t_next = math.inf
        else:
            t_next = t + stream.exponential(total) if total > 0 else math.inf
        while k < len(times) and times[k] < t_next:
            out[k] = z
            k += 1
        if k == len(times) or t_next > horizon:
            break
        t = t_next
        events += 1
        x = stream.next() * total
        if x < b_max:
            z = [n + 1 if x < rate else n for n, rate in zip(z, births)]
        else:
            x -= b_max
            z = [n - 1 if x < rate else n for n, rate in zip(z, deaths)]
    return out, capped


def coupled_bd_pair(b1, d1, b2, d2, horizon, reps, rng=0, n_times=21, max_events=1_000_000):
    """Couple two birth-death processes started from 1 through shared event streams.

    When the rate pairs are ordered componentwise, a third process with
    rates (max b, min d) dominating both is run on the same streams and the
    bound 2E(M_3 - M_1)^2 + 2E(M_3 - M_2)^2 is reported too.
    """
    for value in (b1, d1, b2, d2):
        if value < 0:
            raise InvalidParametersError('birth-death rates must be nonnegative')
    if reps < 1 or horizon < 0:
        raise InvalidParametersError(f'need reps >= 1 and horizon >= 0, got reps={reps}, horizon={horizon}')
    stream = _stream(rng)
    times = tuple(np.linspace(0.0, horizon, n_times).tolist())
    identical = (b1, d1) == (b2, d2)
    monotone = not identical and (b1 - b2) * (d1 - d2) >= 0
    rates = [(b1, d1), (b2, d2)]
    if monotone:
        rates.append((max(b1, b2), min(d1, d2)))
    growth = np.array([b - d for b, d in rates])
    decay = np.exp(-np.outer(np.array(times), growth))

    diff2 = np.zeros(len(times))
    bound = np.zeros(len(times))
    capped = 0
    for _ in range(reps):
        counts, frozen = _coupled_run(rates, horizon, times, stream, max_events)
        m = counts * decay
        capped += frozen
        diff2 += (m[:, 0] - m[:, 1]) ** 2
        if monotone:
            bound += 2.0 * (m[:, 2] - m[:, 0]) ** 2 + 2.0 * (m[:, 2] - m[:, 1]) ** 2
    diff2 /= reps
    bound /= reps
    if capped:
        logger.warning('coupling: %d of %d runs hit max_events=%d before t=%r', capped, reps, max_events, horizon)
    return CouplingReport(
        sup_second_moment=float(diff2.max()),
        times=times,
        second_moments=tuple(diff2.tolist()),
        intermediate_bound=float(bound.max()) if monotone else None,
        reps=reps,
        gap=abs(b2 - b1) + abs(d2 - d1),
        capped=capped,
    )


def logistic_sojourn(b, d, c, K, eta1, eta2, horizon, reps, rng=0, z0=None):
    """Fraction of runs leaving [((b - d)/c - eta1) K, ((b - d)/c + eta2) K] before ``horizon``."""
    if not b > d:
        raise InvalidParametersError(f'need b > d, got b={b}, d={d}')
    center = (b - d) / c
    if not 0 < eta1 < center or not eta2 > 0:
        raise InvalidParametersError(f'need 0 < eta1 < {center} and eta2 > 0')
    if reps < 1:
        raise InvalidParametersError(f'need reps >= 1, got {reps}')
    lo = (center - eta1) * K
    hi = (center + eta2) * K
    z_start = int(round(center * K)) if z0 is None else int(z0)
    if not lo <= z_start <= hi:
        return 1.0
    if horizon <= 0:
        return 0.0
    rates = BDRates(b=b, d=d, c=c, K=K)
    # lower/upper are inclusive stops, so shift them just outside the interval
    stop = BDStop(t_max=horizon, lower=math.ceil(lo) - 1, upper=math.floor(hi) + 1)
    stream = _stream(rng)
    exits = 0
    for _ in range(reps):
        record = simulate_bd(rates, z_start, stop, stream)
        if record.reason in ('upper', 'lower', 'extinct'):
            exits += 1
    logger.debug('logistic sojourn: %d of %d runs left the interval', exits, reps)
    return exits / reps

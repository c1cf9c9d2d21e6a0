#!/usr/bin/env python3

'''Run the birth-death oracle checks

run-bd-oracles.py

Python version >= 3.6

Required Python packages:
    numpy
    scipy
    joblib

Features:
    Extinction frequencies of simulated birth-death processes against the closed-form distribution
    Hitting frequencies against the gambler's ruin probabilities
    Hitting times of large sizes against the 1 / (b - d) log N law
    Shared-noise coupling of close processes: moment growth with the rate gap
    Sojourn of a logistic process near its equilibrium
    GEM sampler and the birth-death process with immigration against Beta(1, theta)
    One CSV row per check with expected value, observation, standard error and verdict
    Multi-process, one job per check
'''

import math
import signal
import sys

import numpy as np
from scipy import stats

from sweep_utils.bd_oracles import (BDRates, BDStop, bd_extinction_cdf, bd_hitting_prob,
                                    bd_hitting_time_slope, coupled_bd_pair, gem_oracle_families,
                                    logistic_sojourn, simulate_bd)
from sweep_utils.cli_common import (build_parser, fail, header, print_queue, resolve_config,
                                    resolve_out_dir, setup_logging, sigint_handler,
                                    start_print_manager, status, write_csv)
from sweep_utils.errors import SweepUtilsError
from sweep_utils.gem_stats import first_stick_ks, gem_identity_prob, gem_sample
from sweep_utils.replicates import run_jobs
from sweep_utils.rng import UniformStream, make_rng, splitmix64

FIELDS = ['check', 'params', 'expected', 'observed', 'se', 'n', 'passed']

KS_LEVEL = 0.001


def _row(check, params, expected, observed, se, n, passed):
    return {'check': check, 'params': params, 'expected': expected, 'observed': observed,
            'se': se, 'n': n, 'passed': bool(passed)}


def _binomial_row(check, params, p, hits, n):
    observed = hits / n
    se = math.sqrt(p * (1.0 - p) / n)
    return _row(check, params, p, observed, se, n, abs(observed - p) <= 3.0 * se + 1e-12)


def extinction_check(b, d, i, times, reps, seed):
    stream = UniformStream(make_rng(seed))
    rates = BDRates(b=b, d=d)
    stop = BDStop(t_max=max(times))
    extinct = [r.t for r in (simulate_bd(rates, i, stop, stream) for _ in range(reps)) if r.reason == 'extinct']
    return [_binomial_row('extinction_cdf', f'b={b} d={d} i={i} t={t}', bd_extinction_cdf(b, d, i, t),
                          sum(1 for s in extinct if s <= t), reps) for t in times]


def hitting_check(b, d, i, upper, reps, seed):
    stream = UniformStream(make_rng(seed))
    stop = BDStop(upper=upper, lower=0)
    hits = sum(1 for _ in range(reps) if simulate_bd(BDRates(b=b, d=d), i, stop, stream).reason == 'upper')
    return [_binomial_row('hitting_prob', f'b={b} d={d} i={i} k={upper}', bd_hitting_prob(b, d, 0, i, upper),
                          hits, reps)]


def slope_check(b, d, N, reps, seed):
    """Mean T_N / log N over runs from one individual that reach N."""
    stream = UniformStream(make_rng(seed))
    stop = BDStop(upper=N)
    times = [r.t for r in (simulate_bd(BDRates(b=b, d=d), 1, stop, stream) for _ in range(reps))
             if r.reason == 'upper']
    expected = bd_hitting_time_slope(b, d)
    if not times:
        return [_row('hitting_time_slope', f'b={b} d={d} N={N}', expected, None, None, 0, False)]
    scaled = np.array(times) / math.log(N)
    observed = float(scaled.mean())
    se = float(scaled.std(ddof=1) / math.sqrt(len(scaled))) if len(scaled) > 1 else 0.0
    return [_row('hitting_time_slope', f'b={b} d={d} N={N}', expected, observed, se, len(scaled),
                 abs(observed - expected) <= 0.1 * expected)]


def coupling_check(b, d, gaps, horizon, reps, seed):
    """Coupled second moment against its intermediate-process bound, and its linearity in the gap."""
    stream = UniformStream(make_rng(seed))
    rows = []
    moments = []
    for gap in gaps:
        report = coupled_bd_pair(b, d, b + gap, d, horizon, reps, rng=stream)
        moments.append(report.sup_second_moment)
        bound = report.intermediate_bound
        rows.append(_row('coupling_moment', f'b={b} d={d} gap={gap} horizon={horizon}', bound,
                         report.sup_second_moment, None, reps,
                         report.capped == 0 and (bound is None or report.sup_second_moment <= bound + 1e-12)))
    if len(gaps) > 2:
        fit = stats.linregress(gaps, moments)
        rows.append(_row('coupling_linearity', f'gaps={list(gaps)}', 0.9, float(fit.rvalue ** 2), None,
                         len(gaps), fit.rvalue ** 2 > 0.9))
    return rows


def sojourn_check(b, d, K, eta, horizon, reps, seed):
    frequency = logistic_sojourn(b, d, 1.0, K, eta, eta, horizon, reps, rng=seed)
    return [_row('logistic_sojourn', f'b={b} d={d} K={K} eta={eta} horizon={horizon}', 0.01, frequency,
                 None, reps, frequency < 0.01)]


def gem_check(theta, samples, seed):
    stream = UniformStream(make_rng(seed))
    draws = [gem_sample(theta, stream) for _ in range(samples)]
    ks = first_stick_ks(draws, theta)
    identity = np.array([s.identity() for s in draws])
    se = float(identity.std(ddof=1) / math.sqrt(samples))
    expected = gem_identity_prob(theta).gem
    observed = float(identity.mean())
    return [
        _row('gem_first_stick_ks', f'theta={theta}', KS_LEVEL, float(ks.pvalue), None, samples,
             ks.pvalue > KS_LEVEL),
        _row('gem_identity', f'theta={theta}', expected, observed, se, samples,
             abs(observed - expected) <= 3.0 * se),
    ]


def gem_oracle_check(theta, b, d, t, reps, seed):
    """First surviving family of a birth-death process with immigration rate theta * b."""
    stream = UniformStream(make_rng(seed))
    spectra = [s for s in (gem_oracle_families(theta * b, b, d, t, stream) for _ in range(reps)) if s]
    if len(spectra) < 2:
        return [_row('gem_oracle_ks', f'theta={theta} b={b} d={d} t={t}', KS_LEVEL, None, None,
                     len(spectra), False)]
    ks = first_stick_ks(spectra, theta)
    return [_row('gem_oracle_ks', f'theta={theta} b={b} d={d} t={t}', KS_LEVEL, float(ks.pvalue), None,
                 len(spectra), ks.pvalue > KS_LEVEL)]


def oracle_jobs(experiment, seed):
    """(function, args) pairs, one per check; job k draws from stream splitmix64(seed, k)."""
    e = experiment
    reps = e['replicates']
    b, d = float(e['b']), float(e['d'])
    jobs = []
    for i in e['initial_sizes']:
        jobs.append((extinction_check, (b, d, int(i), [float(t) for t in e['times']], reps)))
        if i < e['hit_upper']:
            jobs.append((hitting_check, (b, d, int(i), int(e['hit_upper']), reps)))
    jobs.append((slope_check, (b, d, int(e['slope_N']), min(reps, e['slope_reps']))))
    jobs.append((coupling_check, (b, d, [float(g) for g in e['coupling_gaps']], float(e['coupling_horizon']),
                                  min(reps, e['coupling_reps']))))
    jobs.append((sojourn_check, (b, d, int(e['sojourn_K']), float(e['sojourn_eta']), float(e['sojourn_horizon']),
                                 min(reps, e['sojourn_reps']))))
    jobs.append((gem_check, (float(e['gem_theta']), min(reps, e['gem_samples']))))
    jobs.append((gem_oracle_check, (float(e['gem_theta']), b, d, float(e['gem_t']),
                                    min(reps, e['gem_oracle_reps']))))
    return [(fn, args + (splitmix64(seed, k),)) for k, (fn, args) in enumerate(jobs)]


def _call(fn, *args):
    return fn(*args)


def main(argv=None):
    # Ctrl+C graceful exit
    signal.signal(signal.SIGINT, sigint_handler)

    parser = build_parser('oracle', 'Checks the birth-death simulators against their closed forms')
    args = parser.parse_args(argv)
    setup_logging(args.verbose)

    # Start print manager
    start_print_manager()

    try:
        config = resolve_config(args, 'oracle')
        out_dir = resolve_out_dir(args)
        rows = []
        if config.replicates:
            jobs = oracle_jobs(config.experiment, config.seed)
            status(f'Running {len(jobs)} oracle checks ...')
            for batch in run_jobs(_call, [(fn,) + job_args for fn, job_args in jobs], args.workers):
                rows.extend(batch)
        path = out_dir / config.experiment['output']
        write_csv(path, header('oracle', config), FIELDS, rows)
    except SweepUtilsError as err:
        fail(f'oracle: {err}')
    except OSError as err:
        fail(f'oracle: unable to write output ({err})')

    failed = [row for row in rows if not row['passed']]
    for row in failed:
        status(f'FAILED {row["check"]} ({row["params"]}): expected {row["expected"]}, observed {row["observed"]}')
    status(f'{len(rows) - len(failed)} of {len(rows)} checks passed, wrote {path}')
    print_queue.join()
    sys.exit(0)


if __name__ == '__main__':
    main()

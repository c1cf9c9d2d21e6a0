# -*- coding: utf-8 -*-

"""Replicate jobs and the worker pool that runs them.

Replicate ``r`` of a run with master seed ``s`` is seeded with
``splitmix64(s, r)``. Jobs are plain module-level functions so the pool
can ship them to worker processes; results come back in submission order.
"""

import logging

from joblib import Parallel, delayed

from sweep_utils.bd_oracles import gem_oracle_families
from sweep_utils.errors import InvalidParametersError
from sweep_utils.gillespie import run_sweep
from sweep_utils.rng import splitmix64

logger = logging.getLogger(__name__)


def check_workers(workers):
    if workers == -1 or (isinstance(workers, int) and workers >= 1):
        return workers
    raise InvalidParametersError(f'workers must be a positive integer or -1 (all cores), got {workers}')


def run_jobs(job, arg_list, workers=1):
    """Call ``job(*args)`` for every entry of ``arg_list``; results keep the input order."""
    arg_list = list(arg_list)
    check_workers(workers)
    if workers == 1 or len(arg_list) <= 1:
        return [job(*args) for args in arg_list]
    logger.debug('dispatching %d jobs to %s workers', len(arg_list), workers)
    return Parallel(n_jobs=workers)(delayed(job)(*args) for args in arg_list)


def replicate_seeds(master_seed, replicates):
    return [splitmix64(master_seed, r) for r in range(replicates)]


def sweep_job(params, regime, K, seed, caps, force, replicate):
    outcome = run_sweep(params, regime, K, seed, caps=caps, force=force)
    outcome.replicate = replicate
    return outcome.to_record()


def sweep_replicates(config, K, caps, workers=1, force=False):
    """Replicate records of ``config`` at carrying capacity ``K``, ordered by replicate index."""
    params = config.params_at(K)
    seeds = replicate_seeds(config.seed, config.replicates or 0)
    tasks = [(params, config.regime, K, seed, caps, force, r) for r, seed in enumerate(seeds)]
    return run_jobs(sweep_job, tasks, workers)


def gem_oracle_job(imm_rate, b, d, t, seed):
    return gem_oracle_families(imm_rate, b, d, t, seed)


def gem_oracle_replicates(imm_rate, b, d, t, master_seed, replicates, workers=1):
    # offset keeps oracle streams apart from the sweep streams of the same master seed
    seeds = replicate_seeds(splitmix64(master_seed, -1), replicates)
    return run_jobs(gem_oracle_job, [(imm_rate, b, d, t, seed) for seed in seeds], workers)

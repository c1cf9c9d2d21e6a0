#!/usr/bin/env python3

'''Get the haplotype spectrum of selective sweeps

get-sweep-spectrum.py

Python version >= 3.6

Required Python packages:
    numpy
    scipy
    joblib

Features:
    Runs sweep replicates and summarises the surviving mutant families at the end of each sweep
    Compares the measured identity by descent with both GEM predictions and names the one it matches
    Optional birth-death-with-immigration oracle run with the same GEM parameter
    CSV table per carrying capacity, JSON lines with every replicate and the mean spectra
    Multi-process
'''

import math
import signal
import sys

import numpy as np

from sweep_utils.cli_common import (build_parser, fail, header, print_queue, resolve_config,
                                    resolve_out_dir, setup_logging, sigint_handler,
                                    start_print_manager, status, write_csv, write_jsonl)
from sweep_utils.errors import SweepUtilsError
from sweep_utils.gem_stats import adjudicate, first_stick_ks, identity_limit, spectrum_summary
from sweep_utils.model import Regime2, equilibrium_density, invasion_fitness
from sweep_utils.replicates import gem_oracle_replicates
from sweep_utils.run_sweeps import collect_records

FIELDS = [
    'K', 'replicates', 'fixed', 'mean_first', 'mean_largest', 'mean_families',
    'mean_sum_sq', 'mean_identity', 'identity_se', 'theta', 'pred_gem', 'pred_doubled',
    'verdict', 'oracle_n', 'oracle_identity', 'oracle_se', 'oracle_verdict', 'oracle_ks_p',
]


def mean_se(values):
    values = np.asarray(values, dtype=float)
    if len(values) == 0:
        return None, None
    se = float(values.std(ddof=1) / math.sqrt(len(values))) if len(values) > 1 else 0.0
    return float(values.mean()), se


def oracle_row(config, workers):
    """Family fractions of a birth-death process with immigration at the sweep's GEM parameter."""
    experiment = config.experiment
    params = config.params
    prediction = identity_limit(params, config.regime)
    b = params.f_a
    d = params.f_a - invasion_fitness(params, 'a')
    imm_rate = params.f_A * equilibrium_density(params, 'A') * config.regime.lambda_Aa
    status(f'Oracle: {experiment["oracle_reps"]} runs with immigration rate {imm_rate!r} ...')
    spectra = [s for s in gem_oracle_replicates(imm_rate, b, d, experiment['oracle_t'], config.seed,
                                                experiment['oracle_reps'], workers) if s]
    if not spectra:
        return {'oracle_n': 0}
    sum_sq = [math.fsum(p * p for p in s) for s in spectra]
    mean, se = mean_se(sum_sq)
    verdict = adjudicate(mean, se, prediction.theta).verdict
    return {
        'oracle_n': len(spectra),
        'oracle_identity': mean,
        'oracle_se': se,
        'oracle_verdict': verdict,
        'oracle_ks_p': float(first_stick_ks(spectra, prediction.theta).pvalue),
    }


def summarise(config, K, records, oracle):
    """One CSV row plus one JSON summary record for the replicates at ``K``."""
    batch = [r for r in records if r['K'] == K]
    fixed = [r for r in batch if r['termination'] == 'fixed' and r['spectrum']]
    row = {'K': K, 'replicates': len(batch), 'fixed': len(fixed)}
    summary = None
    if fixed:
        summary = spectrum_summary([r['spectrum'] for r in fixed], width=config.experiment['width'])
        row.update({
            'mean_first': summary.mean_first,
            'mean_largest': summary.mean_largest,
            'mean_families': summary.mean_families,
            'mean_sum_sq': summary.mean_identity,
        })
        identities = [r['identity'] for r in fixed if r['identity'] is not None]
        mean, se = mean_se(identities)
        row.update({'mean_identity': mean, 'identity_se': se})
    prediction = identity_limit(config.params_at(K), config.regime)
    row.update({'theta': prediction.theta, 'pred_gem': prediction.gem, 'pred_doubled': prediction.doubled})
    if isinstance(config.regime, Regime2) and row.get('mean_identity') is not None:
        row['verdict'] = adjudicate(row['mean_identity'], row['identity_se'], prediction.theta).verdict
    row.update(oracle)
    record = {'type': 'summary', 'K': K, 'prediction': prediction.to_dict(),
              'summary': summary.to_dict() if summary else None, 'verdict': row.get('verdict')}
    return row, record


def main(argv=None):
    # Ctrl+C graceful exit
    signal.signal(signal.SIGINT, sigint_handler)

    parser = build_parser('spectrum', 'Compares the haplotype spectrum of sweeps with its GEM limits')
    args = parser.parse_args(argv)
    setup_logging(args.verbose)

    # Start print manager
    start_print_manager()

    try:
        config = resolve_config(args, 'spectrum')
        out_dir = resolve_out_dir(args)
        # fails early for regimes without a spectrum limit
        identity_limit(config.params, config.regime)
        records = collect_records(config, args.workers)
        oracle = {}
        if (config.experiment['oracle_reps'] and isinstance(config.regime, Regime2) and config.replicates
                and config.regime.lambda_Aa > 0):
            oracle = oracle_row(config, args.workers)
        rows = []
        summaries = []
        if config.replicates:
            for K in config.K_values:
                row, record = summarise(config, K, records, oracle)
                rows.append(row)
                summaries.append(record)
        head = header('spectrum', config)
        table_path = out_dir / config.experiment['output']
        write_csv(table_path, head, FIELDS, rows)
        write_jsonl(out_dir / config.experiment['records'], head, records + summaries)
    except SweepUtilsError as err:
        fail(f'spectrum: {err}')
    except OSError as err:
        fail(f'spectrum: unable to write output ({err})')

    for row in rows:
        if row.get('verdict'):
            status(f'K={row["K"]}: identity {row["mean_identity"]:.4f} +/- {row["identity_se"]:.4f}, '
                   f'matches {row["verdict"]}')
    status(f'Wrote {table_path}')
    print_queue.join()
    sys.exit(0)


if __name__ == '__main__':
    main()

#!/usr/bin/env python3

'''Get the duration of selective sweeps

get-sweep-duration.py

Python version >= 3.6

Required Python packages:
    numpy
    joblib

Features:
    Runs sweep replicates over a grid of carrying capacities
    Tabulates mean T_F / log K against its large-K limit (1 - beta) / S_aA + 1 / |S_Aa|
    Reports the first-phase time T_eps alongside
    Counts terminations by cause
    Multi-process
'''

import math
import signal
import sys

from sweep_utils.cli_common import (build_parser, fail, header, print_queue, resolve_config,
                                    resolve_out_dir, setup_logging, sigint_handler,
                                    start_print_manager, status, write_csv)
from sweep_utils.errors import InvalidParametersError, SweepUtilsError
from sweep_utils.get_sweep_spectrum import mean_se
from sweep_utils.gillespie import TERMINATIONS
from sweep_utils.model import Regime3, Regime4, invasion_fitness
from sweep_utils.run_sweeps import collect_records

FIELDS = [
    'K', 'log_K', 'replicates', 'fixed', 'mean_T_F', 'se_T_F', 'mean_T_F_over_log_K',
    'se_T_F_over_log_K', 'prediction', 'rel_deviation', 'mean_T_eps_over_log_K',
] + [f'n_{t}' for t in TERMINATIONS]


def duration_prediction(params, regime):
    """Large-K limit of T_F / log K, or None outside the rare and intermediate regimes."""
    if isinstance(regime, Regime4):
        return None
    beta = regime.beta if isinstance(regime, Regime3) else 0.0
    return (1.0 - beta) / invasion_fitness(params, 'a') + 1.0 / abs(invasion_fitness(params, 'A'))


def duration_row(K, batch, prediction):
    log_K = math.log(K)
    fixed = [r for r in batch if r['termination'] == 'fixed']
    row = {'K': K, 'log_K': log_K, 'replicates': len(batch), 'fixed': len(fixed),
           'prediction': prediction}
    for t in TERMINATIONS:
        row[f'n_{t}'] = sum(1 for r in batch if r['termination'] == t)
    if fixed:
        mean, se = mean_se([r['T_F'] for r in fixed])
        row.update({'mean_T_F': mean, 'se_T_F': se,
                    'mean_T_F_over_log_K': mean / log_K, 'se_T_F_over_log_K': se / log_K})
        if prediction:
            row['rel_deviation'] = (mean / log_K - prediction) / prediction
        hits = [r['T_eps'] for r in fixed if r['T_eps'] is not None]
        if hits:
            row['mean_T_eps_over_log_K'] = mean_se(hits)[0] / log_K
    return row


def main(argv=None):
    # Ctrl+C graceful exit
    signal.signal(signal.SIGINT, sigint_handler)

    parser = build_parser('duration', 'Tabulates sweep durations over a grid of carrying capacities')
    args = parser.parse_args(argv)
    setup_logging(args.verbose)

    # Start print manager
    start_print_manager()

    try:
        config = resolve_config(args, 'duration')
        for K in config.K_values:
            if K <= 1:
                raise InvalidParametersError(f'log K vanishes at K={K}')
        out_dir = resolve_out_dir(args)
        prediction = duration_prediction(config.params, config.regime)
        records = collect_records(config, args.workers)
        rows = []
        if config.replicates:
            rows = [duration_row(K, [r for r in records if r['K'] == K], prediction) for K in config.K_values]
        path = out_dir / config.experiment['output']
        write_csv(path, header('duration', config), FIELDS, rows)
    except SweepUtilsError as err:
        fail(f'duration: {err}')
    except OSError as err:
        fail(f'duration: unable to write output ({err})')

    for row in rows:
        if row.get('mean_T_F_over_log_K') is not None:
            status(f'K={row["K"]}: T_F / log K = {row["mean_T_F_over_log_K"]:.4f} '
                   f'(limit {row["prediction"]})')
    status(f'Wrote {path}')
    print_queue.join()
    sys.exit(0)


if __name__ == '__main__':
    main()

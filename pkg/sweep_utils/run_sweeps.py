#!/usr/bin/env python3

'''Run selective sweep replicates

run-sweeps.py

Python version >= 3.6

Required Python packages:
    numpy
    joblib

Features:
    Simulates sweeps of the mutant allele from a single mutant until the ancestral resident dies out
    One JSON record per replicate: stopping times, haplotype spectrum, event tallies, termination
    Loops over every carrying capacity of the configuration
    Reproducible replicates from a master seed
    Multi-process
'''

import signal
import sys

from sweep_utils.cli_common import (build_parser, fail, header, print_queue, resolve_config,
                                    resolve_out_dir, setup_logging, sigint_handler,
                                    start_print_manager, status, write_jsonl)
from sweep_utils.errors import SweepUtilsError
from sweep_utils.gillespie import SweepCaps
from sweep_utils.replicates import sweep_replicates


def caps_from_experiment(experiment):
    return SweepCaps(
        epsilon=experiment.get('epsilon'),
        max_events=experiment.get('max_events'),
        max_time=experiment.get('max_time'),
        max_a_extinctions=experiment.get('max_a_extinctions'),
    )


def collect_records(config, workers, force=False):
    caps = caps_from_experiment(config.experiment)
    records = []
    for K in config.K_values:
        status(f'K={K}: running {config.replicates} replicates ...')
        batch = sweep_replicates(config, K, caps, workers=workers, force=force)
        fixed = sum(1 for r in batch if r['termination'] == 'fixed')
        status(f'K={K}: {fixed} of {len(batch)} replicates fixed')
        records.extend(batch)
    return records


def main(argv=None):
    # Ctrl+C graceful exit
    signal.signal(signal.SIGINT, sigint_handler)

    parser = build_parser('sweep', 'Simulates selective sweeps and writes one JSON record per replicate')
    parser.add_argument('-f', '--force', action='store_true', help='Run even if the sweep conditions fail')
    args = parser.parse_args(argv)
    setup_logging(args.verbose)

    # Start print manager
    start_print_manager()

    try:
        config = resolve_config(args, 'sweep')
        out_dir = resolve_out_dir(args)
        records = collect_records(config, args.workers, force=args.force or config.experiment['force'])
        path = out_dir / config.experiment['output']
        write_jsonl(path, header('sweep', config), records)
    except SweepUtilsError as err:
        fail(f'sweep: {err}')
    except OSError as err:
        fail(f'sweep: unable to write output ({err})')

    status(f'Wrote {len(records)} records to {path}')
    print_queue.join()
    sys.exit(0)


if __name__ == '__main__':
    main()

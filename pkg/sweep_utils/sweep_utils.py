#!/usr/bin/env python3

'''Display available commands

sweep-utils.py

Python version >= 3.6

Required Python packages:
    None

Features:
    Returns a list of available commands
    Runs a command given as the first argument: sweep-utils <command> [options]
'''

import signal
import sys

from sweep_utils import (get_ode_fixed_points, get_sweep_duration, get_sweep_spectrum, run_bd_oracles,
                         run_sweeps)

COMMANDS = {
    'sweep': run_sweeps.main,
    'spectrum': get_sweep_spectrum.main,
    'duration': get_sweep_duration.main,
    'ode': get_ode_fixed_points.main,
    'oracle': run_bd_oracles.main,
}


def sigint_handler(signum, frame):
    sys.exit(1)


def main(argv=None):
    # Ctrl+C graceful exit
    signal.signal(signal.SIGINT, sigint_handler)

    argv = sys.argv[1:] if argv is None else list(argv)
    if argv and argv[0] in COMMANDS:
        COMMANDS[argv[0]](argv[1:])
    elif argv and argv[0] not in ('-h', '--help'):
        sys.stderr.write(f'Unknown command: {argv[0]} (expected one of {", ".join(COMMANDS)})\n')
        sys.exit(1)

    commands = '''
    Selective Sweep Utilities

    Available commands:

        sweep-utils: Returns a list of available commands

        run-sweeps (sweep-utils sweep): Simulates selective sweeps, one JSON record per replicate

        get-sweep-spectrum (sweep-utils spectrum): Compares the haplotype spectrum of sweeps with its GEM limits

        get-sweep-duration (sweep-utils duration): Tabulates sweep durations over a grid of carrying capacities

        get-ode-fixed-points (sweep-utils ode): Enumerates and classifies the fixed points of the system with mutation

        run-bd-oracles (sweep-utils oracle): Checks the birth-death simulators against their closed forms

    Common options: --config, --seed, --replicates, --workers, --out-dir, --verbose
    '''
    print(commands)

    sys.exit(0)


if __name__ == '__main__':
    main()

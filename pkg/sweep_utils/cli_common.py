# -*- coding: utf-8 -*-

"""Plumbing shared by the command-line tools: flags, configuration,
output files with provenance headers, status printing."""

import argparse
import csv
import json
import logging
import os
import queue
import sys
import threading
from pathlib import Path

from sweep_utils import __version__
from sweep_utils.config import load_config, parse_config
from sweep_utils.errors import ConfigError

TOOL = 'sweep-utils'
OUT_DIR_ENV = 'SWEEP_UTILS_OUT_DIR'
DEFAULT_OUT_DIR = 'out'

# bundled configuration used when --config is not given
DEFAULT_CONFIGS = {
    'sweep': 'desk_regime2',
    'spectrum': 'desk_regime2',
    'duration': 'desk_regime2',
    'ode': 'fig7c',
    'oracle': 'oracle',
}

print_queue = queue.Queue()


def sigint_handler(signum, frame):
    sys.exit(1)


def print_manager():
    while True:
        job = print_queue.get()
        for line in job:
            sys.stderr.write(f'{line}\n')
        print_queue.task_done()


def start_print_manager():
    t = threading.Thread(target=print_manager)
    t.daemon = True
    t.start()
    del t


def status(*lines):
    print_queue.put(lines)


def fail(message):
    print_queue.join()
    sys.stderr.write(f'{message}\n')
    sys.exit(1)


def build_parser(command, description):
    parser = argparse.ArgumentParser(prog=f'{TOOL} {command}', description=description)
    parser.add_argument('-c', '--config', metavar='', type=str,
                        help=f'JSON configuration file or bundled config name (default: {DEFAULT_CONFIGS[command]})')
    parser.add_argument('-s', '--seed', metavar='', type=int, help='Master seed, overrides the configuration')
    parser.add_argument('-r', '--replicates', metavar='', type=int, help='Replicate count, overrides the configuration')
    parser.add_argument('-w', '--workers', metavar='', type=int, default=1, help='Worker processes, -1 for all cores')
    parser.add_argument('-o', '--out-dir', metavar='', type=str,
                        help=f'Output directory (default: ${OUT_DIR_ENV} or ./{DEFAULT_OUT_DIR})')
    parser.add_argument('-v', '--verbose', action='store_true', help='Debug logging')
    return parser


def setup_logging(verbose):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )


def resolve_config(args, command):
    """Load and validate the run configuration, applying command-line overrides."""
    raw = load_config(args.config or DEFAULT_CONFIGS[command])
    if not isinstance(raw, dict):
        raise ConfigError('the configuration must be a JSON object')
    raw = dict(raw)
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError(f'expected a nonnegative integer, got {args.seed}', field='--seed')
        raw['seed'] = args.seed
    if args.replicates is not None:
        if args.replicates < 0:
            raise ConfigError(f'expected a nonnegative integer, got {args.replicates}', field='--replicates')
        experiment = dict(raw.get('experiment') or {})
        experiment['replicates'] = args.replicates
        raw['experiment'] = experiment
    return parse_config(raw, command)


def resolve_out_dir(args):
    """Flag, then environment, then ./out."""
    out_dir = Path(args.out_dir or os.environ.get(OUT_DIR_ENV) or DEFAULT_OUT_DIR)
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir


def header(command, config):
    return {
        'type': 'header',
        'tool': TOOL,
        'version': __version__,
        'command': command,
        'config': config.resolved(),
    }


def _dumps(obj, **kwargs):
    return json.dumps(obj, sort_keys=True, **kwargs)


def write_jsonl(path, head, records):
    with open(path, 'w', newline='\n') as f:
        f.write(_dumps(head) + '\n')
        for record in records:
            f.write(_dumps(record) + '\n')


def write_json(path, head, document):
    document = dict(document)
    document.update({k: v for k, v in head.items() if k != 'type'})
    with open(path, 'w', newline='\n') as f:
        f.write(_dumps(document, indent=2) + '\n')


def write_csv(path, head, fieldnames, rows):
    with open(path, 'w', newline='') as f:
        f.write(f'# tool={head["tool"]}\n')
        f.write(f'# version={head["version"]}\n')
        f.write(f'# command={head["command"]}\n')
        f.write(f'# config={_dumps(head["config"], separators=(",", ":"))}\n')
        writer = csv.DictWriter(f, fieldnames=fieldnames, lineterminator='\n', extrasaction='ignore')
        writer.writeheader()
        for row in rows:
            writer.writerow({k: format_value(row.get(k)) for k in fieldnames})


def format_value(value):
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    return value


def read_csv(path):
    """Rows of a file written by ``write_csv``, skipping the comment lines."""
    with open(path, 'r', newline='') as f:
        lines = [line for line in f if not line.startswith('#')]
    return list(csv.DictReader(lines))

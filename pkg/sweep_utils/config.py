# -*- coding: utf-8 -*-

"""Run configuration files.

A configuration is one JSON document with four sections:

    {
      "ecology": {"f_A": 2, "f_a": 5, "D_A": 1, "D_a": 1,
                  "C": [[1, 1], [2, 1]], "K": [1000, 10000]},
      "regime": {"variant": 2, "lambda_Aa": 0.5, "lambda_aA": 0.5},
      "experiment": {"replicates": 200, "epsilon": 0.05},
      "seed": 20240101
    }

The ecology may give ``rho_A``/``rho_a`` instead of ``D_A``/``D_a``; the
death rates are then solved from the regime's mutation constants.
"""

import json
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from sweep_utils.errors import ConfigError, InvalidParametersError
from sweep_utils.model import REGIMES, EcoParams

logger = logging.getLogger(__name__)

CONFIG_DIR = Path(__file__).resolve().parent / 'configs'

SECTIONS = ('ecology', 'regime', 'experiment', 'seed')

# experiment keys understood by each command, with their defaults
EXPERIMENT_DEFAULTS = {
    'sweep': {
        'replicates': 20,
        'epsilon': None,
        'max_events': 500_000_000,
        'max_time': None,
        'max_a_extinctions': None,
        'force': False,
        'output': 'sweeps.jsonl',
    },
    'spectrum': {
        'replicates': 20,
        'epsilon': None,
        'max_events': 500_000_000,
        'max_time': None,
        'max_a_extinctions': None,
        'width': 20,
        'oracle_reps': 0,
        'oracle_t': 3.0,
        'output': 'spectrum.csv',
        'records': 'spectrum.jsonl',
    },
    'duration': {
        'replicates': 20,
        'epsilon': None,
        'max_events': 500_000_000,
        'max_time': None,
        'max_a_extinctions': None,
        'output': 'duration.csv',
    },
    'ode': {
        'replicates': None,
        'grid': 3,
        'horizon': 1000.0,
        'rtol': 1e-9,
        'atol': 1e-12,
        'n_samples': 201,
        'basin_delta': 1e-6,
        'solve_tangency': False,
        'tangency_bracket': None,
        'perturbation_p': None,
        'perturbation_lambdas': [],
        'output': 'fixed_points.json',
        'trajectories': 'trajectories.csv',
    },
    'oracle': {
        'replicates': 1000,
        'b': 2.0,
        'd': 1.0,
        'initial_sizes': [1, 3],
        'times': [0.5, 1.0, 2.0],
        'hit_upper': 10,
        'slope_N': 10000,
        'slope_reps': 200,
        'coupling_gaps': [0.01, 0.02, 0.05, 0.1],
        'coupling_horizon': 3.0,
        'coupling_reps': 400,
        'sojourn_K': 500,
        'sojourn_eta': 0.3,
        'sojourn_horizon': 100.0,
        'sojourn_reps': 20,
        'gem_theta': 1.0,
        'gem_t': 6.0,
        'gem_samples': 10000,
        'gem_oracle_reps': 500,
        'output': 'oracle.csv',
    },
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: EcoParams
    K_values: tuple
    regime: object
    experiment: dict
    seed: int
    raw: dict = field(compare=False, default_factory=dict)

    @property
    def replicates(self):
        return self.experiment.get('replicates')

    def params_at(self, K):
        return replace(self.params, K=K)

    def resolved(self):
        """The configuration as it is run, for output headers."""
        ecology = None
        if self.params is not None:
            ecology = self.params.to_dict()
            ecology['K'] = list(self.K_values)
        return {
            'ecology': ecology,
            'regime': self.regime.to_dict() if self.regime is not None else None,
            'experiment': dict(self.experiment),
            'seed': self.seed,
        }


def load_config(path):
    """Read a JSON configuration file; a bare name refers to a bundled config."""
    path = Path(path)
    if not path.exists() and not path.suffix and (CONFIG_DIR / f'{path}.json').exists():
        path = CONFIG_DIR / f'{path}.json'
    try:
        with open(path, 'r') as f:
            return json.load(f)
    except json.JSONDecodeError as err:
        raise ConfigError(err.msg, line=err.lineno, column=err.colno) from err
    except OSError as err:
        raise ConfigError(f'unable to read {path} ({err.strerror})') from err


def _number(section, key, where, required=True, default=None, positive=False, nonnegative=False):
    if key not in section:
        if required:
            raise ConfigError('missing value', field=f'{where}.{key}')
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f'expected a finite number, got {value!r}', field=f'{where}.{key}')
    if positive and not value > 0:
        raise ConfigError(f'must be positive, got {value}', field=f'{where}.{key}')
    if nonnegative and value < 0:
        raise ConfigError(f'must be nonnegative, got {value}', field=f'{where}.{key}')
    return float(value)


def _section(raw, name, required=True):
    if name not in raw:
        if required:
            raise ConfigError('missing section', field=name)
        return {}
    section = raw[name]
    if not isinstance(section, dict):
        raise ConfigError(f'expected an object, got {type(section).__name__}', field=name)
    return section


def parse_regime(section):
    if not section:
        return None
    variant = section.get('variant')
    if variant not in REGIMES:
        raise ConfigError(f'expected one of {sorted(REGIMES)}, got {variant!r}', field='regime.variant')
    unknown = set(section) - {'variant', 'lambda_Aa', 'lambda_aA', 'beta'}
    if unknown:
        raise ConfigError(f'unknown keys {sorted(unknown)}', field='regime')
    kwargs = {}
    for key in ('lambda_Aa', 'lambda_aA'):
        value = _number(section, key, 'regime', required=variant != 1, default=1.0)
        kwargs[key] = value
    if variant == 3:
        kwargs['beta'] = _number(section, 'beta', 'regime')
    try:
        return REGIMES[variant](**kwargs)
    except InvalidParametersError as err:
        raise ConfigError(str(err), field='regime') from err


def _competition(ecology):
    C = ecology.get('C')
    if C is None:
        raise ConfigError('missing value', field='ecology.C')
    if not isinstance(C, list) or len(C) != 2 or any(not isinstance(row, list) or len(row) != 2 for row in C):
        raise ConfigError('expected a 2x2 array', field='ecology.C')
    for i, row in enumerate(C):
        for j, value in enumerate(row):
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f'expected a number, got {value!r}', field=f'ecology.C[{i}][{j}]')
            if not value > 0:
                raise ConfigError(f'must be positive, got {value}', field=f'ecology.C[{i}][{j}]')
    return tuple(tuple(float(v) for v in row) for row in C)


def _K_values(ecology):
    K = ecology.get('K', 1)
    values = K if isinstance(K, list) else [K]
    if not values:
        raise ConfigError('empty list', field='ecology.K')
    out = []
    for i, value in enumerate(values):
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not value >= 1:
            raise ConfigError(f'expected a number >= 1, got {value!r}', field=f'ecology.K[{i}]')
        out.append(int(value) if float(value).is_integer() else float(value))
    return tuple(out)


def parse_ecology(section, regime):
    unknown = set(section) - {'f_A', 'f_a', 'D_A', 'D_a', 'rho_A', 'rho_a', 'C', 'K'}
    if unknown:
        raise ConfigError(f'unknown keys {sorted(unknown)}', field='ecology')
    C = _competition(section)
    K_values = _K_values(section)
    f_A = _number(section, 'f_A', 'ecology', positive=True)
    f_a = _number(section, 'f_a', 'ecology', positive=True)
    try:
        if 'rho_A' in section or 'rho_a' in section:
            if regime is None:
                raise ConfigError('growth rates need the regime mutation constants', field='regime')
            params = EcoParams.from_growth_rates(
                f_A=f_A, f_a=f_a,
                rho_A=_number(section, 'rho_A', 'ecology'),
                rho_a=_number(section, 'rho_a', 'ecology'),
                C=C, lambda_Aa=regime.lambda_Aa, lambda_aA=regime.lambda_aA, K=K_values[0])
        else:
            params = EcoParams(f_A=f_A, f_a=f_a,
                               D_A=_number(section, 'D_A', 'ecology', positive=True),
                               D_a=_number(section, 'D_a', 'ecology', positive=True),
                               C=C, K=K_values[0])
    except InvalidParametersError as err:
        raise ConfigError(str(err), field='ecology') from err
    return params, K_values


POSITIVE_NUMBERS = ('epsilon', 'max_time', 'horizon', 'rtol', 'atol', 'basin_delta', 'oracle_t', 'perturbation_p',
                    'b', 'coupling_horizon', 'sojourn_eta', 'sojourn_horizon', 'gem_theta', 'gem_t')
NONNEGATIVE_NUMBERS = ('d',)
COUNTS = ('replicates', 'max_events', 'max_a_extinctions', 'grid', 'n_samples', 'oracle_reps', 'width',
          'slope_reps', 'coupling_reps', 'sojourn_reps', 'gem_samples', 'gem_oracle_reps')
POSITIVE_COUNTS = ('hit_upper', 'sojourn_K')
# name: (entry kind, exact length)
LISTS = {
    'initial_sizes': ('count', None),
    'times': ('nonnegative', None),
    'coupling_gaps': ('positive', None),
    'perturbation_lambdas': ('nonnegative', None),
    'tangency_bracket': ('positive', 2),
}
FLAGS = ('force', 'solve_tangency')
NAMES = ('output', 'records', 'trajectories')


def _count(value, field, minimum=0):
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        kind = 'nonnegative' if minimum == 0 else f'>= {minimum}'
        raise ConfigError(f'expected a {kind} integer, got {value!r}', field=field)
    return value


def _number_list(value, field, kind, length=None):
    if not isinstance(value, list) or (length is not None and len(value) != length):
        raise ConfigError(f'expected a list of numbers, got {value!r}', field=field)
    for k, entry in enumerate(value):
        if kind == 'count':
            _count(entry, f'{field}.{k}', minimum=1)
        else:
            _number({k: entry}, k, field, positive=kind == 'positive', nonnegative=kind == 'nonnegative')
    return value


def parse_experiment(section, command):
    defaults = EXPERIMENT_DEFAULTS[command]
    unknown = set(section) - set(defaults)
    if unknown:
        raise ConfigError(f'unknown keys {sorted(unknown)}', field='experiment')
    experiment = dict(defaults)
    experiment.update(section)
    for key, value in experiment.items():
        field = f'experiment.{key}'
        if value is None:
            if defaults[key] is not None:
                raise ConfigError('must not be null', field=field)
        elif key in POSITIVE_NUMBERS or key in NONNEGATIVE_NUMBERS:
            _number(experiment, key, 'experiment', positive=key in POSITIVE_NUMBERS,
                    nonnegative=key in NONNEGATIVE_NUMBERS)
        elif key in COUNTS:
            _count(value, field)
        elif key in POSITIVE_COUNTS:
            _count(value, field, minimum=1)
        elif key == 'slope_N':
            _count(value, field, minimum=2)
        elif key in LISTS:
            _number_list(value, field, *LISTS[key])
        elif key in FLAGS:
            if not isinstance(value, bool):
                raise ConfigError(f'expected true or false, got {value!r}', field=field)
        elif key in NAMES:
            if not isinstance(value, str) or not value:
                raise ConfigError(f'expected a file name, got {value!r}', field=field)
    if command == 'ode':
        bracket = experiment['tangency_bracket']
        if bracket is not None and not bracket[0] < bracket[1]:
            raise ConfigError(f'expected low < high, got {bracket!r}', field='experiment.tangency_bracket')
        if experiment['solve_tangency'] and bracket is None:
            raise ConfigError('required when solve_tangency is set', field='experiment.tangency_bracket')
    if command == 'oracle':
        if not experiment['b'] > experiment['d']:
            raise ConfigError(f"the birth rate must exceed the death rate {experiment['d']}", field='experiment.b')
        if not experiment['sojourn_eta'] < experiment['b'] - experiment['d']:
            raise ConfigError('must be below b - d', field='experiment.sojourn_eta')
    return experiment


def parse_config(raw, command):
    """Validate a loaded configuration for ``command`` into a ``RunConfig``."""
    if command not in EXPERIMENT_DEFAULTS:
        raise ConfigError(f'unknown command {command!r}')
    if not isinstance(raw, dict):
        raise ConfigError('the configuration must be a JSON object')
    unknown = set(raw) - set(SECTIONS)
    if unknown:
        raise ConfigError(f'unknown sections {sorted(unknown)}')
    regime = parse_regime(_section(raw, 'regime', required=command != 'oracle'))
    ecology = _section(raw, 'ecology', required=command != 'oracle')
    if ecology:
        params, K_values = parse_ecology(ecology, regime)
    else:
        params, K_values = None, ()
    experiment = parse_experiment(_section(raw, 'experiment', required=False), command)
    seed = raw.get('seed', 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError(f'expected a nonnegative integer, got {seed!r}', field='seed')
    logger.debug('parsed %s configuration: %d K values, regime %s', command, len(K_values),
                 getattr(regime, 'number', None))
    return RunConfig(command=command, params=params, K_values=K_values, regime=regime,
                     experiment=experiment, seed=seed, raw=raw)

#!/usr/bin/env python3

'''Get the fixed points of the Lotka-Volterra system with mutation

get-ode-fixed-points.py

Python version >= 3.6

Required Python packages:
    numpy
    scipy

Features:
    Interior fixed points from the closed-form roots of the fixed-point cubic
    Jacobian, eigenvalues, kind and index of every fixed point, origin and axes included
    Checks the sufficient conditions for a unique interior sink against what was found
    Optional tangency search: the growth rate at which two interior fixed points merge
    Splits the two basins of attraction along the unstable direction of each saddle
    First-order expansions of the stable equilibrium in the mutation rate
    Trajectories from a grid of initial conditions, as CSV
'''

import signal
import sys

import numpy as np

from sweep_utils.cli_common import (build_parser, fail, header, print_queue, resolve_config,
                                    resolve_out_dir, setup_logging, sigint_handler,
                                    start_print_manager, status, write_csv, write_json)
from sweep_utils.errors import RegimeMismatchError, SweepUtilsError
from sweep_utils.model import Regime4, growth_rates
from sweep_utils.ode_analysis import (basin_split, boundary_fixed_points, check_conditions,
                                      cubic_coefficients, cubic_roots, index_sum,
                                      interior_fixed_points, invariant_compact, mut_field, mut_rhs,
                                      origin_report, perturbation_equilibrium,
                                      tangency_growth_rate, verify_conditions, with_growth_rate)
from sweep_utils.ode_integrator import integrate

TRAJECTORY_FIELDS = ['trajectory', 't', 'n_A', 'n_a']


def fixed_point_section(params, lambda_Aa, lambda_aA):
    cubic = cubic_coefficients(params, lambda_Aa, lambda_aA)
    roots = cubic_roots(cubic)
    interior = interior_fixed_points(params, lambda_Aa, lambda_aA)
    cubic_doc = cubic.to_dict()
    cubic_doc.update({'branch': roots.branch, 'roots': list(roots.roots), 'degenerate': roots.degenerate})
    return interior, {
        'cubic': cubic_doc,
        'interior': [r.to_dict() for r in interior],
        'index_sum': index_sum(interior),
        'kinds': [r.kind for r in interior],
    }


def tangency_section(params, lambda_Aa, lambda_aA, bracket):
    rho_A = tangency_growth_rate(params, lambda_Aa, lambda_aA, tuple(float(b) for b in bracket))
    shifted = with_growth_rate(params, lambda_Aa, rho_A)
    _, section = fixed_point_section(shifted, lambda_Aa, lambda_aA)
    section.update({'rho_A': rho_A, 'D_A': shifted.D_A})
    return section


def perturbation_section(params, p, lambdas):
    rows = []
    for lam in lambdas:
        expansion = perturbation_equilibrium(params, p, lam)
        approx = np.array(expansion.value)
        points = interior_fixed_points(params, p * lam, lam) if lam > 0 else []
        doc = expansion.to_dict()
        if points:
            nearest = min(points, key=lambda r: float(np.linalg.norm(r.point - approx)))
            doc['equilibrium'] = [nearest.n_A, nearest.n_a]
            doc['error'] = float(np.max(np.abs(nearest.point - approx)))
        rows.append(doc)
    return rows


def trajectory_section(params, lambda_Aa, lambda_aA, interior, experiment):
    """Integrate from a grid over the invariant box; returns CSV rows and end-point summaries."""
    grid = experiment['grid']
    horizon = float(experiment['horizon'])
    _, hi = invariant_compact(params)
    levels = [(i + 1) * hi / (grid + 1) for i in range(grid)]
    times = np.linspace(0.0, horizon, experiment['n_samples'])
    field = mut_field(params, lambda_Aa, lambda_aA)
    rows = []
    ends = []
    k = 0
    for n_A in levels:
        for n_a in levels:
            path = integrate(field, [n_A, n_a], horizon, rtol=experiment['rtol'], atol=experiment['atol'],
                             sample_times=times)
            for t, y in zip(path.t, path.y):
                rows.append({'trajectory': k, 't': float(t), 'n_A': float(y[0]), 'n_a': float(y[1])})
            final = path.final
            distances = [float(np.linalg.norm(final - fp.point)) for fp in interior]
            ends.append({
                'trajectory': k,
                'start': [n_A, n_a],
                'end': final.tolist(),
                'velocity': float(np.linalg.norm(mut_rhs(params, lambda_Aa, lambda_aA, final))),
                'nearest': int(np.argmin(distances)) if distances else None,
            })
            k += 1
    return rows, ends


def analyse(config):
    """The fixed-point report document and the trajectory rows for one configuration."""
    regime = config.regime
    if not isinstance(regime, Regime4):
        raise RegimeMismatchError(f'the deterministic system with mutation needs regime 4, got regime {regime.number}')
    experiment = config.experiment
    params = config.params
    lam_Aa, lam_aA = regime.lambda_Aa, regime.lambda_aA
    rho_A, rho_a = growth_rates(params, lam_Aa, lam_aA)

    interior, section = fixed_point_section(params, lam_Aa, lam_aA)
    conditions = check_conditions(params, lam_Aa, lam_aA)
    document = {
        'growth_rates': {'rho_A': rho_A, 'rho_a': rho_a},
        'origin': origin_report(params, lam_Aa, lam_aA).to_dict(),
        'boundary_without_mutation': [r.to_dict() for r in boundary_fixed_points(params)],
        'conditions': conditions.to_dict(),
        'condition_failures': verify_conditions(conditions, interior),
        'invariant_compact': list(invariant_compact(params)),
    }
    document.update(section)

    document['basins'] = [
        {'saddle': i, 'ends': [end.to_dict() for end in basin_split(
            params, lam_Aa, lam_aA, fp, interior, delta=experiment['basin_delta'], horizon=experiment['horizon'])]}
        for i, fp in enumerate(interior) if fp.kind == 'saddle'
    ]
    if experiment['solve_tangency']:
        document['tangency'] = tangency_section(params, lam_Aa, lam_aA, experiment['tangency_bracket'])
    if experiment['perturbation_p'] is not None:
        document['perturbation'] = perturbation_section(
            params, float(experiment['perturbation_p']), [float(x) for x in experiment['perturbation_lambdas']])

    rows = []
    document['trajectories'] = []
    if experiment['grid']:
        rows, document['trajectories'] = trajectory_section(params, lam_Aa, lam_aA, interior, experiment)
    return document, rows


def main(argv=None):
    # Ctrl+C graceful exit
    signal.signal(signal.SIGINT, sigint_handler)

    parser = build_parser('ode', 'Enumerates and classifies the fixed points of the system with mutation')
    args = parser.parse_args(argv)
    setup_logging(args.verbose)

    # Start print manager
    start_print_manager()

    try:
        config = resolve_config(args, 'ode')
        # --replicates sets the number of initial conditions per axis
        if config.replicates is not None:
            config.experiment['grid'] = config.replicates
        out_dir = resolve_out_dir(args)
        document, rows = analyse(config)
        head = header('ode', config)
        report_path = out_dir / config.experiment['output']
        write_json(report_path, head, document)
        write_csv(out_dir / config.experiment['trajectories'], head, TRAJECTORY_FIELDS, rows)
    except SweepUtilsError as err:
        fail(f'ode: {err}')
    except OSError as err:
        fail(f'ode: unable to write output ({err})')

    status(f'{len(document["interior"])} interior fixed points: {", ".join(document["kinds"]) or "none"}')
    for failure in document['condition_failures']:
        status(f'Condition check: {failure}')
    status(f'Wrote {report_path}')
    print_queue.join()
    sys.exit(0)


if __name__ == '__main__':
    main()

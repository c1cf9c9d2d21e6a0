# -*- coding: utf-8 -*-

"""Adaptive Dormand-Prince 5(4) integrator for small autonomous systems.

Population densities cannot become negative: a step producing a negative
coordinate is rejected and retried with half the step size.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from sweep_utils.errors import IntegrationError, InvalidParametersError

logger = logging.getLogger(__name__)

A21 = 1.0 / 5.0
A31, A32 = 3.0 / 40.0, 9.0 / 40.0
A41, A42, A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
A51, A52, A53, A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
A61, A62, A63, A64, A65 = 9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0
# fifth order weights, also the last stage row (first same as last)
B1, B3, B4, B5, B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
# fifth minus fourth order weights
E1 = B1 - 5179.0 / 57600.0
E3 = B3 - 7571.0 / 16695.0
E4 = B4 - 393.0 / 640.0
E5 = B5 + 92097.0 / 339200.0
E6 = B6 - 187.0 / 2100.0
E7 = -1.0 / 40.0

C2, C3, C4, C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0


@dataclass
class Trajectory:
    t: np.ndarray
    y: np.ndarray
    n_steps: int
    n_rejected: int

    @property
    def final(self):
        return self.y[-1]

    def rows(self):
        return [(float(t),) + tuple(float(v) for v in y) for t, y in zip(self.t, self.y)]


def _initial_step(rhs, t, y, f, rtol, atol, span):
    scale = atol + rtol * np.abs(y)
    d0 = math.sqrt(np.mean((y / scale) ** 2))
    d1 = math.sqrt(np.mean((f / scale) ** 2))
    h = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    return min(h, span) if span > 0 else h


def integrate(rhs, n0, t_end, rtol=1e-9, atol=1e-12, sample_times=None, t0=0.0,
              max_steps=1_000_000, positive=True, h0=None):
    """Integrate ``y' = rhs(t, y)`` from ``t0`` to ``t_end``.

    With ``sample_times`` the trajectory holds exactly those times (steps are
    clipped to land on them); otherwise every accepted step is recorded.
    Raises ``IntegrationError`` if the step size underflows or the step
    budget runs out.
    """
    if not rtol > 0 or not atol > 0:
        raise InvalidParametersError(f'tolerances must be positive, got rtol={rtol}, atol={atol}')
    y = np.array(n0, dtype=float)
    if positive and np.any(y < 0):
        raise InvalidParametersError(f'initial state must be nonnegative, got {y.tolist()}')
    if t_end < t0:
        raise InvalidParametersError(f't_end = {t_end} precedes t0 = {t0}')
    if sample_times is None:
        targets = [t_end]
        record_steps = True
    else:
        targets = sorted(float(s) for s in sample_times)
        if targets and (targets[0] < t0 or targets[-1] > t_end):
            raise InvalidParametersError('sample times must lie within [t0, t_end]')
        record_steps = False

    t = float(t0)
    ts = [t] if record_steps else []
    ys = [y.copy()] if record_steps else []
    target_index = 0

    f = np.asarray(rhs(t, y), dtype=float)
    h = h0 if h0 is not None else _initial_step(rhs, t, y, f, rtol, atol, t_end - t)
    steps = 0
    rejected = 0
    while target_index < len(targets):
        target = targets[target_index]
        if t >= target:
            if not record_steps:
                ts.append(target)
                ys.append(y.copy())
            target_index += 1
            continue
        if steps >= max_steps:
            raise IntegrationError(f'step budget of {max_steps} exhausted', t=t, state=y.tolist())
        if target - t <= 1e-14 * max(1.0, abs(t)):
            t = target
            if record_steps:
                ts[-1] = t
            continue
        h_use = min(h, target - t)
        if h_use <= 1e-14 * max(1.0, abs(t)):
            raise IntegrationError(f'step size underflow (h = {h_use:.3e})', t=t, state=y.tolist())
        k1 = f
        k2 = np.asarray(rhs(t + C2 * h_use, y + h_use * (A21 * k1)))
        k3 = np.asarray(rhs(t + C3 * h_use, y + h_use * (A31 * k1 + A32 * k2)))
        k4 = np.asarray(rhs(t + C4 * h_use, y + h_use * (A41 * k1 + A42 * k2 + A43 * k3)))
        k5 = np.asarray(rhs(t + C5 * h_use, y + h_use * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4)))
        k6 = np.asarray(rhs(t + h_use, y + h_use * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5)))
        y_new = y + h_use * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)
        steps += 1
        if positive and np.any(y_new < 0):
            rejected += 1
            h = 0.5 * h_use
            continue
        k7 = np.asarray(rhs(t + h_use, y_new))
        err_vec = h_use * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = math.sqrt(np.mean((err_vec / scale) ** 2))
        if err <= 1.0:
            t = target if h_use == target - t else t + h_use
            y = y_new
            f = k7
            if record_steps:
                ts.append(t)
                ys.append(y.copy())
            factor = MAX_FACTOR if err == 0 else min(MAX_FACTOR, max(MIN_FACTOR, SAFETY * err ** -0.2))
            # a step clipped to land on a target does not grow h
            if h_use >= h:
                h = h_use * factor
        else:
            rejected += 1
            h = h_use * max(MIN_FACTOR, SAFETY * err ** -0.2)

    logger.debug('integrated to t=%r in %d steps (%d rejected)', t, steps, rejected)
    return Trajectory(t=np.array(ts), y=np.array(ys).reshape(len(ts), -1), n_steps=steps, n_rejected=rejected)

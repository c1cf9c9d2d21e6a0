# -*- coding: utf-8 -*-

"""Deterministic analysis of the competitive Lotka-Volterra system and its
version with mutation at birth.

Interior fixed points of the mutation system satisfy n_a = rho * n_A where
rho solves the cubic

    m_a C_aa rho^3 + (rho_A C_aa - rho_a C_Aa + m_a C_aA) rho^2
        + (rho_A C_aA - rho_a C_AA - m_A C_Aa) rho - m_A C_AA = 0

with m_A = f_A lambda_Aa, m_a = f_a lambda_aA and rho_alpha the
mutation-discounted growth rates. Roots are taken from the closed forms
(Cardano for one real root, the trigonometric form for three) and then
Newton-polished on the full two-dimensional system.
"""

import cmath
import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import optimize

from sweep_utils.errors import EntryTimeError, InvalidParametersError
from sweep_utils.model import (coexistence_equilibrium, equilibrium_density, growth_rates,
                               invasion_fitness)
from sweep_utils.ode_integrator import integrate

logger = logging.getLogger(__name__)

DEDUPE_TOL = 1e-8
DELTA_ZERO_TOL = 1e-12
BASIN_RTOL = 1e-12
BASIN_ATOL = 1e-14


def lv_rhs(params, n):
    n_A, n_a = n
    C = params.C
    return np.array([
        (params.f_A - params.D_A - C[0][0] * n_A - C[0][1] * n_a) * n_A,
        (params.f_a - params.D_a - C[1][0] * n_A - C[1][1] * n_a) * n_a,
    ])


def mut_rhs(params, lambda_Aa, lambda_aA, n):
    n_A, n_a = n
    C = params.C
    return np.array([
        (params.f_A * (1.0 - lambda_Aa) - params.D_A - C[0][0] * n_A - C[0][1] * n_a) * n_A
        + params.f_a * lambda_aA * n_a,
        (params.f_a * (1.0 - lambda_aA) - params.D_a - C[1][0] * n_A - C[1][1] * n_a) * n_a
        + params.f_A * lambda_Aa * n_A,
    ])


def lv_field(params):
    return lambda t, n: lv_rhs(params, n)


def mut_field(params, lambda_Aa, lambda_aA):
    return lambda t, n: mut_rhs(params, lambda_Aa, lambda_aA, n)


@dataclass(frozen=True)
class CubicData:
    p: float
    q: float
    r: float
    delta: float
    # monic cubic rho^3 + B rho^2 + C rho + D
    B: float
    C: float
    D: float

    def evaluate(self, rho):
        return ((rho + self.B) * rho + self.C) * rho + self.D

    def relative_residual(self, rho):
        scale = abs(rho) ** 3 + abs(self.B) * rho * rho + abs(self.C) * abs(rho) + abs(self.D)
        return abs(self.evaluate(rho)) / scale if scale else 0.0

    def to_dict(self):
        return {'p': self.p, 'q': self.q, 'r': self.r, 'delta': self.delta}


def cubic_coefficients(params, lambda_Aa, lambda_aA):
    m_a = params.f_a * lambda_aA
    m_A = params.f_A * lambda_Aa
    C = params.C
    lead = m_a * C[1][1]
    if lead == 0:
        raise InvalidParametersError('lambda_aA = 0: no cubic, use the fixed points of the system without mutation')
    rho_A, rho_a = growth_rates(params, lambda_Aa, lambda_aA)
    B = (rho_A * C[1][1] - rho_a * C[0][1] + m_a * C[1][0]) / lead
    Cc = (rho_A * C[1][0] - rho_a * C[0][0] - m_A * C[0][1]) / lead
    D = -m_A * C[0][0] / lead
    p = Cc - B * B / 3.0
    q = B / 27.0 * (2.0 * B * B - 9.0 * Cc) + D
    return CubicData(p=p, q=q, r=B / 3.0, delta=-(4.0 * p ** 3 + 27.0 * q * q), B=B, C=Cc, D=D)


@dataclass(frozen=True)
class CubicRoots:
    roots: Tuple[float, ...]
    branch: str
    degenerate: bool = False
    double_root: Optional[float] = None


def cubic_roots(cubic):
    """Real roots from the closed forms, before any polishing.

    The roots of the depressed cubic x^3 + p x + q are shifted by -r.
    """
    p, q, r = cubic.p, cubic.q, cubic.r
    four_p3 = 4.0 * p ** 3
    scale = max(abs(four_p3), 27.0 * q * q)
    if abs(cubic.delta) <= DELTA_ZERO_TOL * scale or scale == 0:
        if p == 0:
            return CubicRoots(roots=(-r,), branch='zero', degenerate=True, double_root=-r)
        simple = 3.0 * q / p - r
        double = -3.0 * q / (2.0 * p) - r
        return CubicRoots(roots=(simple, double), branch='zero', double_root=double)
    if cubic.delta < 0:
        root = math.sqrt(-cubic.delta / 108.0)
        x = float(np.cbrt(-q / 2.0 + root) + np.cbrt(-q / 2.0 - root))
        return CubicRoots(roots=(x - r,), branch='negative')
    amplitude = 2.0 * math.sqrt(-p / 3.0)
    argument = max(-1.0, min(1.0, (-q / 2.0) * math.sqrt(27.0 / -p ** 3)))
    phi = math.acos(argument) / 3.0
    roots = tuple(amplitude * math.cos(phi + 2.0 * k * math.pi / 3.0) - r for k in range(3))
    return CubicRoots(roots=roots, branch='positive')


def jacobian(params, lambda_Aa, lambda_aA, n, form='general'):
    """Jacobian of the mutation system at n.

    ``form='interior'`` uses the simplification valid at interior fixed
    points, where the diagonal reads -C_AA n_A - m_a n_a / n_A and
    -C_aa n_a - m_A n_A / n_a.
    """
    n_A, n_a = n
    C = params.C
    m_A = params.f_A * lambda_Aa
    m_a = params.f_a * lambda_aA
    rho_A, rho_a = growth_rates(params, lambda_Aa, lambda_aA)
    J12 = -C[0][1] * n_A + m_a
    J21 = -C[1][0] * n_a + m_A
    if form == 'interior':
        if not (n_A > 0 and n_a > 0):
            raise InvalidParametersError('the interior Jacobian form needs positive coordinates')
        J11 = -C[0][0] * n_A - m_a * n_a / n_A
        J22 = -C[1][1] * n_a - m_A * n_A / n_a
    elif form == 'general':
        J11 = rho_A - 2.0 * C[0][0] * n_A - C[0][1] * n_a
        J22 = rho_a - C[1][0] * n_A - 2.0 * C[1][1] * n_a
    else:
        raise InvalidParametersError(f'unknown Jacobian form {form!r}')
    return np.array([[J11, J12], [J21, J22]])


def eigenvalues(J):
    """Eigenvalues of a 2x2 matrix from trace and determinant, ascending real part."""
    trace = J[0][0] + J[1][1]
    det = J[0][0] * J[1][1] - J[0][1] * J[1][0]
    disc = trace * trace - 4.0 * det
    if disc >= 0:
        s = math.sqrt(disc)
        big = 0.5 * (trace + math.copysign(s, trace))
        small = det / big if big != 0 else 0.0
        pair = sorted((big, small))
        return complex(pair[0]), complex(pair[1])
    s = cmath.sqrt(disc)
    return (trace - s) / 2.0, (trace + s) / 2.0


KINDS = ('sink', 'source', 'saddle', 'saddle-node', 'degenerate')
INDEX = {'sink': 1, 'source': 1, 'saddle': -1, 'saddle-node': 0, 'degenerate': None}


def classify(eigvals, trace=None):
    """Kind and topological index from the eigenvalues."""
    if trace is None:
        trace = sum(e.real for e in eigvals)
    tol = 1e-7 * (1.0 + abs(trace))
    reals = [e.real for e in eigvals]
    near_zero = [abs(x) <= tol for x in reals]
    if all(near_zero):
        kind = 'degenerate'
    elif any(near_zero):
        kind = 'saddle-node'
    elif all(x < 0 for x in reals):
        kind = 'sink'
    elif all(x > 0 for x in reals):
        kind = 'source'
    else:
        kind = 'saddle'
    return kind, INDEX[kind]


@dataclass(frozen=True)
class FixedPointReport:
    n_A: float
    n_a: float
    rho: Optional[float]
    jacobian: tuple
    eigenvalues: tuple
    kind: str
    index: Optional[int]
    residual: float
    location: str = 'interior'

    @property
    def point(self):
        return np.array([self.n_A, self.n_a])

    @property
    def trace(self):
        return self.jacobian[0][0] + self.jacobian[1][1]

    def to_dict(self):
        return {
            'n_A': self.n_A,
            'n_a': self.n_a,
            'rho': self.rho,
            'jacobian': [list(row) for row in self.jacobian],
            'eigenvalues': [[e.real, e.imag] for e in self.eigenvalues],
            'kind': self.kind,
            'index': self.index,
            'residual': self.residual,
            'location': self.location,
        }


def _report(params, lambda_Aa, lambda_aA, n, rho=None, location='interior'):
    J = jacobian(params, lambda_Aa, lambda_aA, n)
    eig = eigenvalues(J)
    kind, index = classify(eig, J[0][0] + J[1][1])
    residual = float(np.max(np.abs(mut_rhs(params, lambda_Aa, lambda_aA, n))))
    return FixedPointReport(
        n_A=float(n[0]), n_a=float(n[1]), rho=rho,
        jacobian=tuple(tuple(float(x) for x in row) for row in J),
        eigenvalues=eig, kind=kind, index=index, residual=residual, location=location,
    )


def polish(params, lambda_Aa, lambda_aA, n, max_iter=20):
    """Damped Newton on the mutation system; a step is kept only if the residual drops."""
    n = np.array(n, dtype=float)
    F = mut_rhs(params, lambda_Aa, lambda_aA, n)
    res = float(np.max(np.abs(F)))
    for _ in range(max_iter):
        if res == 0.0:
            break
        J = jacobian(params, lambda_Aa, lambda_aA, n)
        det = J[0][0] * J[1][1] - J[0][1] * J[1][0]
        if abs(det) <= 1e-12 * (1.0 + float(np.max(np.abs(J)))) ** 2:
            break
        step = np.linalg.solve(J, -F)
        damping = 1.0
        improved = False
        while damping >= 1.0 / 64:
            candidate = n + damping * step
            F_new = mut_rhs(params, lambda_Aa, lambda_aA, candidate)
            res_new = float(np.max(np.abs(F_new)))
            if res_new < res and np.all(candidate > 0):
                n, F, res = candidate, F_new, res_new
                improved = True
                break
            damping /= 2.0
        if not improved:
            break
    return n


def _same_point(a, b):
    return all(abs(x - y) <= DEDUPE_TOL * max(1.0, abs(x), abs(y)) for x, y in zip(a, b))


def interior_fixed_points(params, lambda_Aa, lambda_aA, polish_points=True):
    """Fixed points of the mutation system in the open positive quadrant, ordered by n_A."""
    cubic = cubic_coefficients(params, lambda_Aa, lambda_aA)
    found = cubic_roots(cubic)
    if found.degenerate:
        logger.warning('triple root of the fixed-point cubic at rho = %r', found.roots[0])
    rho_A, _ = growth_rates(params, lambda_Aa, lambda_aA)
    m_a = params.f_a * lambda_aA
    C = params.C
    reports = []
    for rho in found.roots:
        if not rho > 0:
            continue
        n_A = (rho_A + m_a * rho) / (C[0][0] + C[0][1] * rho)
        if not n_A > 0:
            continue
        n = np.array([n_A, rho * n_A])
        # the double root of a tangency sits where the Jacobian is singular
        if polish_points and rho != found.double_root:
            n = polish(params, lambda_Aa, lambda_aA, n)
        if any(_same_point(n, r.point) for r in reports):
            continue
        reports.append(_report(params, lambda_Aa, lambda_aA, n, rho=float(n[1] / n[0])))
    reports.sort(key=lambda r: r.n_A)
    logger.debug('cubic branch %s, %d interior fixed points', found.branch, len(reports))
    return reports


def origin_report(params, lambda_Aa, lambda_aA):
    return _report(params, lambda_Aa, lambda_aA, np.zeros(2), location='origin')


def boundary_fixed_points(params):
    """Fixed points of the system without mutation on the axes: (0,0), (n_bar_A,0), (0,n_bar_a)."""
    reports = [_report(params, 0.0, 0.0, np.zeros(2), location='origin')]
    n_A = equilibrium_density(params, 'A')
    n_a = equilibrium_density(params, 'a')
    if n_A > 0:
        reports.append(_report(params, 0.0, 0.0, np.array([n_A, 0.0]), location='boundary'))
    if n_a > 0:
        reports.append(_report(params, 0.0, 0.0, np.array([0.0, n_a]), location='boundary'))
    return reports


def index_sum(reports):
    """Sum of topological indices; None if any point is degenerate."""
    indices = [r.index for r in reports]
    if any(i is None for i in indices):
        logger.warning('degenerate fixed point present, index sum is indeterminate')
        return None
    return sum(indices)


def tangency_growth_rate(params, lambda_Aa, lambda_aA, bracket, xtol=1e-14):
    """Growth rate rho_A at which the fixed-point cubic has a double root.

    rho_A is varied through D_A with every other parameter held; ``bracket``
    must enclose a sign change of the discriminant.
    """
    base = params.f_A * (1.0 - lambda_Aa)

    def discriminant(rho_A):
        shifted = dataclasses.replace(params, D_A=base - rho_A)
        return cubic_coefficients(shifted, lambda_Aa, lambda_aA).delta

    lo, hi = bracket
    if discriminant(lo) * discriminant(hi) > 0:
        raise InvalidParametersError(f'the discriminant does not change sign on [{lo}, {hi}]')
    return optimize.brentq(discriminant, lo, hi, xtol=xtol)


def with_growth_rate(params, lambda_Aa, rho_A):
    """Copy of ``params`` whose mutation-discounted A growth rate is ``rho_A``."""
    return dataclasses.replace(params, D_A=params.f_A * (1.0 - lambda_Aa) - rho_A)


def invariant_compact(params):
    """Bounds (lo, hi) on n_A + n_a of a compact set every nonzero trajectory enters and stays in.

    The mutation terms cancel in d(n_A + n_a)/dt, so the bounds hold for
    every mutation rate.
    """
    growth = (params.f_A - params.D_A, params.f_a - params.D_a)
    entries = [c for row in params.C for c in row]
    return 0.5 * min(growth) / max(entries), 2.0 * max(growth) / min(entries)


@dataclass(frozen=True)
class ConditionReport:
    rho_A: float
    rho_a: float
    determinant_condition: bool
    delta: dict
    n_star: dict
    upper: dict
    S_tilde: dict
    clause: dict
    hyperbola_case: Tuple[str, str]
    unique_sink: bool
    origin_kind: str

    def to_dict(self):
        return {
            'rho_A': self.rho_A,
            'rho_a': self.rho_a,
            'determinant_condition': self.determinant_condition,
            'delta': dict(self.delta),
            'n_star': dict(self.n_star),
            'upper': dict(self.upper),
            'S_tilde': dict(self.S_tilde),
            'clause': dict(self.clause),
            'hyperbola_case': list(self.hyperbola_case),
            'unique_sink': self.unique_sink,
            'origin_kind': self.origin_kind,
        }


def check_conditions(params, lambda_Aa, lambda_aA):
    """Sufficient conditions for a unique interior sink and the bounds they give."""
    C = params.C
    rho = dict(zip(('A', 'a'), growth_rates(params, lambda_Aa, lambda_aA)))
    # mutation flux into alpha from the other allele
    inflow = {'A': params.f_a * lambda_aA, 'a': params.f_A * lambda_Aa}
    own = {'A': C[0][0], 'a': C[1][1]}
    cross = {'A': C[0][1], 'a': C[1][0]}
    n_star = {k: rho[k] / own[k] for k in rho}
    delta = {k: inflow[k] - n_star[k] * cross[k] for k in rho}
    upper = {k: inflow[k] / cross[k] for k in rho}
    S_tilde = {'Aa': rho['A'] - C[0][1] / C[1][1] * rho['a'],
               'aA': rho['a'] - C[1][0] / C[0][0] * rho['A']}
    clause = {k: delta[k] > 0 for k in rho}
    determinant_condition = C[1][1] * C[0][0] > C[0][1] * C[1][0]
    case = ('A' if clause['A'] else 'B', 'C' if clause['a'] else 'D')
    origin = 'source' if rho['A'] * rho['a'] > inflow['A'] * inflow['a'] else 'saddle'
    if rho['A'] * rho['a'] == inflow['A'] * inflow['a']:
        origin = 'degenerate'
    return ConditionReport(
        rho_A=rho['A'], rho_a=rho['a'],
        determinant_condition=determinant_condition,
        delta=delta, n_star=n_star, upper=upper, S_tilde=S_tilde, clause=clause,
        hyperbola_case=case,
        unique_sink=determinant_condition or clause['A'] or clause['a'],
        origin_kind=origin,
    )


def verify_conditions(report, fixed_points):
    """Consequences of ``report`` that ``fixed_points`` contradict; empty when consistent."""
    failures = []
    if report.unique_sink:
        if len(fixed_points) != 1:
            failures.append(f'expected one interior fixed point, found {len(fixed_points)}')
        elif fixed_points[0].kind != 'sink':
            failures.append(f'expected a sink, found {fixed_points[0].kind}')
    if len(fixed_points) == 1 and (report.clause['A'] or report.clause['a']):
        point = {'A': fixed_points[0].n_A, 'a': fixed_points[0].n_a}
        for k in ('A', 'a'):
            lower = report.n_star[k]
            upper = report.upper[k]
            if report.clause[k] and not upper > point[k] > lower:
                failures.append(f'n_{k} = {point[k]} outside ({lower}, {upper})')
            # the sign of delta orders the bounds and the fixed point the same way
            sign = math.copysign(1.0, report.delta[k]) if report.delta[k] else 0.0
            if sign and (math.copysign(1.0, upper - point[k]) != sign
                         or math.copysign(1.0, point[k] - lower) != sign):
                failures.append(f'n_{k} = {point[k]} not ordered with ({lower}, {upper}) as delta predicts')
    return failures


@dataclass(frozen=True)
class PerturbationEquilibrium:
    clause: str
    zeroth: Tuple[float, float]
    first: Tuple[float, float]
    lam: float
    printed_first: Optional[Tuple[float, float]] = None

    @property
    def value(self):
        return (self.zeroth[0] + self.first[0] * self.lam, self.zeroth[1] + self.first[1] * self.lam)

    def to_dict(self):
        return {'clause': self.clause, 'zeroth': list(self.zeroth), 'first': list(self.first),
                'lambda': self.lam, 'value': list(self.value),
                'printed_coefficients': list(self.printed_first) if self.printed_first else None}


def perturbation_equilibrium(params, p, lam):
    """First-order expansion in lam of the stable equilibrium when lambda_aA = lam, lambda_Aa = p lam.

    With S_aA > 0 > S_Aa the expansion is around (0, n_bar_a); with both
    invasion fitnesses positive it is around the coexistence equilibrium.
    """
    if not (params.f_A > params.D_A and params.f_a > params.D_a):
        raise InvalidParametersError('both alleles need f > D')
    S_aA = invasion_fitness(params, 'a')
    S_Aa = invasion_fitness(params, 'A')
    C = params.C
    f_A, f_a = params.f_A, params.f_a
    if S_aA > 0 > S_Aa:
        n_a = equilibrium_density(params, 'a')
        first = (f_a * n_a / -S_Aa, -(f_a / C[1][1]) * (1.0 + C[1][0] * n_a / -S_Aa))
        printed = (f_a * (f_a - params.D_a) / (C[0][1] * S_aA),
                   -(f_a / C[1][1]) * (C[0][1] * S_aA + (f_a - params.D_a) * C[1][0]) / (C[0][1] * S_aA))
        return PerturbationEquilibrium(clause='monomorphic', zeroth=(0.0, n_a), first=first, lam=lam,
                                       printed_first=printed)
    if S_aA > 0 and S_Aa > 0:
        n_A, n_a = coexistence_equilibrium(params)
        logger.debug('coexistence equilibrium taken with birth rates f and death rates D: (%r, %r)', n_A, n_a)
        det = C[1][1] * C[0][0] - C[1][0] * C[0][1]
        u = f_a * n_a / n_A - f_A * p
        v = f_A * p * n_A / n_a - f_a
        first = ((C[1][1] * u - C[0][1] * v) / det, (C[0][0] * v - C[1][0] * u) / det)
        return PerturbationEquilibrium(clause='coexistence', zeroth=(n_A, n_a), first=first, lam=lam,
                                       printed_first=first)
    raise InvalidParametersError(f'no expansion for S_aA = {S_aA}, S_Aa = {S_Aa}')


def entry_time(params, z, epsilon, horizon=1000.0, n_samples=4001, rtol=1e-9, atol=1e-12):
    """First time after which the solution of the system without mutation stays in
    [0, epsilon**2 / 2] x [n_bar_a - epsilon / 2, inf) up to ``horizon``.
    """
    S_aA = invasion_fitness(params, 'a')
    S_Aa = invasion_fitness(params, 'A')
    if not S_aA > 0 > S_Aa:
        raise InvalidParametersError('entry time needs S_aA > 0 > S_Aa')
    if not z[1] > 0 or z[0] < 0:
        raise InvalidParametersError(f'initial point needs n_A >= 0 and n_a > 0, got {tuple(z)}')
    bound = min(params.C[1][1] / params.C[1][0], 2.0 * abs(S_Aa) / params.C[0][1])
    if not 0 < epsilon <= bound:
        raise InvalidParametersError(f'epsilon must lie in (0, {bound}], got {epsilon}')
    n_bar_a = equilibrium_density(params, 'a')
    a_max = epsilon * epsilon / 2.0
    a_min = n_bar_a - epsilon / 2.0

    def inside(n):
        return n[0] <= a_max and n[1] >= a_min

    field = lv_field(params)
    times = np.linspace(0.0, horizon, n_samples)
    path = integrate(field, z, horizon, rtol=rtol, atol=atol, sample_times=times)
    outside = [k for k, n in enumerate(path.y) if not inside(n)]
    if not outside:
        return 0.0
    last = outside[-1]
    if last == len(times) - 1:
        raise EntryTimeError(f'trajectory from {tuple(z)} is outside the target box at the horizon {horizon}')
    lo, hi = float(times[last]), float(times[last + 1])
    start = path.y[last]
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        state = integrate(field, start, mid - times[last], rtol=rtol, atol=atol).final
        if inside(state):
            hi = mid
        else:
            lo = mid
    return hi


def unstable_direction(report):
    """Unit eigenvector of the positive eigenvalue of a saddle."""
    if report.kind != 'saddle':
        raise InvalidParametersError(f'unstable direction needs a saddle, got {report.kind}')
    J = report.jacobian
    lam = max(e.real for e in report.eigenvalues)
    candidates = [np.array([J[0][1], lam - J[0][0]]), np.array([lam - J[1][1], J[1][0]])]
    v = max(candidates, key=lambda c: float(np.linalg.norm(c)))
    v = v / np.linalg.norm(v)
    return -v if v[0] < 0 or (v[0] == 0 and v[1] < 0) else v


@dataclass(frozen=True)
class BasinEnd:
    start: Tuple[float, float]
    end: Tuple[float, float]
    velocity: float
    nearest: Optional[int]

    def to_dict(self):
        return {'start': list(self.start), 'end': list(self.end), 'velocity': self.velocity,
                'nearest': self.nearest}


def basin_split(params, lambda_Aa, lambda_aA, saddle, fixed_points, delta=1e-6, horizon=1000.0):
    """Integrate from the saddle pushed by +delta and -delta along its unstable direction.

    ``nearest`` is the position in ``fixed_points`` of the point each run
    ends closest to.
    """
    v = unstable_direction(saddle)
    field = mut_field(params, lambda_Aa, lambda_aA)
    ends = []
    for sign in (1.0, -1.0):
        start = saddle.point + sign * delta * v
        final = integrate(field, start, horizon, rtol=BASIN_RTOL, atol=BASIN_ATOL,
                          sample_times=[horizon]).final
        velocity = float(np.linalg.norm(mut_rhs(params, lambda_Aa, lambda_aA, final)))
        distances = [float(np.linalg.norm(final - fp.point)) for fp in fixed_points]
        nearest = int(np.argmin(distances)) if distances else None
        ends.append(BasinEnd(start=tuple(start.tolist()), end=tuple(final.tolist()),
                             velocity=velocity, nearest=nearest))
    return tuple(ends)

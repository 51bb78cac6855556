"""Singular radial ODE solvers.

This module handles the two ODE families posed on [0, 1]:

* the semilinear boundary value problem
  ``U'' + U'/r = lam f(U), U'(0) = 0, U(1) = 1``, solved by shooting on the
  center value,
* the linear initial value problems
  ``u'' + (2n+1)/r u' = R**2 f'(v0) u, u(0) = 1, u'(0) = 0`` for the angular
  mode families,

together with the steady-radius equation ``dU/dr(1, R**2) = A R**2 / 2`` and
the explicit power series for the first two mode profiles of the identity
model.

Both ODE families are singular at r = 0; integration is launched from a small
series start radius with a two-term Taylor expansion, which carries an O(r**4)
launch error, well below the integration tolerances.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import BracketError, SolverError, ValidationError
from .models import NutrientModel

_EMPTY = np.empty(0)


@dataclass(frozen=True)
class SolverSettings:
    abs_tol: float = 1e-14
    rel_tol: float = 1e-12
    series_start_radius: float = 1e-4
    max_newton_iters: int = 60
    bisection_bracket: tuple = (1e-12, 1.0)
    n_nodes: int = 65

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValidationError("tolerances must be positive")
        if not 0 < self.series_start_radius <= 1e-2:
            raise ValidationError("series_start_radius must lie in (0, 1e-2]")


def chebyshev_nodes(n_nodes):
    """Chebyshev-Lobatto nodes mapped to [0, 1], ascending, endpoints included."""
    j = np.arange(n_nodes)
    return 0.5 * (1.0 - np.cos(np.pi * j / (n_nodes - 1)))


def barycentric_weights(n_nodes):
    w = (-1.0) ** np.arange(n_nodes)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def differentiation_matrix(nodes, weights):
    """Nodal differentiation matrix from barycentric weights."""
    x = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(x, 1.0)
    d = (weights[None, :] / weights[:, None]) / x
    np.fill_diagonal(d, 0.0)
    np.fill_diagonal(d, -d.sum(axis=1))
    return d


@dataclass(frozen=True)
class RadialProfile:
    """A radially symmetric field sampled on a Chebyshev grid of [0, 1]."""

    grid: np.ndarray
    values: np.ndarray
    deriv_at_1: float
    deriv_at_0: float
    provenance: str
    deriv_values: np.ndarray = None
    _weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_weights", barycentric_weights(len(self.grid)))

    def at(self, r):
        """Barycentric evaluation at scalar or array radii."""
        r_arr = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.array([
            _kernels.barycentric_eval(self.grid, self.values, self._weights, ri)
            for ri in r_arr
        ])
        return out if np.ndim(r) else float(out[0])

    def deriv_at(self, r):
        if self.deriv_values is None:
            raise ValueError("profile carries no derivative samples")
        r_arr = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.array([
            _kernels.barycentric_eval(self.grid, self.deriv_values, self._weights, ri)
            for ri in r_arr
        ])
        return out if np.ndim(r) else float(out[0])

    @property
    def value_at_1(self):
        return float(self.values[-1])

    @property
    def value_at_0(self):
        return float(self.values[0])


def _integrate_to_nodes(kind, m, lam, coeffs, vnodes, vvalues, vweights,
                        r_start, u_start, w_start, nodes, settings):
    r_out = nodes[nodes >= r_start]
    u_out, w_out, status = _kernels.integrate_radial(
        kind, float(m), lam, coeffs, vnodes, vvalues, vweights,
        r_start, u_start, w_start, r_out, settings.rel_tol, settings.abs_tol)
    if status == _kernels.STATUS_NONFINITE:
        raise SolverError("radial integration overflowed (range error); "
                          f"kind={kind}, m={m}, lam={lam}")
    if status == _kernels.STATUS_UNDERFLOW:
        raise SolverError("radial integration step size underflow")
    return u_out, w_out


def solve_U(lam, model: NutrientModel, settings: SolverSettings = SolverSettings()):
    """Solve the parameter-dependent center problem by shooting on U(0)."""
    if lam < 0:
        raise ValidationError("lam must be nonnegative")
    nodes = chebyshev_nodes(settings.n_nodes)

    if lam == 0.0:
        return RadialProfile(grid=nodes, values=np.ones_like(nodes),
                             deriv_at_1=0.0, deriv_at_0=0.0,
                             provenance="U(0)",
                             deriv_values=np.zeros_like(nodes))

    rs = settings.series_start_radius

    def shoot(c):
        # two-term series start removes the 1/r singularity
        fc = float(model.f_at(c))
        u0 = c + lam * fc * rs * rs / 4.0
        w0 = lam * fc * rs / 2.0
        u_out, w_out, status = _kernels.integrate_radial(
            _kernels.RHS_SEMILINEAR, 1.0, lam, model.f_coeffs,
            _EMPTY, _EMPTY, _EMPTY, rs, u0, w0, np.array([1.0]),
            settings.rel_tol, settings.abs_tol)
        if status != _kernels.STATUS_OK:
            # finite-radius blowup: the trial center value is too large
            return np.inf, np.inf
        return u_out[0], w_out[0]

    c_lo, c_hi = settings.bisection_bracket
    f_lo = shoot(c_lo)[0] - 1.0
    f_hi = shoot(c_hi)[0] - 1.0
    if f_lo > 0 or f_hi < -settings.abs_tol:
        raise BracketError(
            "shooting bracket failure for the center value: "
            f"U(1;{c_lo})-1={f_lo:.3e}, U(1;{c_hi})-1={f_hi:.3e}; "
            "lam may be outside the solvable range for this model",
            samples=((c_lo, f_lo), (c_hi, f_hi)))

    for _ in range(80):
        c_mid = 0.5 * (c_lo + c_hi)
        f_mid = shoot(c_mid)[0] - 1.0
        if f_mid <= 0.0:
            c_lo = c_mid
        else:
            c_hi = c_mid
        if abs(f_mid) < 0.01 * settings.abs_tol or c_hi - c_lo < 4e-17 * max(1.0, c_hi):
            break
    c = 0.5 * (c_lo + c_hi)

    fc = float(model.f_at(c))
    u0 = c + lam * fc * rs * rs / 4.0
    w0 = lam * fc * rs / 2.0
    body = nodes[nodes >= rs]
    u_out, w_out = _integrate_to_nodes(
        _kernels.RHS_SEMILINEAR, 1, lam, model.f_coeffs,
        _EMPTY, _EMPTY, _EMPTY, rs, u0, w0, body, settings)

    head = nodes[nodes < rs]
    fc_head = lam * float(model.f_at(c))
    values = np.concatenate([c + fc_head * head**2 / 4.0, u_out])
    derivs = np.concatenate([fc_head * head / 2.0, w_out])

    # the shot is conditioned like u(1)/u(0) = 1/c: tolerance-floor errors
    # near the center amplify by that factor before reaching the boundary
    guard = max(100.0 * settings.abs_tol,
                1e3 * (settings.abs_tol + 1e-16) / max(c, 1e-12))
    if abs(values[-1] - 1.0) > guard:
        raise SolverError(f"shooting did not meet the outer boundary value: "
                          f"|U(1)-1| = {abs(values[-1] - 1.0):.3e}")
    return RadialProfile(grid=nodes, values=values,
                         deriv_at_1=float(derivs[-1]), deriv_at_0=0.0,
                         provenance=f"U({lam})", deriv_values=derivs)


def solve_u_n(n, R_A, v0: RadialProfile, model: NutrientModel,
              settings: SolverSettings = SolverSettings()):
    """Solve the mode-n linear initial value problem launched from a series start."""
    if n < 0:
        raise ValidationError("n must be nonnegative")
    if R_A <= 0:
        raise ValidationError("R_A must be positive")
    nodes = chebyshev_nodes(settings.n_nodes)
    rs = settings.series_start_radius
    lam = R_A * R_A
    m = 2 * n + 1
    vweights = barycentric_weights(len(v0.grid))

    a = lam * float(model.fprime_at(v0.value_at_0)) / (2.0 * (2.0 * n + 2.0))
    u0 = 1.0 + a * rs * rs
    w0 = 2.0 * a * rs
    body = nodes[nodes >= rs]
    u_out, w_out = _integrate_to_nodes(
        _kernels.RHS_LINEARIZED, m, lam, model.fprime_coeffs,
        v0.grid, v0.values, vweights, rs, u0, w0, body, settings)

    head = nodes[nodes < rs]
    values = np.concatenate([1.0 + a * head**2, u_out])
    derivs = np.concatenate([2.0 * a * head, w_out])
    return RadialProfile(grid=nodes, values=values,
                         deriv_at_1=float(derivs[-1]), deriv_at_0=0.0,
                         provenance=f"u_n({n})", deriv_values=derivs)


def boundary_ratio(n, R_A, v0, model, settings=SolverSettings()):
    """Return u_n'(1) / u_n(1)."""
    profile = solve_u_n(n, R_A, v0, model, settings)
    return profile.deriv_at_1 / profile.value_at_1


@dataclass(frozen=True)
class SteadyState:
    R_A: float
    alpha_A: float
    v0: RadialProfile
    A: float


def steady_radius(A, model: NutrientModel, settings: SolverSettings = SolverSettings(),
                  R_max=16.0):
    """Locate the steady radius and its radial nutrient profile.

    The steady radius solves dU/dr(1, R**2) = A R**2 / 2; the left side is
    computed by shooting, the root located by bracketing and Brent iteration.
    """
    f1 = model.f_of_one
    if not 0.0 < A < f1:
        raise ValidationError(f"A must lie in (0, f(1)) = (0, {f1}); got {A}")

    def g(R):
        return solve_U(R * R, model, settings).deriv_at_1 - A * R * R / 2.0

    lo = 1e-3
    g_lo = g(lo)
    hi = 1.0
    g_hi = g(hi)
    samples = [(lo, g_lo), (hi, g_hi)]
    while g_hi > 0.0 and hi < R_max:
        hi = min(2.0 * hi, R_max)
        g_hi = g(hi)
        samples.append((hi, g_hi))
    if g_lo <= 0.0 or g_hi >= 0.0:
        raise BracketError(
            "no sign change when bracketing the steady radius; sampled "
            + ", ".join(f"g({r:.4g})={v:.4g}" for r, v in samples),
            samples=samples)

    from scipy.optimize import brentq
    R_A = brentq(g, lo, hi, xtol=1e-14, rtol=8.9e-16)

    v0 = solve_U(R_A * R_A, model, settings)
    alpha_A = R_A * R_A * (f1 - A / 2.0)
    return SteadyState(R_A=float(R_A), alpha_A=float(alpha_A), v0=v0, A=float(A))


def appendix_series(which, x, terms):
    """Partial sums of the explicit power series for the first two mode profiles."""
    if terms < 1:
        raise ValidationError("terms must be >= 1")
    if which not in ("u0", "u1"):
        raise ValidationError("which must be 'u0' or 'u1'")
    total = 1.0
    coeff = 1.0
    for k in range(1, terms):
        if which == "u0":
            coeff /= (2.0 * k) ** 2
        else:
            coeff /= 2.0 * k * (2.0 * k + 2.0)
        total += coeff * x ** (2 * k)
    return total


def ode_residual_on_midpoints(profile: RadialProfile, m, lam, rhs):
    """Max residual of u'' + (m/r) u' = rhs(r, u) on the interpolated midpoint grid.

    Differentiates the stored derivative samples spectrally, so the check does
    not reuse the integrator that produced the profile.
    """
    nodes, w = profile.grid, barycentric_weights(len(profile.grid))
    d = differentiation_matrix(nodes, w)
    upp_nodes = d @ profile.deriv_values
    mids = 0.5 * (nodes[1:] + nodes[:-1])
    mids = mids[mids > 1e-3]  # avoid the 1/r amplification near the center
    upp = np.array([_kernels.barycentric_eval(nodes, upp_nodes, w, r) for r in mids])
    up = np.array([_kernels.barycentric_eval(nodes, profile.deriv_values, w, r) for r in mids])
    u = np.array([_kernels.barycentric_eval(nodes, profile.values, w, r) for r in mids])
    res = upp + m * up / mids - rhs(mids, u)
    return float(np.max(np.abs(res)))

"""The nonlinear boundary velocity and its time integration.

phi assembles the boundary velocity from the two field solves, the boundary
normal factor, and the mitosis drift:

    phi(rho) = [ c (G v_r - q_r) - beta (G v_t - q_t) ] / (R**2 h)
               - (A G / 2) h,
    h = 1 + rho,  beta = rho'/h,  c = (1 + beta**2) h / phi_r(1),

with all traces taken at the mapped boundary r = 1 and phi_r the radial
Jacobian of the blended map there. Time stepping treats the
stiff cubic principal symbol -|k|**3/R**3 implicitly per Fourier mode and the
remainder explicitly; step doubling supplies both the error estimate and a
second-order extrapolated update.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .fields import (BoundaryGeometry, GridSettings, solve_nutrient,
                     solve_pressure)
from .disk import dealias, theta_derivative
from .models import NutrientModel
from .radial import solve_U
from .shapes import ADMISSIBLE_SUP_NORM, ShapeState


@dataclass(frozen=True)
class PhiResult:
    values: np.ndarray        # boundary velocity on the angular grid
    coeffs: np.ndarray        # its Fourier coefficients, k = 0..n_modes
    nutrient: object
    pressure: object


def phi(shape: ShapeState, A, G, model: NutrientModel,
        settings: GridSettings = GridSettings(), grid=None,
        radial_guess=None, nutrient_warm_start=None, n_modes=None):
    """Evaluate the boundary velocity for the given shape."""
    grid = grid or settings.make_grid()
    R = shape.radius_scale
    if radial_guess is None:
        radial_guess = solve_U(R * R, model)

    nut = solve_nutrient(shape, model, settings, grid, radial_guess=radial_guess,
                         initial_values=nutrient_warm_start)
    pres = solve_pressure(shape, A, G, settings, grid)

    geom = BoundaryGeometry.from_shape(shape, grid.n_theta)
    h = 1.0 + geom.rho
    beta = geom.rho_p / h
    # phi_r at r = 1 of the blended map: 1 + E + 2 O with rho = E + O the
    # half-turn even/odd split
    J1 = 1.0 + 1.5 * geom.rho - 0.5 * np.roll(geom.rho, grid.n_theta // 2)

    v_r = nut.normal_derivative_trace
    v_t = theta_derivative(nut.boundary_trace)
    q_r = pres.normal_derivative_trace
    q_t = theta_derivative(pres.boundary_trace)

    radial_factor = (1.0 + beta**2) * h / J1
    values = (radial_factor * (G * v_r - q_r) - beta * (G * v_t - q_t)) \
        / (R * R * h) - 0.5 * A * G * h
    values = dealias(values)

    if n_modes is None:
        n_modes = grid.n_theta // 3
    spec = np.fft.rfft(values) / grid.n_theta
    coeffs = spec[:n_modes + 1].copy()
    coeffs[0] = coeffs[0].real
    return PhiResult(values=values, coeffs=coeffs, nutrient=nut, pressure=pres)


@dataclass(frozen=True)
class StepperSettings:
    dt_init: float = 1e-3
    dt_min: float = 1e-10
    dt_max: float = 0.25
    err_target: float = 1e-6


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    shape: ShapeState
    sup_norm: float
    phi_norm: float


@dataclass(frozen=True)
class Trajectory:
    points: tuple
    status: str       # "completed" or "left_neighbourhood"

    @property
    def times(self):
        return np.array([p.t for p in self.points])

    def amplitude_series(self, k):
        return [(p.t, p.shape.amplitude(k)) for p in self.points]

    @property
    def final_shape(self):
        return self.points[-1].shape


def evolve_nonlinear(shape0: ShapeState, t_end, A, G, model: NutrientModel,
                     grid_settings: GridSettings = GridSettings(),
                     stepper: StepperSettings = StepperSettings()):
    """Integrate the boundary evolution up to t_end.

    Halts with status "left_neighbourhood" if the sup-norm reaches the
    admissibility bound 1/4. Each accepted step costs two velocity
    evaluations (one full step, two half steps sharing the first).
    """
    shape0.require_admissible()
    if t_end < 0:
        raise ValidationError("t_end must be nonnegative")
    grid = grid_settings.make_grid()
    n_modes = grid.n_theta // 3
    R = shape0.radius_scale
    lam = -np.arange(n_modes + 1, dtype=float) ** 3 / R**3
    radial_guess = solve_U(R * R, model)

    c = np.zeros(n_modes + 1, dtype=complex)
    m = min(n_modes, shape0.n_modes)
    c[:m + 1] = shape0.coeffs[:m + 1]

    def make_shape(coeffs):
        return ShapeState(n_modes=n_modes, coeffs=coeffs, radius_scale=R)

    def imex_step(coeffs, phi_coeffs, dt):
        return coeffs + dt * phi_coeffs / (1.0 - dt * lam)

    t = 0.0
    state = make_shape(c)
    warm = None
    result = phi(state, A, G, model, grid_settings, grid,
                 radial_guess=radial_guess, n_modes=n_modes)
    points = [TrajectoryPoint(t=0.0, shape=state, sup_norm=state.sup_norm(),
                              phi_norm=float(np.max(np.abs(result.values))))]
    status = "completed"
    dt = min(stepper.dt_init, max(t_end, stepper.dt_min))

    while t < t_end - 1e-14:
        dt = min(dt, t_end - t)
        c1 = imex_step(state.coeffs, result.coeffs, dt)
        ch = imex_step(state.coeffs, result.coeffs, 0.5 * dt)
        shape_h = make_shape(ch)
        if shape_h.sup_norm() >= ADMISSIBLE_SUP_NORM:
            status = "left_neighbourhood"
            break
        res_h = phi(shape_h, A, G, model, grid_settings, grid,
                    radial_guess=radial_guess, nutrient_warm_start=warm,
                    n_modes=n_modes)
        c2 = imex_step(ch, res_h.coeffs, 0.5 * dt)

        err = float(np.max(np.abs(c2 - c1)))
        if err <= stepper.err_target:
            t += dt
            state = make_shape(2.0 * c2 - c1)  # local extrapolation
            sup = state.sup_norm()
            warm = res_h.nutrient.values
            if sup >= ADMISSIBLE_SUP_NORM:
                # the velocity is undefined outside the admissible set; carry
                # the half-step value forward for the halt record
                points.append(TrajectoryPoint(
                    t=t, shape=state, sup_norm=sup,
                    phi_norm=float(np.max(np.abs(res_h.values)))))
                status = "left_neighbourhood"
                break
            result = phi(state, A, G, model, grid_settings, grid,
                         radial_guess=radial_guess, nutrient_warm_start=warm,
                         n_modes=n_modes)
            points.append(TrajectoryPoint(
                t=t, shape=state, sup_norm=sup,
                phi_norm=float(np.max(np.abs(result.values)))))
        factor = 5.0 if err == 0.0 else 0.9 * np.sqrt(stepper.err_target / err)
        dt *= min(5.0, max(0.2, factor))
        dt = min(dt, stepper.dt_max)
        if dt < stepper.dt_min:
            raise ValidationError("time step underflow in nonlinear evolution")

    return Trajectory(points=tuple(points), status=status)

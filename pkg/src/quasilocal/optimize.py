"""Minimization of the energy over axisymmetric time functions.

The search space is the span of Legendre modes P_l(cos theta) for
l = 1..L; the constant mode is excluded because the energy is invariant
under time translation.  Gradients are assembled by pairing the
stationarity residual with the mode fields, and every accepted iterate
is kept inside the region where the lifted metric stays convex.
"""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre as npleg

from .geometry import (
    AxisymMetric,
    _check_field,
    gauss_curvature,
    gradient_norm_sq,
    hat_gauss_curvature,
    integrate_surface,
)
from .energy import qle, residual
from .physdata import PhysicalData

DEFAULT_MODE_COUNT = 8


class GuardViolationError(ValueError):
    """Starting point outside the convexity region."""

    def __init__(self, margin: float):
        self.margin = margin
        super().__init__(
            f"initial time function violates the convexity guard (margin {margin:.6e})"
        )


class LineSearchError(RuntimeError):
    """Backtracking hit the step floor without an acceptable iterate."""


@dataclass(frozen=True)
class TauCoefficients:
    """Legendre coefficients c_1..c_L of a time function (no constant)."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @classmethod
    def zeros(cls, count: int = DEFAULT_MODE_COUNT) -> "TauCoefficients":
        return cls(coeffs=(0.0,) * count)


@dataclass(frozen=True)
class MinimizeReport:
    tau_star: TauCoefficients
    energy_star: float
    residual_norm: float
    iterations: int
    guard_active: bool
    energy_trace: tuple
    calibration_rel_error: float


def mode_matrix(grid, count: int) -> np.ndarray:
    """Columns P_1(x)..P_count(x) on the collocation nodes."""
    return npleg.legvander(grid.x, count)[:, 1:]


def tau_from_coefficients(grid, tau: TauCoefficients) -> np.ndarray:
    return npleg.legval(grid.x, np.concatenate([[0.0], tau.coeffs]))


def convexity_guard(m: AxisymMetric, tau: np.ndarray) -> float:
    """Worst convexity margin of the lifted metric.

    Returns the least of: the Gauss curvature of sigma + dtau x dtau,
    the base Gauss curvature K, and K + det(Hess tau)/(1+|grad tau|^2).
    Positive margin means the lift embeds as a convex surface and stays
    convex along the segment s*tau, s in [0, 1].  A negative value is
    a measurement, not an error.
    """
    tau = _check_field(m.grid, tau, "tau")
    k_hat = hat_gauss_curvature(m, tau)
    k = gauss_curvature(m)
    scaled = k_hat * (1.0 + gradient_norm_sq(m, tau))
    return float(min(k_hat.min(), k.min(), scaled.min()))


def energy_gradient(d: PhysicalData, tau: TauCoefficients) -> np.ndarray:
    """Coefficient-space gradient g_l = integral(residual * P_l) dv.

    The positive sign is the calibrated one: central finite differences
    of qle along each mode reproduce these pairings.
    """
    grid = d.metric.grid
    field = tau_from_coefficients(grid, tau)
    res = residual(d, field)
    modes = mode_matrix(grid, len(tau.coeffs))
    return np.array(
        [integrate_surface(d.metric, res * modes[:, l]) for l in range(modes.shape[1])]
    )


def _fd_gradient(d: PhysicalData, coeffs: np.ndarray, step: float = 1e-5) -> np.ndarray:
    grid = d.metric.grid
    out = np.empty_like(coeffs)
    for l in range(coeffs.size):
        bump = np.zeros_like(coeffs)
        bump[l] = step
        plus = qle(d, tau_from_coefficients(grid, TauCoefficients(tuple(coeffs + bump)))).total
        minus = qle(d, tau_from_coefficients(grid, TauCoefficients(tuple(coeffs - bump)))).total
        out[l] = (plus - minus) / (2.0 * step)
    return out


def minimize_energy(
    d: PhysicalData,
    init: TauCoefficients,
    tol: float = 1e-7,
    max_iterations: int = 500,
    armijo: float = 1e-4,
    step_floor: float = 1e-14,
) -> MinimizeReport:
    """Descend qle over the coefficient space from init.

    Gradient descent with Armijo backtracking, accelerated by a BFGS
    model of the coefficient Hessian (the mode stiffness grows steeply
    with l, so raw gradient steps crawl).  Model updates are skipped
    unless the secant pair has positive curvature, which keeps every
    search direction a descent direction.  Steps leaving the convexity
    region or the embeddable family are rejected and shortened, so every
    accepted iterate is admissible.  Terminates when the coefficient
    gradient norm drops below tol.  The first gradient is calibrated
    against central finite differences and the relative error recorded.
    """
    grid = d.metric.grid
    coeffs = np.array(init.coeffs, dtype=float)

    margin = convexity_guard(d.metric, tau_from_coefficients(grid, init))
    if margin <= 0.0:
        raise GuardViolationError(margin)

    energy = qle(d, tau_from_coefficients(grid, init)).total
    grad = energy_gradient(d, init)

    fd = _fd_gradient(d, coeffs)
    scale = max(float(np.linalg.norm(fd)), tol)
    calibration = float(np.linalg.norm(fd - grad)) / scale if scale > tol else 0.0

    trace = [energy]
    guard_active = False
    iterations = 0
    inverse_model = np.eye(coeffs.size)
    first_pair = True

    while iterations < max_iterations and np.linalg.norm(grad) >= tol:
        direction = -(inverse_model @ grad)
        slope = float(grad @ direction)
        if slope >= 0.0:
            direction = -grad
            slope = -float(grad @ grad)

        accepted = False
        step = 1.0
        # once the Armijo decrease falls below the rounding floor of the
        # energy itself, certifying strict decrease is impossible; accept
        # any non-increasing step there (monotonicity is preserved)
        noise = 16.0 * np.finfo(float).eps * max(1.0, abs(energy))
        while step >= step_floor:
            trial = coeffs + step * direction
            field = tau_from_coefficients(grid, TauCoefficients(tuple(trial)))
            if convexity_guard(d.metric, field) <= 0.0:
                guard_active = True
            else:
                try:
                    trial_energy = qle(d, field).total
                except ValueError:
                    trial_energy = np.inf
                predicted = -armijo * step * slope
                if trial_energy <= energy - (predicted if predicted >= noise else 0.0):
                    accepted = True
                    break
            step *= 0.5
        if not accepted:
            raise LineSearchError(
                f"no acceptable step above {step_floor:.1e} at iteration {iterations}"
            )

        new_grad = energy_gradient(d, TauCoefficients(tuple(trial)))
        s = trial - coeffs
        y = new_grad - grad
        sy = float(s @ y)
        if sy > 1e-12 * np.linalg.norm(s) * np.linalg.norm(y):
            if first_pair:
                inverse_model *= sy / float(y @ y)
                first_pair = False
            rho = 1.0 / sy
            left = np.eye(coeffs.size) - rho * np.outer(s, y)
            inverse_model = left @ inverse_model @ left.T + rho * np.outer(s, s)

        coeffs = trial
        energy = trial_energy
        grad = new_grad
        trace.append(energy)
        iterations += 1

    tau_star = TauCoefficients(tuple(coeffs))
    field = tau_from_coefficients(grid, tau_star)
    res = residual(d, field)
    return MinimizeReport(
        tau_star=tau_star,
        energy_star=energy,
        residual_norm=float(np.sqrt(integrate_surface(d.metric, res * res))),
        iterations=iterations,
        guard_active=guard_active,
        energy_trace=tuple(trace),
        calibration_rel_error=calibration,
    )

"""Amplitude dynamics of the charger-battery pair.

Two engines produce the same trajectories:

* ``equal_frequency_trajectory``: closed form, valid when both qubits have
  the same detuning from the drive.  The initial state splits into a
  decoherence-free (sub-radiant) component and a decaying (super-radiant)
  component whose survival amplitude Z(t) is known analytically.
* ``general_trajectory``: exact pseudomode reduction of the memory-kernel
  equations, valid for arbitrary detunings.  The exponential memory kernel
  of the Lorentzian cavity is traded for one auxiliary lossy amplitude b(t),
  giving a local 3-component ODE system:

      dC_j/dt = -W a_j cos^2(eta_j/2) e^{+i chi_j t} b(t)
      db/dt   = -(lambda - i delta_L) b(t)
                + W sum_j a_j cos^2(eta_j/2) e^{-i chi_j t} C_j(t)

  with b(0) = 0.  Eliminating b reproduces the kernel
  W^2 e^{-(lambda - i delta_L)(t-t')} e^{i chi_i t} e^{-i chi_j t'} exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .model import DressedFrame, SystemParams, validate

DEFAULT_N_POINTS = 2000

ENGINE_CLOSED = "closed_form"
ENGINE_PSEUDOMODE = "pseudomode"
ENGINE_ORACLE = "oracle"


class IntegrationError(RuntimeError):
    """Adaptive integrator failed to meet its tolerance budget."""


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Strictly increasing sample times starting at 0."""

    t_max: float
    n_points: int
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 1 or s.size != self.n_points or self.n_points < 2:
            raise ValueError("samples must be a 1-d array of n_points >= 2 values")
        if s[0] != 0.0:
            raise ValueError("samples must start at t = 0")
        if not np.all(np.diff(s) > 0.0):
            raise ValueError("samples must be strictly increasing")
        if s[-1] != self.t_max:
            raise ValueError("samples must end at t_max")
        object.__setattr__(self, "samples", s)

    @classmethod
    def uniform(cls, t_max: float, n_points: int = DEFAULT_N_POINTS) -> "TimeGrid":
        return cls(t_max=float(t_max), n_points=int(n_points),
                   samples=np.linspace(0.0, float(t_max), int(n_points)))

    @classmethod
    def from_samples(cls, samples) -> "TimeGrid":
        s = np.asarray(samples, dtype=float)
        return cls(t_max=float(s[-1]), n_points=int(s.size), samples=s)


def default_grid(params: SystemParams, n_points: int = DEFAULT_N_POINTS) -> TimeGrid:
    """Default window: 10/lambda in weak coupling, 5/lambda in strong."""
    t_max = (10.0 if params.R <= 1.0 else 5.0) / params.lambda_
    return TimeGrid.uniform(t_max, n_points)


@dataclass(frozen=True, eq=False)
class AmplitudeTrajectory:
    """Charger (c1) and battery (c2) amplitudes sampled on a grid.

    total_norm is filled only by the bath-discretization engine, where the
    evolution is unitary over qubits plus modes.
    """

    grid: TimeGrid
    c1: np.ndarray
    c2: np.ndarray
    engine_tag: str
    total_norm: np.ndarray | None = None

    def qubit_norm(self) -> np.ndarray:
        return np.abs(self.c1) ** 2 + np.abs(self.c2) ** 2


@dataclass(frozen=True)
class KernelParams:
    """Laplace-domain constants of the equal-frequency survival amplitude.

    M = lambda - i(chi + delta_L); F = sqrt(M^2 - alpha_T^2 W^2 (1+cos eta)^2).
    Z(t) depends on F only through F^2, so either branch of the square root
    gives the same amplitude.
    """

    M: complex
    F: complex


def kernel_params(params: SystemParams, frame: DressedFrame) -> KernelParams:
    """Kernel constants for equal detunings (chi_A = chi_B, eta_A = eta_B)."""
    if not params.equal_detunings():
        raise ValueError(
            f"kernel requires delta_A == delta_B, got {params.delta_A} != {params.delta_B}")
    M = frame.lambda_ - 1j * (frame.chi_A + frame.delta_L)
    coupling = params.alpha_T * frame.W * 2.0 * frame.cos2_A  # alpha_T W (1 + cos eta)
    F = np.sqrt(complex(M * M - coupling * coupling))
    return KernelParams(M=M, F=F)


def survival_amplitude(kernel: KernelParams, t):
    """Survival amplitude Z(t) of the super-radiant component.

    Z(t) = e^{-Mt/2} (cosh(Ft/2) + (M/F) sinh(Ft/2)), evaluated with the
    e^{-Mt/2} factor absorbed into the hyperbolic exponentials,
        Z = (ep + em)/2 + (M/F) (ep - em)/2,
        ep = e^{(F-M)t/2},  em = e^{-(F+M)t/2},
    whose exponents have non-positive real part for the principal branch,
    so the evaluation never overflows and Z(0) = 1 exactly.
    Near the critically damped point F -> 0 the series limit
        Z = e^{-Mt/2} (1 + Mt/2 + (Ft)^2/8 (1 + Mt/6))
    is used instead.  Accepts scalar or array t >= 0.
    """
    t = np.asarray(t, dtype=float)
    M, F = kernel.M, kernel.F
    series = (np.abs(F) * t < 1e-6) | (np.abs(F) < 1e-10 * np.abs(M))
    F_safe = np.where(series, 1.0, F) if series.ndim else (1.0 if series else F)
    # Principal-branch F has 0 <= Re F <= lambda, so both exponents decay.
    ep = np.exp((F_safe - M) * t / 2.0)
    em = np.exp(-(F_safe + M) * t / 2.0)
    exact = (ep + em) / 2.0 + (M / F_safe) * (ep - em) / 2.0
    ft2 = (F * t) ** 2
    limit = np.exp(-M * t / 2.0) * (1.0 + M * t / 2.0 + ft2 / 8.0 * (1.0 + M * t / 6.0))
    out = np.where(series, limit, exact)
    return complex(out) if out.ndim == 0 else out


def equal_frequency_trajectory(params: SystemParams, frame: DressedFrame,
                               grid: TimeGrid) -> AmplitudeTrajectory:
    """Closed-form amplitudes for identical qubit detunings.

    The initial state is decomposed into the constant sub-radiant amplitude
    beta_minus and the super-radiant amplitude beta_plus, which evolves with
    Z(t):

        C1(t) = r2 beta_minus + r1 Z(t) beta_plus
        C2(t) = -r1 beta_minus + r2 Z(t) beta_plus
    """
    validate(params)
    if not params.equal_detunings():
        raise ValueError(
            f"closed form requires delta_A == delta_B, got "
            f"{params.delta_A} != {params.delta_B}")
    r1, r2 = params.r1, params.r2
    beta_plus = r1 * params.c01 + r2 * params.c02
    beta_minus = r2 * params.c01 - r1 * params.c02
    Z = survival_amplitude(kernel_params(params, frame), grid.samples)
    c1 = r2 * beta_minus + r1 * Z * beta_plus
    c2 = -r1 * beta_minus + r2 * Z * beta_plus
    return AmplitudeTrajectory(grid=grid, c1=c1, c2=c2, engine_tag=ENGINE_CLOSED)


def general_trajectory(params: SystemParams, frame: DressedFrame, grid: TimeGrid,
                       tol: float = 1e-9) -> AmplitudeTrajectory:
    """Pseudomode integration, valid for unequal detunings.

    tol is the relative local error target; the absolute target is 1e-3 tol.
    """
    validate(params)
    if tol <= 0.0:
        raise ValueError(f"non-positive tol: {tol}")
    w_A = frame.W * params.alpha_A * frame.cos2_A
    w_B = frame.W * params.alpha_B * frame.cos2_B
    chi_A, chi_B = frame.chi_A, frame.chi_B
    decay = frame.lambda_ - 1j * frame.delta_L

    def rhs(t, y):
        cA, cB, b = y
        phase_A = np.exp(1j * chi_A * t)
        phase_B = np.exp(1j * chi_B * t)
        return [
            -w_A * phase_A * b,
            -w_B * phase_B * b,
            -decay * b + w_A * cA / phase_A + w_B * cB / phase_B,
        ]

    y0 = np.array([params.c01, params.c02, 0.0], dtype=complex)
    sol = solve_ivp(rhs, (0.0, grid.t_max), y0, method="DOP853",
                    rtol=tol, atol=tol * 1e-3, t_eval=grid.samples)
    if not sol.success:
        raise IntegrationError(f"pseudomode integration failed: {sol.message}")
    return AmplitudeTrajectory(grid=grid, c1=sol.y[0], c2=sol.y[1],
                               engine_tag=ENGINE_PSEUDOMODE)


def trajectory(params: SystemParams, frame: DressedFrame, grid: TimeGrid,
               engine: str = ENGINE_CLOSED, tol: float = 1e-9) -> AmplitudeTrajectory:
    """Dispatch to the requested engine."""
    if engine == ENGINE_CLOSED:
        return equal_frequency_trajectory(params, frame, grid)
    if engine == ENGINE_PSEUDOMODE:
        return general_trajectory(params, frame, grid, tol=tol)
    raise ValueError(f"unknown engine: {engine!r}")

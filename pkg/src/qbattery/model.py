"""Physical parameters and the dressed-frame quantities derived from them.

Two driven qubits (a charger and a battery) share a lossy cavity whose
spectral density is a Lorentzian of width ``lambda_`` centered on the cavity
frequency.  All frequencies are measured in units of the cavity loss rate,
all times in its inverse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class SystemParams:
    """Inputs of a single run, in cavity-loss units.

    delta_A, delta_B: detuning of charger / battery qubit from the drive.
    delta_L: detuning of the drive from the cavity center frequency.
    omega_drive: classical drive strength (real, >= 0).
    lambda_: cavity loss rate; the default 1.0 fixes the unit system.
    alpha_T: collective cavity-coupling constant sqrt(alpha_A^2 + alpha_B^2).
    r1: relative coupling of the charger, alpha_A / alpha_T; the battery's
        share is r2 = sqrt(1 - r1^2).
    R: coupling-regime ratio (vacuum Rabi frequency over loss rate); R > 1
       is the strong-coupling regime.
    c01, c02: initial dressed-state amplitudes of |charger excited> and
       |battery excited>; must be normalized.
    """

    delta_A: float = 0.0
    delta_B: float = 0.0
    delta_L: float = 0.0
    omega_drive: float = 1.0
    lambda_: float = 1.0
    alpha_T: float = 1.0
    r1: float = INV_SQRT2
    R: float = 0.5
    c01: complex = 1.0 + 0.0j
    c02: complex = 0.0 + 0.0j

    @property
    def r2(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.r1 * self.r1))

    @property
    def alpha_A(self) -> float:
        return self.r1 * self.alpha_T

    @property
    def alpha_B(self) -> float:
        return self.r2 * self.alpha_T

    def equal_detunings(self) -> bool:
        return self.delta_A == self.delta_B


@dataclass(frozen=True)
class DressedFrame:
    """Per-qubit dressed-basis quantities plus the shared kernel scales.

    eta_A, eta_B: mixing angles of the driven qubits.
    chi_A, chi_B: dressed splittings sqrt(delta^2 + 4 omega_drive^2).
    cos2_A, cos2_B: coupling weights cos^2(eta/2) = (1 + cos eta)/2.
    W: cavity coupling scale, R * lambda_ / alpha_T.
    lambda_, delta_L: copied from the parameters; every kernel consumer
        (closed form, pseudomode, bath discretization) needs them alongside
        the dressed quantities.
    """

    eta_A: float
    eta_B: float
    chi_A: float
    chi_B: float
    cos2_A: float
    cos2_B: float
    W: float
    lambda_: float
    delta_L: float


def validate(params: SystemParams) -> SystemParams:
    """Check every parameter invariant; return the params unchanged.

    Raises ValueError naming the first violated invariant.
    """
    if not (params.lambda_ > 0.0):
        raise ValueError(f"non-positive lambda_: {params.lambda_}")
    if not (params.alpha_T > 0.0):
        raise ValueError(f"non-positive alpha_T: {params.alpha_T}")
    if not (0.0 <= params.r1 <= 1.0):
        raise ValueError(f"r1 out of [0,1]: {params.r1}")
    if not (params.omega_drive >= 0.0):
        raise ValueError(f"negative omega_drive: {params.omega_drive}")
    if not (params.R >= 0.0):
        raise ValueError(f"negative R: {params.R}")
    for name in ("delta_A", "delta_B", "delta_L"):
        if not math.isfinite(getattr(params, name)):
            raise ValueError(f"non-finite {name}")
    norm = abs(params.c01) ** 2 + abs(params.c02) ** 2
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"initial state not normalized: |c01|^2+|c02|^2 = {norm}")
    return params


def dressed_frame(params: SystemParams) -> DressedFrame:
    """Derive the dressed-basis frame for validated parameters.

    The mixing angle is the two-argument arctangent of (2 omega_drive,
    delta), so eta lies in [0, pi] for omega_drive >= 0 and negative
    detunings are handled unambiguously.  The fully degenerate point
    omega_drive = delta = 0 resolves to eta = 0 (bare basis) with a
    vanishing splitting chi = 0.
    """
    two_omega = 2.0 * params.omega_drive
    eta_A = math.atan2(two_omega, params.delta_A)
    eta_B = math.atan2(two_omega, params.delta_B)
    return DressedFrame(
        eta_A=eta_A,
        eta_B=eta_B,
        chi_A=math.hypot(params.delta_A, two_omega),
        chi_B=math.hypot(params.delta_B, two_omega),
        cos2_A=(1.0 + math.cos(eta_A)) / 2.0,
        cos2_B=(1.0 + math.cos(eta_B)) / 2.0,
        W=params.R * params.lambda_ / params.alpha_T,
        lambda_=params.lambda_,
        delta_L=params.delta_L,
    )

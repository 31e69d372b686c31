"""Figures of merit: stored energy, average charging power, ergotropy.

The battery's reduced state stays diagonal in its dressed basis, so every
metric is a function of the excited-state population |C2|^2 and the dressed
splitting chi_B.  The spectral (eigenvalue-overlap) ergotropy is kept
alongside the two-level closed form as an independent route.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .dynamics import AmplitudeTrajectory, TimeGrid


class Extremum(NamedTuple):
    value: float
    time: float


@dataclass(frozen=True, eq=False)
class MetricsSeries:
    """Energy, power and ergotropy sampled on a time grid.

    The max_* records are None until filled in by maxima().
    """

    grid: TimeGrid
    energy: np.ndarray
    power: np.ndarray
    ergotropy: np.ndarray
    max_energy: Extremum | None = None
    max_power: Extremum | None = None
    max_ergotropy: Extremum | None = None


@dataclass(frozen=True)
class QubitState:
    """Diagonal reduced state of one qubit in its dressed basis."""

    excited_population: float

    def __post_init__(self):
        if not 0.0 <= self.excited_population <= 1.0:
            raise ValueError(
                f"excited_population out of [0,1]: {self.excited_population}")

    @property
    def populations(self) -> tuple[float, float]:
        """(ground, excited); sums to 1 by construction."""
        return (1.0 - self.excited_population, self.excited_population)

    def density(self) -> np.ndarray:
        return np.diag(self.populations).astype(float)


def battery_hamiltonian(chi_B: float) -> np.ndarray:
    """(chi_B/2) (excited projector - ground projector), basis (g, e)."""
    return np.diag([-chi_B / 2.0, chi_B / 2.0])


def stored_energy(traj: AmplitudeTrajectory, chi_B: float) -> np.ndarray:
    """E_B(t) = |C2(t)|^2 chi_B, relative to the empty battery."""
    if chi_B < 0.0:
        raise ValueError(f"negative chi_B: {chi_B}")
    return np.abs(traj.c2) ** 2 * chi_B


def stored_energy_trace(excited_population, chi_B: float,
                        reference_excited: float = 0.0) -> np.ndarray:
    """Trace-form energy Tr[H rho(t)] - Tr[H rho_ref] for diagonal states.

    With the ground-state reference (reference_excited = 0) this reproduces
    stored_energy exactly.
    """
    if chi_B < 0.0:
        raise ValueError(f"negative chi_B: {chi_B}")
    p = np.asarray(excited_population, dtype=float)
    levels = np.diagonal(battery_hamiltonian(chi_B))
    pops = np.stack([1.0 - p, p], axis=-1)
    ref = np.array([1.0 - reference_excited, reference_excited])
    return pops @ levels - ref @ levels


def charging_power(energy: np.ndarray, grid: TimeGrid) -> np.ndarray:
    """P_B(t) = E_B(t)/t, with the t -> 0 limit P_B(0) = 0."""
    energy = np.asarray(energy, dtype=float)
    if energy.shape != grid.samples.shape:
        raise ValueError("energy series does not match the time grid")
    power = np.zeros_like(energy)
    power[1:] = energy[1:] / grid.samples[1:]
    return power


def ergotropy_closed(traj: AmplitudeTrajectory, chi_B: float) -> np.ndarray:
    """Two-level ergotropy (2|C2|^2 - 1) theta(|C2|^2 - 1/2) chi_B.

    The step function is taken as 0 at the threshold; the prefactor vanishes
    there, so the series is continuous either way.
    """
    if chi_B < 0.0:
        raise ValueError(f"negative chi_B: {chi_B}")
    p = np.abs(traj.c2) ** 2
    return np.where(p > 0.5, (2.0 * p - 1.0) * chi_B, 0.0)


def ergotropy_spectral(rho_eigenvalues, hamiltonian_eigenvalues, rho_state) -> float:
    """Eigenvalue-overlap ergotropy for an arbitrary finite dimension.

    rho_eigenvalues must be non-increasing and sum to 1,
    hamiltonian_eigenvalues non-decreasing, and rho_state is the density
    matrix written in the ordered Hamiltonian eigenbasis.  Computes

        W = sum_ij r_i eps_j (|<r_i|eps_j>|^2 - delta_ij),

    i.e. the stored energy of rho minus that of its passive state.
    """
    r = np.asarray(rho_eigenvalues, dtype=float)
    eps = np.asarray(hamiltonian_eigenvalues, dtype=float)
    rho = np.asarray(rho_state, dtype=complex)
    d = r.size
    if eps.size != d or rho.shape != (d, d):
        raise ValueError("dimension mismatch between eigenvalues and rho_state")
    if np.any(np.diff(r) > 1e-12):
        raise ValueError("rho_eigenvalues must be sorted in descending order")
    if np.any(np.diff(eps) < -1e-12):
        raise ValueError("hamiltonian_eigenvalues must be sorted in ascending order")
    if abs(float(np.sum(r)) - 1.0) > 1e-9:
        raise ValueError(f"rho_eigenvalues not normalized: sum = {np.sum(r)}")
    if not np.allclose(rho, rho.conj().T, atol=1e-9):
        raise ValueError("rho_state is not Hermitian")
    evals, evecs = np.linalg.eigh(rho)
    evals, evecs = evals[::-1], evecs[:, ::-1]
    if not np.allclose(evals, r, atol=1e-9):
        raise ValueError("rho_eigenvalues disagree with the spectrum of rho_state")
    overlap = np.abs(evecs.T) ** 2          # overlap[i, j] = |<r_i|eps_j>|^2
    return float(np.sum(r[:, None] * eps[None, :] * (overlap - np.eye(d))))


def _refine_peak(t: np.ndarray, y: np.ndarray) -> Extremum:
    """Grid argmax plus quadratic interpolation through its neighbors.

    The refined value is clamped from below by the grid maximum, so
    refinement can only improve on the sampled peak.
    """
    i = int(np.argmax(y))
    if i == 0 or i == y.size - 1:
        return Extremum(float(y[i]), float(t[i]))
    coeff = np.polyfit(t[i - 1:i + 2], y[i - 1:i + 2], 2)
    if coeff[0] >= 0.0:
        return Extremum(float(y[i]), float(t[i]))
    t_star = float(np.clip(-coeff[1] / (2.0 * coeff[0]), t[i - 1], t[i + 1]))
    value = float(np.polyval(coeff, t_star))
    if value < y[i]:
        return Extremum(float(y[i]), float(t[i]))
    return Extremum(value, t_star)


def maxima(series: MetricsSeries) -> MetricsSeries:
    """Fill the (value, argmax time) records for all three metrics."""
    t = series.grid.samples
    return replace(
        series,
        max_energy=_refine_peak(t, series.energy),
        max_power=_refine_peak(t, series.power),
        max_ergotropy=_refine_peak(t, series.ergotropy),
    )


def compute_metrics(traj: AmplitudeTrajectory, chi_B: float,
                    with_maxima: bool = True) -> MetricsSeries:
    """Full metrics pipeline for one trajectory."""
    energy = stored_energy(traj, chi_B)
    series = MetricsSeries(
        grid=traj.grid,
        energy=energy,
        power=charging_power(energy, traj.grid),
        ergotropy=ergotropy_closed(traj, chi_B),
    )
    return maxima(series) if with_maxima else series

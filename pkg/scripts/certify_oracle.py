#!/usr/bin/env python3
"""Certify both analytic engines against the discretized-bath ground truth.

Runs the two reference comparisons at full bath size (4000 modes, span 50):

  1. weak coupling, resonance, equal frequencies -> closed form
  2. strong coupling, unequal frequencies        -> pseudomode

Prints sup-norm gaps and norm drift; exits nonzero if either gap exceeds
the 5e-3 certification tolerance.
"""

import math
import sys
import time

import numpy as np

from qbattery import (SystemParams, TimeGrid, build_bath, dressed_frame,
                      equal_frequency_trajectory, general_trajectory, propagate)

TOLERANCE = 5e-3


def compare(label, params, t_max, analytic):
    frame = dressed_frame(params)
    grid = TimeGrid.uniform(t_max, 2000)
    start = time.monotonic()
    bath = build_bath(frame)
    reference = propagate(params, frame, bath, grid)
    elapsed = time.monotonic() - start
    trial = analytic(params, frame, grid)
    gap = max(np.abs(reference.c1 - trial.c1).max(),
              np.abs(reference.c2 - trial.c2).max())
    drift = np.abs(reference.total_norm - 1.0).max()
    status = "PASS" if gap <= TOLERANCE else "FAIL"
    print(f"{label}: gap {gap:.3e} vs {TOLERANCE:g} -> {status} "
          f"(norm drift {drift:.1e}, bath run {elapsed:.1f}s)")
    return gap <= TOLERANCE


def main() -> int:
    ok = compare(
        "closed form, weak resonance",
        SystemParams(omega_drive=1.0, R=0.5, r1=1 / math.sqrt(2)),
        10.0, equal_frequency_trajectory)
    ok &= compare(
        "pseudomode, strong unequal detunings",
        SystemParams(delta_A=0.0, delta_B=4.0, omega_drive=1.0, R=10.0,
                     r1=1 / math.sqrt(2)),
        5.0, lambda p, f, g: general_trajectory(p, f, g))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

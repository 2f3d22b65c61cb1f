#!/usr/bin/env python3
"""Scan up-probability oscillations under a coupling Hamiltonian.

Emits a CSV (time, analytic closed form, library value, deviation) for a
two-level agent starting fully confident in "up". Useful as a quick visual
check that the belief dynamics follow cos^2(omega * t).

    python scripts/rabi_scan.py --omega 1.5 --t-max 6.283 --grid 200 > rabi.csv
"""

import argparse
import sys

import numpy as np

from qexpect import Hamiltonian, StateVector, evolved_born, make_observable


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--omega", type=float, default=1.0, help="coupling strength")
    parser.add_argument("--t-max", type=float, default=2 * np.pi, help="end of the grid")
    parser.add_argument("--grid", type=int, default=200, help="number of samples")
    args = parser.parse_args()

    price = make_observable([[1, 0], [0, 1]], [1.0, -1.0])
    ham = Hamiltonian(args.omega * np.array([[0.0, 1.0], [1.0, 0.0]]))
    psi = StateVector([1.0, 0.0])

    print("t,analytic,simulated,deviation")
    worst = 0.0
    for t in np.linspace(0.0, args.t_max, args.grid):
        analytic = np.cos(args.omega * t) ** 2
        simulated = evolved_born(psi, ham, float(t), price).probability(1.0)
        worst = max(worst, abs(analytic - simulated))
        print(f"{t:.9f},{analytic:.12f},{simulated:.12f},{abs(analytic - simulated):.3e}")
    print(f"max deviation from closed form: {worst:.3e}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())

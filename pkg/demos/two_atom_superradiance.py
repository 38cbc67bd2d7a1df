"""Two parallel dipoles in 3D: collective modes and the emitted intensity.

Prints the super- and subradiant rates as the pair is brought together,
then evolves the symmetric state and compares the emitted intensity with a
single exponential at the superradiant rate.

    python3 demos/two_atom_superradiance.py
"""
import numpy as np

from coopdim import Dipole, collective_coupling, collective_modes, coupling_matrix
from coopdim import evolve, max_step, prepare_state

MU = np.array([0.0, 0.0, 1.0])


def pair(r):
    return [Dipole([r, 0.0, 0.0], MU), Dipole([0.0, 0.0, 0.0], MU)]


def main():
    print("r~      omega12     fast rate   slow rate")
    for r in (3.0, 1.0, 0.5, 0.1, 0.01):
        modes = collective_modes(coupling_matrix(3, pair(r)))
        omega = collective_coupling(3, *pair(r), normalize=False).omega
        print(f"{r:<7g} {omega:<11.4g} {modes.rates[0]:<11.6f} {modes.rates[1]:.3e}")

    g = coupling_matrix(3, pair(0.5))
    gamma = g[0, 0].imag * 2
    trace = evolve(prepare_state("symmetric_pair"), g, 5 / gamma, max_step(g))
    rate = collective_modes(g).rates[0]
    print(f"\nsymmetric state at r~ = 0.5, superradiant rate {rate:.6f} (single atom {gamma:.6f})")
    print("t        intensity    rate*exp(-rate t)")
    for k in np.linspace(0, len(trace.times) - 1, 6).astype(int):
        t = trace.times[k]
        print(f"{t:<8.3f} {trace.intensity[k]:<12.6e} {rate * np.exp(-rate * t):.6e}")
    print(f"trace drift {trace.trace_drift:.1e}")


if __name__ == "__main__":
    main()

"""A pair of emitters embedded in diamond (epsilon = 5.7).

Inside the dielectric the coupling is the vacuum one at a separation
stretched by the refractive index, so every feature of the normalised rate
moves inward by that factor.

    python3 demos/dielectric_pair.py
"""
import math

import numpy as np

from coopdim import Dipole, MediumParams, collective_coupling, dielectric_rescale

MU = np.array([0.0, 0.0, 1.0])
DIAMOND = MediumParams(epsilon=5.7)


def gamma_norm(r, medium=None):
    a, b = Dipole([r, 0.0, 0.0], MU), Dipole([0.0, 0.0, 0.0], MU)
    if medium is None:
        return collective_coupling(3, a, b).gamma_norm
    return dielectric_rescale(collective_coupling, medium, a, b, 3).gamma_norm


def main():
    n = DIAMOND.index
    print(f"refractive index Re[sqrt(5.7)] = {n:.6f}")
    print("r~     vacuum      diamond     vacuum at n r~")
    for r in (0.2, 0.5, 1.0, 1.5, 2.0):
        print(f"{r:<6g} {gamma_norm(r):<+11.6f} {gamma_norm(r, DIAMOND):<+11.6f} {gamma_norm(n * r):+.6f}")
    print(f"\nvacuum first zero 2.743707, in diamond {2.74370726999227 / math.sqrt(5.7):.6f}")


if __name__ == "__main__":
    main()

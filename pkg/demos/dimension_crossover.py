"""How the pair coupling changes as the field dimension goes from 1 to 3.

For side-by-side dipoles normal to the line joining them, prints the first
zero of the normalised rate, the far-field fall-off exponent and the
near-field scaling of the frequency shift at a few dimensions.

    python3 demos/dimension_crossover.py
"""
import numpy as np
from scipy.optimize import brentq

from coopdim import coupling_sweep, near_field_exponent

X1 = np.array([1.0, 0.0, 0.0])
X3 = np.array([0.0, 0.0, 1.0])


def gamma_norm(d, r):
    return float(coupling_sweep(d, r, X3, X3, X1)["gamma_norm"])


def first_zero(d):
    r = np.linspace(0.1, 6.0, 120)
    v = np.array([gamma_norm(d, x) for x in r])
    k = int(np.argmax(np.sign(v[1:]) != np.sign(v[:-1])))
    return brentq(lambda x: gamma_norm(d, x), r[k], r[k + 1], xtol=1e-14)


def far_exponent(d):
    r = np.geomspace(100, 1000, 50)
    mod = np.abs(coupling_sweep(d, r, X3, X3, X1)["gamma_big"])
    return np.polyfit(np.log(r), np.log(mod), 1)[0]


def main():
    print("d     first zero   far-field exponent   near-field scaling of omega")
    for d in (1.0, 1.5, 2.0, 2.5, 3.0):
        tn = float(coupling_sweep(d, 1.0, X3, X3, X1)["theta_near"])
        law = near_field_exponent(d, tn)
        near = "log r~" if law.kind == "logarithmic" else f"r~^{law.exponent:+g}"
        print(f"{d:<5g} {first_zero(d):<12.8f} {far_exponent(d):<20.4f} {near}")
    print("\nfar-field exponent approaches -(d - 1)/2")


if __name__ == "__main__":
    main()

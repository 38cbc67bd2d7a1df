"""Brute-force reference evaluations used to check the closed forms.

Nothing here calls the coupling formulas. The quadrature integrates the
defining direction integral for gamma_ij, the finite-difference operator
builds 1 + grad grad numerically from any radial field, and the Bessel
series sums the ascending series in exact rational arithmetic.
"""
from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from .geometry import check_dimension, check_separation, projector_weights


class QuadratureFailure(ArithmeticError):
    """The quadrature sum kept an imaginary part it should not have."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Direction grid on the unit sphere of R^d.

    d = 3: Gauss-Legendre in cos(theta) times a periodic trapezoid in phi.
    d = 2: periodic trapezoid on the circle. d = 1: the two points +-x1.
    """

    d: int
    nodes_polar: int = 64
    nodes_azimuthal: int = 128

    def __post_init__(self):
        if self.d not in (1, 2, 3):
            raise ValueError("quadrature needs an integer dimension 1, 2 or 3")
        if self.nodes_polar < 8 or self.nodes_azimuthal < 8:
            raise ValueError("node counts must be at least 8")

    def directions(self):
        """Unit vectors k (n, 3) and weights (n,) of the plain solid-angle measure."""
        if self.d == 1:
            return np.array([[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]]), np.ones(2)
        m = self.nodes_azimuthal
        phi = 2.0 * math.pi * np.arange(m) / m
        if self.d == 2:
            k = np.stack([np.cos(phi), np.sin(phi), np.zeros(m)], axis=-1)
            return k, np.full(m, 2.0 * math.pi / m)
        t, w = np.polynomial.legendre.leggauss(self.nodes_polar)
        s = np.sqrt(1.0 - t * t)
        k = np.stack(
            [
                np.outer(s, np.cos(phi)).ravel(),
                np.outer(s, np.sin(phi)).ravel(),
                np.repeat(t, m),
            ],
            axis=-1,
        )
        return k, np.repeat(w, m) * (2.0 * math.pi / m)


def _integrate(spec, r_vec, integrand):
    k, w = spec.directions()
    phase = np.exp(1j * (k @ r_vec))
    terms = w * integrand(k) * phase
    total = terms.sum()
    scale = np.abs(terms).sum()
    return total, scale


def solid_angle_integral(spec, r_vec):
    """Integral of exp(i k.r) over directions k in R^d."""
    r_vec = np.asarray(r_vec, dtype=float)
    total, _ = _integrate(spec, r_vec, lambda k: np.ones(len(k)))
    return total


def solid_angle_quadrature_gamma(spec, dipole_i, dipole_j, imag_tol=1e-10):
    """gamma_ij from the direction integral of mu_i.(1 - kk).mu_j exp(i k.r).

    The slashed measure contributes 2 pi / (2 pi)**(d - 1). ``dipole_i`` may
    be ``dipole_j`` (r = 0 gives the single-dipole rate).
    """
    d = spec.d
    r_vec = dipole_i.position - dipole_j.position
    if np.any(r_vec):
        check_separation(r_vec, d)
    mu_i = dipole_i.magnitude * dipole_i.orientation
    mu_j = dipole_j.magnitude * dipole_j.orientation

    def transverse(k):
        return mu_i @ mu_j - (k @ mu_i) * (k @ mu_j)

    total, scale = _integrate(spec, r_vec, transverse)
    if abs(total.imag) > imag_tol * max(scale, np.finfo(float).tiny):
        raise QuadratureFailure(
            f"imaginary residue {total.imag:.3e} against integrand scale {scale:.3e}"
        )
    return 2.0 * math.pi / (2.0 * math.pi) ** (d - 1) * total.real


def _check_step(r_vec, step):
    r = float(np.linalg.norm(r_vec))
    if not (1e-4 * r * (1 - 1e-12) <= step <= 1e-2 * r * (1 + 1e-12)):
        raise ValueError(f"step {step:g} outside [1e-4, 1e-2] x r~ = {r:g}")


def finite_difference_dyadic(d, field, r_tilde_vec, step):
    """(1 + grad_d grad_d) f at ``r_tilde_vec`` by central differences.

    ``field`` maps an array of radial distances to values. Axis l is weighted
    by the projector diagonal, so a fractional last axis enters with weight
    d - floor(d) in the trace, as in the dimensional unit dyad.
    """
    d = check_dimension(d)
    r_vec = np.asarray(r_tilde_vec, dtype=float)
    check_separation(r_vec, d)
    _check_step(r_vec, step)
    w = projector_weights(d)
    axes = [l for l in range(3) if w[l] > 0.0]
    eye = np.eye(3)

    def f(offset):
        return field(np.linalg.norm(r_vec + step * offset))

    f0 = complex(field(np.linalg.norm(r_vec)))
    hess = np.zeros((3, 3), dtype=complex)
    for a, l in enumerate(axes):
        hess[l, l] = (f(eye[l]) - 2.0 * f0 + f(-eye[l])) / step**2
        for m in axes[a + 1:]:
            val = (f(eye[l] + eye[m]) - f(eye[l] - eye[m])
                   - f(-eye[l] + eye[m]) + f(-eye[l] - eye[m])) / (4.0 * step**2)
            hess[l, m] = hess[m, l] = val
    root = np.sqrt(w)
    return f0 * np.eye(3) + root[:, None] * hess * root[None, :]


def radial_helmholtz_residual(field, d, r, step):
    """|f'' + (d-1) f'/r + f| / |f| at radius ``r`` by central differences."""
    fm, f0, fp = (complex(field(x)) for x in (r - step, r, r + step))
    second = (fp - 2.0 * f0 + fm) / step**2
    first = (fp - fm) / (2.0 * step)
    return abs(second + (d - 1.0) * first / r + f0) / abs(f0)


def series_bessel(alpha, x, terms=60):
    """J_alpha(x) from the ascending series with exactly ``terms`` terms.

    With (x/2)**alpha / Gamma(alpha + 1) factored out, the remaining sum
    sum_k (-x^2/4)^k / (k! (alpha+1)_k) has rational terms once alpha and x
    are taken as exact binary fractions, so it is summed exactly with
    :class:`fractions.Fraction` and rounded once. The result is then good to
    a few ulp even next to a zero of J, where float summation would lose
    digits to cancellation. For x <= 15 and 40+ terms the truncation error
    is below the first omitted term (see :func:`series_truncation_bound`).
    """
    alpha = float(alpha)
    x = float(x)
    if terms < 40:
        raise ValueError("series_bessel needs at least 40 terms")
    if not (0.0 <= x <= 15.0):
        raise ValueError("series_bessel is limited to 0 <= x <= 15")
    if x == 0.0:
        if alpha == 0.0:
            return 1.0
        if alpha > 0.0:
            return 0.0
        raise ValueError("J of negative order is singular at the origin")
    q = -Fraction(x) ** 2 / 4
    a = Fraction(alpha)
    term = Fraction(1)
    total = Fraction(1)
    for k in range(1, terms):
        term = term * q / (k * (k + a))
        total += term
    return float(total) * (0.5 * x) ** alpha / math.gamma(alpha + 1.0)


def series_truncation_bound(alpha, x, terms=60):
    """Magnitude of the first omitted series term."""
    half = 0.5 * float(x)
    k = terms
    return half ** (2 * k + alpha) / (math.factorial(k) * math.gamma(k + alpha + 1.0))


def standing_wave_couplings(d, dipole_i, dipole_j, step_ratio=1e-4):
    """(omega_ij, gamma_ij) by finite differences of the standing-wave fields.

    gamma_ij = (2 pi)**(2-d) mu_i . D[(2 pi)**(d/2) J_{d/2-1}] . mu_j and
    omega_ij is half the same expression with the cardinal Y. The Bessel
    values come from specfun, the operator is applied numerically.
    """
    from . import specfun

    d = check_dimension(d)
    r_vec = dipole_i.position - dipole_j.position
    step = step_ratio * float(np.linalg.norm(r_vec))
    nu = 0.5 * d - 1.0
    norm = (2.0 * math.pi) ** (0.5 * d)
    mu_i = dipole_i.magnitude * dipole_i.orientation
    mu_j = dipole_j.magnitude * dipole_j.orientation
    pre = (2.0 * math.pi) ** (2.0 - d)
    dj = finite_difference_dyadic(d, lambda r: norm * specfun.cardinal_j(nu, r), r_vec, step)
    dy = finite_difference_dyadic(d, lambda r: norm * specfun.cardinal_y(nu, r), r_vec, step)
    gamma = pre * (mu_i @ dj @ mu_j).real
    omega = 0.5 * pre * (mu_i @ dy @ mu_j).real
    return omega, gamma

"""Green's functions and collective couplings between point dipoles.

Internal units: hbar = c = k0 = 1 and unit dipole moment, so lengths are
r~ = k0 r and rates come out in units of mu_i mu_j k0**d. The complex
coupling is

    Gamma_ij = -omega_ij + i gamma_ij / 2
             = (i/2) (2 pi)**(2 - d/2) mu_i mu_j
               * [H_{d/2-1}(r~) Theta_ij - H_{d/2}(r~) Theta'_ij]

with H the cardinal Hankel function. The same quantity is also available as
the contraction 4 pi mu_i . G_d . mu_j of the dyadic Green's function; the
two routes share only the special functions.
"""
from dataclasses import dataclass
import cmath
import math

import numpy as np

from . import specfun
from .geometry import (
    ConfigurationError,
    NonUnitOrientation,
    UNIT_TOL,
    check_dimension,
    check_separation,
    projector,
    projector_weights,
    separation,
    theta_far,
    theta_near,
    validate_configuration,
)


class NormalizationUndefined(ArithmeticError):
    """The single-dipole rate used for normalisation vanishes."""


@dataclass(frozen=True)
class ScalarGreens:
    value: complex
    r_tilde: float
    d: float


@dataclass(frozen=True)
class DyadicGreens:
    dyad: np.ndarray
    r_tilde_vec: np.ndarray
    d: float


@dataclass(frozen=True)
class CouplingResult:
    """Gamma_ij and its split into the shift omega_ij and the rate gamma_ij.

    ``omega_norm`` and ``gamma_norm`` are divided by sqrt(gamma_ii gamma_jj),
    which is gamma_ii for identical dipoles; they are None when that rate
    vanishes and normalisation was not demanded.
    """

    gamma_big: complex
    omega: float
    gamma: float
    omega_norm: float | None
    gamma_norm: float | None


@dataclass(frozen=True)
class MediumParams:
    """Homogeneous dielectric: permittivity at the transition and local-field factor."""

    epsilon: complex = 1.0
    local_field: complex = 1.0

    def __post_init__(self):
        if not self.index > 0.0:
            raise ValueError(f"Re[sqrt(epsilon)] must be positive, got epsilon={self.epsilon}")

    @property
    def index(self):
        return cmath.sqrt(complex(self.epsilon)).real

    @property
    def rate_scale(self):
        return self.index * abs(complex(self.local_field)) ** 2


@dataclass(frozen=True)
class NearFieldScaling:
    """Leading small-r~ behaviour of omega_ij: r~**exponent, or log r~."""

    kind: str
    exponent: float | None = None


def _order(d):
    return 0.5 * d - 1.0


def coupling_prefactor(d):
    """Real factor c_d in Gamma = i c_d [...]: (2 pi)**(2 - d/2) / 2."""
    return 0.5 * (2.0 * math.pi) ** (2.0 - 0.5 * d)


def reference_rate(d):
    """Orientation-free prefactor of gamma_ii for a unit dipole.

    For d < 3 this is the rate of a dipole normal to the confined subspace.
    """
    d = check_dimension(d)
    return 2.0 ** (3.0 - d) * math.pi ** (2.0 - 0.5 * d) / specfun.gamma_real(0.5 * d)


def max_self_rate(d):
    """Largest single-dipole rate over orientations (4/3 at d = 3)."""
    d = check_dimension(d)
    return reference_rate(d) * (1.0 - projector_weights(d).min() / d)


def self_rate(d, orientation, magnitude=1.0):
    """gamma_ii for an orientation array of shape (..., 3)."""
    w = projector_weights(d)
    mu = np.asarray(orientation, dtype=float)
    factor = 1.0 - np.sum(mu * w * mu, axis=-1) / d
    return reference_rate(d) * np.square(magnitude) * np.maximum(factor, 0.0)


def gamma_self(d, dipole):
    """Spontaneous emission rate of a single dipole in a d-dimensional field."""
    d = check_dimension(d)
    return float(self_rate(d, dipole.orientation, dipole.magnitude))


def scalar_greens(d, r_tilde):
    """Outgoing radial solution (i/4)(2 pi)**(1 - d/2) H_{d/2-1}(r~).

    ``r_tilde`` may be an array, in which case ``value`` is too.
    """
    d = check_dimension(d)
    r = np.asarray(r_tilde, dtype=float)
    if np.any(~(r > 0.0)):
        raise ValueError("r_tilde must be positive")
    value = 0.25j * (2.0 * math.pi) ** (1.0 - 0.5 * d) * specfun.cardinal_h1(_order(d), r_tilde)
    return ScalarGreens(value=value, r_tilde=r_tilde, d=d)


def dyadic_greens(d, r_tilde_vec):
    """3x3 dyadic Green's function at separation ``r_tilde_vec``."""
    d = check_dimension(d)
    r, r_hat = check_separation(r_tilde_vec, d)
    nu = _order(d)
    h0 = specfun.cardinal_h1(nu, r)
    h1 = specfun.cardinal_h1(nu + 1.0, r)
    rr = np.outer(r_hat, r_hat)
    dyad = 0.25j * (2.0 * math.pi) ** (1.0 - 0.5 * d) * (
        h0 * (np.eye(3) - rr) - h1 * (projector(d) - d * rr)
    )
    return DyadicGreens(dyad=dyad, r_tilde_vec=np.asarray(r_tilde_vec, dtype=float), d=d)


def coupling_from_factors(d, r_tilde, theta_ff, theta_nf, moment=1.0):
    """Gamma from separation and precomputed orientation factors (broadcasts)."""
    d = check_dimension(d)
    nu = _order(d)
    h0 = specfun.cardinal_h1(nu, r_tilde)
    h1 = specfun.cardinal_h1(nu + 1.0, r_tilde)
    return 1j * coupling_prefactor(d) * moment * (h0 * theta_ff - h1 * theta_nf)


def _check_unit(*dipoles):
    for dip in dipoles:
        if abs(np.linalg.norm(dip.orientation) - 1.0) > UNIT_TOL:
            raise NonUnitOrientation("orientation is not a unit vector")


def _split(gamma_big, ref, normalize):
    omega = -gamma_big.real
    gamma = 2.0 * gamma_big.imag
    if ref > 0.0:
        omega_norm, gamma_norm = omega / ref, gamma / ref
    elif normalize:
        raise NormalizationUndefined("single-dipole rate is zero; normalised coupling undefined")
    else:
        omega_norm = gamma_norm = None
    return CouplingResult(
        gamma_big=complex(-omega, 0.5 * gamma),
        omega=omega,
        gamma=gamma,
        omega_norm=omega_norm,
        gamma_norm=gamma_norm,
    )


def collective_coupling(d, dipole_i, dipole_j, *, normalize=True, path="theta"):
    """Collective coupling between two distinct dipoles.

    ``path="theta"`` (default) uses the orientation-factor form,
    ``path="dyadic"`` contracts the dyadic Green's function instead.
    """
    d = check_dimension(d)
    _check_unit(dipole_i, dipole_j)
    r_vec = dipole_i.position - dipole_j.position
    r, r_hat = check_separation(r_vec, d)
    if path == "theta":
        gb = coupling_from_factors(
            d,
            r,
            theta_far(dipole_i.orientation, dipole_j.orientation, r_hat),
            theta_near(dipole_i.orientation, dipole_j.orientation, r_hat, d),
            dipole_i.magnitude * dipole_j.magnitude,
        )
    elif path == "dyadic":
        mu_i = dipole_i.magnitude * dipole_i.orientation
        mu_j = dipole_j.magnitude * dipole_j.orientation
        gb = 4.0 * math.pi * (mu_i @ dyadic_greens(d, r_vec).dyad @ mu_j)
    else:
        raise ValueError(f"unknown path {path!r}")
    ref = math.sqrt(gamma_self(d, dipole_i) * gamma_self(d, dipole_j))
    return _split(complex(gb), ref, normalize)


def coupling_sweep(d, r_tilde, mu_i, mu_j, r_hat, magnitudes=(1.0, 1.0)):
    """Vectorised pair coupling over arrays of separations and/or orientations.

    Returns a dict of arrays: theta_far, theta_near, gamma_big, omega, gamma,
    omega_norm, gamma_norm (NaN where the reference rate vanishes).
    """
    d = check_dimension(d)
    r_hat = np.asarray(r_hat, dtype=float)
    check_separation(r_hat, d)
    tf = theta_far(mu_i, mu_j, r_hat)
    tn = theta_near(mu_i, mu_j, r_hat, d)
    gb = coupling_from_factors(d, np.asarray(r_tilde, dtype=float), tf, tn,
                               magnitudes[0] * magnitudes[1])
    ref = np.sqrt(self_rate(d, mu_i, magnitudes[0]) * self_rate(d, mu_j, magnitudes[1]))
    omega = -gb.real
    gamma = 2.0 * gb.imag
    with np.errstate(invalid="ignore", divide="ignore"):
        omega_norm = np.where(ref > 0, omega / np.where(ref > 0, ref, 1.0), np.nan)
        gamma_norm = np.where(ref > 0, gamma / np.where(ref > 0, ref, 1.0), np.nan)
    return {
        "theta_far": tf,
        "theta_near": tn,
        "gamma_big": gb,
        "omega": omega,
        "gamma": gamma,
        "omega_norm": omega_norm,
        "gamma_norm": gamma_norm,
    }


def coupling_matrix(d, dipoles, omega0=0.0, medium=None):
    """N x N complex matrix of Gamma_ij, with Gamma_ii = -omega0 + i gamma_ii / 2.

    Shifts and rates are recovered as omega = -Re, gamma = 2 Im.
    """
    d = check_dimension(d)
    validate_configuration(dipoles, d)
    n = len(dipoles)
    out = np.empty((n, n), dtype=complex)
    scale = 1.0 if medium is None else medium.rate_scale
    for i in range(n):
        out[i, i] = complex(-omega0, 0.5 * scale * gamma_self(d, dipoles[i]))
        for j in range(i + 1, n):
            if medium is None:
                res = collective_coupling(d, dipoles[i], dipoles[j], normalize=False)
            else:
                res = dielectric_rescale(collective_coupling, medium, dipoles[i], dipoles[j], d,
                                         normalize=False)
            out[i, j] = out[j, i] = res.gamma_big
    return out


def far_field_coupling(d, r_tilde, theta_ff, moment=1.0):
    """Large-r~ coupling: only the Theta term, with the leading Hankel form."""
    d = check_dimension(d)
    return (1j * coupling_prefactor(d) * moment * theta_ff
            * specfun.far_field_cardinal_h1(d, r_tilde))


def near_field_exponent(d, theta_nf, tol=1e-12):
    """Leading small-r~ scaling of |omega_ij|.

    Theta' != 0: r~**-d. Theta' = 0: log r~ at d = 2, r~**(2 - d) for
    d in [2, 3] and d = 1. For 1 < d < 2 the cardinal Y of negative order
    tends to a nonzero constant, so omega_ij stays finite (exponent 0).
    """
    d = check_dimension(d)
    if abs(theta_nf) > tol:
        return NearFieldScaling("power", -d)
    if abs(d - 2.0) <= tol:
        return NearFieldScaling("logarithmic")
    if 1.0 + tol < d < 2.0:
        return NearFieldScaling("power", 0.0)
    return NearFieldScaling("power", 2.0 - d)


def _scaled(dipole, factor):
    return type(dipole)(position=dipole.position * factor,
                        orientation=dipole.orientation,
                        magnitude=dipole.magnitude)


def dielectric_rescale(base, medium, dipole_i, dipole_j, d, *, normalize=True):
    """Coupling inside a dielectric.

    Gamma_eps(r) = Re[sqrt(eps)] |l|**2 Gamma(Re[sqrt(eps)] r); the
    single-dipole rates pick up the same factor, so normalised values are
    the vacuum ones at the stretched separation.
    """
    n = medium.index
    scale = medium.rate_scale
    vac = base(d, _scaled(dipole_i, n), _scaled(dipole_j, n), normalize=False)
    gb = scale * vac.gamma_big
    ref = scale * math.sqrt(gamma_self(d, dipole_i) * gamma_self(d, dipole_j))
    return _split(gb, ref, normalize)


__all__ = [
    "ConfigurationError",
    "CouplingResult",
    "DyadicGreens",
    "MediumParams",
    "NearFieldScaling",
    "NormalizationUndefined",
    "ScalarGreens",
    "coupling_from_factors",
    "coupling_matrix",
    "coupling_prefactor",
    "coupling_sweep",
    "collective_coupling",
    "dielectric_rescale",
    "dyadic_greens",
    "far_field_coupling",
    "gamma_self",
    "max_self_rate",
    "near_field_exponent",
    "reference_rate",
    "scalar_greens",
    "self_rate",
    "separation",
]

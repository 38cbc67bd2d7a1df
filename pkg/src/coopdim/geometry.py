"""Dipole configurations, the dimensional projector and orientation factors.

Positions are dimensionless (r~ = k0 r). Orientations always live in R^3;
the field, and therefore every pairwise separation, lives in the first
``floor(d)`` Cartesian axes.
"""
from dataclasses import dataclass, field
import math

import numpy as np

D_MIN = 1.0
D_MAX = 3.0
UNIT_TOL = 1e-12
SUBSPACE_TOL = 1e-12


class ConfigurationError(ValueError):
    """Base class for invalid dipole configurations."""


class CoincidentDipoles(ConfigurationError):
    pass


class SeparationOutsideSubspace(ConfigurationError):
    pass


class NonUnitOrientation(ConfigurationError):
    pass


class DimensionError(ValueError):
    pass


def check_dimension(d):
    d = float(d)
    if not (D_MIN <= d <= D_MAX):
        raise DimensionError(f"dimension {d} outside [{D_MIN:g}, {D_MAX:g}]")
    return d


def _vec3(v):
    arr = np.asarray(v, dtype=float).reshape(3)
    return arr


@dataclass(frozen=True)
class Dipole:
    """Point dipole: position (units 1/k0), unit orientation, moment magnitude."""

    position: np.ndarray
    orientation: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))
    magnitude: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "position", _vec3(self.position))
        object.__setattr__(self, "orientation", _vec3(self.orientation))
        object.__setattr__(self, "magnitude", float(self.magnitude))
        if self.magnitude < 0:
            raise ConfigurationError("dipole magnitude must be non-negative")

    def to_dict(self):
        return {
            "position": self.position.tolist(),
            "orientation": self.orientation.tolist(),
            "magnitude": self.magnitude,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            position=data["position"],
            orientation=data.get("orientation", (0.0, 0.0, 1.0)),
            magnitude=data.get("magnitude", 1.0),
        )


def orientation_from_angles(theta1, theta2):
    """sin t1 cos t2 x1 + sin t1 sin t2 x2 + cos t1 x3 (broadcasts)."""
    theta1 = np.asarray(theta1, dtype=float)
    theta2 = np.asarray(theta2, dtype=float)
    return np.stack(
        np.broadcast_arrays(
            np.sin(theta1) * np.cos(theta2),
            np.sin(theta1) * np.sin(theta2),
            np.cos(theta1),
        ),
        axis=-1,
    )


def projector_weights(d):
    """Diagonal of the d-dimensional unit dyad.

    Axes up to ceil(d) carry weight one, and the last of them is reduced by
    ceil(d) - d, so the trace is d and the weights are continuous in d.
    """
    d = check_dimension(d)
    top = math.ceil(d)
    w = np.zeros(3)
    w[:top] = 1.0
    w[top - 1] += d - top
    return w


def projector(d):
    """3x3 dyad 1_d (diagonal in the Cartesian axes, trace d)."""
    return np.diag(projector_weights(d))


def confined_axes(d):
    """Number of axes a separation may occupy: floor(d)."""
    return int(math.floor(check_dimension(d)))


def theta_far(mu_i, mu_j, r_hat):
    """Far-field orientation factor mu_i.mu_j - (mu_i.r)(mu_j.r)."""
    mu_i = np.asarray(mu_i, dtype=float)
    mu_j = np.asarray(mu_j, dtype=float)
    r_hat = np.asarray(r_hat, dtype=float)
    return _dot(mu_i, mu_j) - _dot(mu_i, r_hat) * _dot(mu_j, r_hat)


def theta_near(mu_i, mu_j, r_hat, d):
    """Near-field factor mu_i.1_d.mu_j - d (mu_i.r)(mu_j.r)."""
    w = projector_weights(d)
    mu_i = np.asarray(mu_i, dtype=float)
    mu_j = np.asarray(mu_j, dtype=float)
    r_hat = np.asarray(r_hat, dtype=float)
    return _dot(mu_i * w, mu_j) - float(d) * _dot(mu_i, r_hat) * _dot(mu_j, r_hat)


def _dot(a, b):
    return np.sum(a * b, axis=-1)


def separation(dipole_i, dipole_j):
    """(r~, r_hat) for r_ij = r_i - r_j."""
    r = dipole_i.position - dipole_j.position
    r_tilde = float(np.linalg.norm(r))
    if r_tilde == 0.0:
        raise CoincidentDipoles("two dipoles occupy the same point")
    return r_tilde, r / r_tilde


def check_separation(r_vec, d):
    """Raise unless ``r_vec`` is nonzero and confined to the first floor(d) axes."""
    r_vec = _vec3(r_vec)
    norm = float(np.linalg.norm(r_vec))
    if norm == 0.0:
        raise CoincidentDipoles("zero separation")
    n = confined_axes(d)
    outside = np.abs(r_vec[n:])
    if outside.size and outside.max() > SUBSPACE_TOL * max(1.0, norm):
        raise SeparationOutsideSubspace(
            f"separation {r_vec.tolist()} leaves the first {n} axes allowed for d={d:g}"
        )
    return norm, r_vec / norm


def validate_configuration(dipoles, d):
    """Check orientations, coincidences and subspace confinement; return None."""
    d = check_dimension(d)
    for k, dip in enumerate(dipoles):
        if abs(np.linalg.norm(dip.orientation) - 1.0) > UNIT_TOL:
            raise NonUnitOrientation(f"dipole {k} orientation is not a unit vector")
    for i in range(len(dipoles)):
        for j in range(i + 1, len(dipoles)):
            try:
                check_separation(dipoles[i].position - dipoles[j].position, d)
            except CoincidentDipoles:
                raise CoincidentDipoles(f"dipoles {i} and {j} coincide") from None

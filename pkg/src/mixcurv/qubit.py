"""Closed-form Bloch-vector results for qubits.

For ``rho = (I + r.sigma)/2`` the SLD along a derivative ``dr`` of the Bloch
vector is ``c0 I + c.sigma`` and the curvature is the triple product
``-1/2 r . (dr_a x dr_b)``. The triple-product form holds for Bloch vectors of
varying length as well: the identity parts of the SLDs commute with
everything and drop out of the commutator.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ModelRangeError
from .models import sigma_dot


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if self.length > 1 + 1e-12:
            raise ModelRangeError(f"Bloch vector length {self.length} exceeds 1")

    @classmethod
    def of(cls, vec):
        vec = np.asarray(vec, dtype=float)
        return cls(*map(float, vec))

    @classmethod
    def from_matrix(cls, rho):
        rho = np.asarray(rho, dtype=complex)
        return cls(2 * rho[0, 1].real, -2 * rho[0, 1].imag, (rho[0, 0] - rho[1, 1]).real)

    @property
    def array(self):
        return np.array([self.x, self.y, self.z])

    @property
    def length(self):
        return float(np.sqrt(self.x**2 + self.y**2 + self.z**2))

    @property
    def is_pure(self):
        return abs(self.length - 1.0) <= 1e-12


def _vec(v):
    return v.array if isinstance(v, BlochVector) else np.asarray(v, dtype=float)


def commutator_expectation_bloch(rvec, a, b):
    """``<[a.sigma, b.sigma]> / (2i)`` on the Bloch state ``rvec``, i.e. ``(a x b).r``."""
    return float(np.dot(np.cross(_vec(a), _vec(b)), _vec(rvec)))


def pure_curvature_bloch(n, dn_a, dn_b):
    """Berry curvature ``-1/2 n.(dn_a x dn_b)`` of a pure qubit."""
    n, dn_a, dn_b = _vec(n), _vec(dn_a), _vec(dn_b)
    if abs(np.linalg.norm(n) - 1.0) > 1e-10:
        raise ValueError(f"|n| = {np.linalg.norm(n)} is not 1")
    if abs(np.dot(n, dn_a)) > 1e-8 or abs(np.dot(n, dn_b)) > 1e-8:
        raise ValueError("derivatives of a unit vector must be tangent to the sphere")
    return -0.5 * commutator_expectation_bloch(n, dn_a, dn_b)


def mixed_curvature_bloch(rvec, dr_a, dr_b):
    r = _vec(rvec)
    if np.linalg.norm(r) > 1 + 1e-12:
        raise ModelRangeError(f"Bloch vector length {np.linalg.norm(r)} exceeds 1")
    return -0.5 * commutator_expectation_bloch(r, dr_a, dr_b)


def qubit_sld_bloch(rvec, dr):
    """Coefficients ``(c0, c)`` of the SLD ``L = c0 I + c.sigma``."""
    r, dr = _vec(rvec), _vec(dr)
    r2 = float(np.dot(r, r))
    radial = float(np.dot(dr, r))
    if r2 > 1 + 1e-12:
        raise ModelRangeError(f"Bloch vector length {np.sqrt(r2)} exceeds 1")
    if abs(1.0 - r2) <= 1e-12:
        if abs(radial) > 1e-10:
            raise ModelRangeError("derivative of a pure state must be tangent to the sphere")
        return 0.0, dr.copy()
    c0 = -radial / (1.0 - r2)
    return c0, dr - c0 * r


def sld_matrix(c0, c):
    return c0 * np.eye(2) + sigma_dot(c)


def ascending_labels(spec):
    """Map a descending qubit spectrum onto the ascending labelling.

    Returns ``((p1, psi1), (p2, psi2))`` where ``psi1`` is anti-aligned with
    the Bloch vector and carries ``p1 = (1 - r)/2``.
    """
    p, v = spec.probabilities, spec.states
    return (p[1], v[:, 1]), (p[0], v[:, 0])


def eigenstate_curvatures(rvec, dr_a, dr_b):
    """Berry curvatures of the aligned and anti-aligned eigenvectors.

    Returns ``(omega_psi1, omega_psi2)`` with ``psi1`` anti-aligned.
    """
    r = _vec(rvec)
    norm = np.linalg.norm(r)
    if norm == 0:
        raise ValueError("eigenvectors of the maximally mixed state are not defined")
    n = r / norm
    # derivative of the unit direction
    dn_a = (_vec(dr_a) - n * np.dot(n, _vec(dr_a))) / norm
    dn_b = (_vec(dr_b) - n * np.dot(n, _vec(dr_b))) / norm
    aligned = pure_curvature_bloch(n, dn_a, dn_b)
    return -aligned, aligned


def eigenvalue_difference_cubed(r):
    """``(p1 - p2)^3`` with ``p1 = (1 - r)/2``, ``p2 = (1 + r)/2``; equals ``-r^3``."""
    return ((1 - r) / 2 - (1 + r) / 2) ** 3

"""Validated density matrices, spectra and POVMs."""

from dataclasses import dataclass

import numpy as np

from .errors import (
    HermiticityError,
    MatrixFormatError,
    PovmValidationError,
    ShapeMismatchError,
    StateValidationError,
)
from .linalg import as_matrix, eig_hermitian, hermiticity_residual, loads_json, matrix_from_obj, reconstruct

STATE_TOL = 1e-10
RANK_TOL = 1e-12


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated state. Build it with :func:`validate_density`."""

    matrix: np.ndarray

    @property
    def dim(self):
        return self.matrix.shape[0]

    def expect(self, op):
        """``Tr(rho @ op)`` as a complex number."""
        return complex(np.einsum("ij,ji->", self.matrix, op))


@dataclass(frozen=True, eq=False)
class Spectrum:
    probabilities: np.ndarray
    states: np.ndarray  # columns, all N eigenvectors
    rank: int
    rank_tol: float

    @property
    def dim(self):
        return self.states.shape[0]

    @property
    def full_rank(self):
        return self.rank == self.dim

    @property
    def branch(self):
        return "full" if self.full_rank else "low"

    def reconstruct(self):
        return reconstruct(self.probabilities, self.states)

    def to_eigenbasis(self, op):
        return np.conj(self.states).T @ op @ self.states

    def from_eigenbasis(self, op):
        return self.states @ op @ np.conj(self.states).T


@dataclass(frozen=True, eq=False)
class Povm:
    elements: tuple

    @property
    def dim(self):
        return self.elements[0].shape[0]

    def __len__(self):
        return len(self.elements)


def validate_density(m, tol=STATE_TOL):
    """Check hermiticity, unit trace and positivity, collecting all failures."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ShapeMismatchError(f"state matrix is not square: {m.shape}")
    if not np.all(np.isfinite(m)):
        raise StateValidationError([("non-finite entries", float("inf"))])
    violations = []
    herm = hermiticity_residual(m)
    if herm > tol:
        violations.append(("hermiticity", herm))
    trace_err = abs(np.trace(m) - 1.0)
    if trace_err > tol:
        violations.append(("trace", trace_err))
    w = np.linalg.eigvalsh(0.5 * (m + np.conj(m).T))
    if w[0] < -tol:
        violations.append(("negativity", -float(w[0])))
    if violations:
        raise StateValidationError(violations)
    return DensityMatrix(_frozen(m))


def spectral_decompose(rho, rank_tol=RANK_TOL):
    """Descending eigen-decomposition ``rho = sum_i p_i |psi_i><psi_i|``.

    Eigenvalues in ``(-1e-10, 0)`` are clamped to zero; the rank counts the
    probabilities above ``rank_tol``.
    """
    w, v = eig_hermitian(rho.matrix)
    if w[-1] < -STATE_TOL:
        raise StateValidationError([("negativity", -float(w[-1]))])
    p = np.where(w < 0.0, 0.0, w)
    p.flags.writeable = False
    v.flags.writeable = False
    rank = int(np.count_nonzero(p > rank_tol))
    return Spectrum(p, v, max(rank, 1), rank_tol)


def validate_povm(elements, tol=STATE_TOL):
    elements = [as_matrix(e) for e in elements]
    if not elements:
        raise PovmValidationError("POVM has no elements")
    n = elements[0].shape[0]
    for k, e in enumerate(elements):
        if e.shape != (n, n):
            raise PovmValidationError(f"element {k} has shape {e.shape}, expected {(n, n)}")
        if hermiticity_residual(e) > tol:
            raise PovmValidationError(f"element {k} is not Hermitian")
        lo = np.linalg.eigvalsh(0.5 * (e + np.conj(e).T))[0]
        if lo < -tol:
            raise PovmValidationError(f"element {k} is not positive (min eigenvalue {lo:.3e})")
    gap = np.max(np.abs(sum(elements) - np.eye(n)))
    if gap > tol:
        raise PovmValidationError(f"POVM elements do not sum to identity (max deviation {gap:.3e})")
    return Povm(tuple(_frozen(e) for e in elements))


def projective_povm(basis):
    """Rank-one projectors onto the columns of a unitary."""
    basis = as_matrix(basis)
    return validate_povm([np.outer(basis[:, k], np.conj(basis[:, k])) for k in range(basis.shape[1])])


def born_probabilities(rho, povm):
    if rho.dim != povm.dim:
        raise ShapeMismatchError(f"state dim {rho.dim} vs POVM dim {povm.dim}")
    q = np.array([rho.expect(e).real for e in povm.elements])
    if np.min(q) < -1e-12:
        raise StateValidationError([("negative probability", -float(np.min(q)))])
    return np.clip(q, 0.0, None)


def load_povm(path):
    with open(path) as fh:
        data = loads_json(fh.read())
    if not isinstance(data, list):
        raise MatrixFormatError("POVM file must hold a JSON array of matrix objects")
    try:
        return validate_povm([matrix_from_obj(obj) for obj in data])
    except HermiticityError as exc:
        raise PovmValidationError(str(exc)) from exc

"""Dense complex-matrix primitives and the Hermitian eigensolver contract."""

import json
import math

import numpy as np

from .errors import HermiticityError, MatrixFormatError, NumericError, ShapeMismatchError

HERMITICITY_TOL = 1e-10

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def as_matrix(a):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ShapeMismatchError(f"expected a 2-d array, got shape {a.shape}")
    return a


def dagger(a):
    return np.conj(a).T


def commutator(a, b):
    return a @ b - b @ a


def anticommutator(a, b):
    return a @ b + b @ a


def hermitian_part(a):
    return 0.5 * (a + dagger(a))


def frobenius_distance(a, b):
    """Frobenius norm of ``a - b``."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ShapeMismatchError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def hermiticity_residual(h):
    h = as_matrix(h)
    return float(np.linalg.norm(h - dagger(h)))


def check_hermitian(h, tol=HERMITICITY_TOL):
    """Return ``h`` as a complex array, raising if it is not Hermitian.

    The test is relative: ``||H - H^dagger||_F <= tol * ||H||_F``.
    """
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise ShapeMismatchError(f"matrix is not square: {h.shape}")
    if not np.all(np.isfinite(h)):
        raise HermiticityError("matrix has non-finite entries")
    res = hermiticity_residual(h)
    if res > tol * np.linalg.norm(h):
        raise HermiticityError(f"matrix is not Hermitian (residual {res:.3e})", residual=res)
    return h


def _fix_phase(v):
    # first entry of appreciable modulus becomes real positive
    idx = np.flatnonzero(np.abs(v) > 1e-6 * np.max(np.abs(v)))
    if idx.size:
        z = v[idx[0]]
        v = v * (np.conj(z) / abs(z))
    return v


def _tie_key(v):
    entries = np.round(v, 8)
    return tuple(x for z in entries for x in (-z.real, -z.imag))


def eig_hermitian(h, tol=HERMITICITY_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(w, v)`` with real eigenvalues ``w`` in descending order and
    orthonormal eigenvectors in the columns of ``v``. Each eigenvector is
    phase-fixed and degenerate clusters are ordered lexicographically so the
    output is reproducible.
    """
    h = check_hermitian(h, tol)
    n = h.shape[0]
    norm = np.linalg.norm(h)
    try:
        w, v = np.linalg.eigh(hermitian_part(h))
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed: {exc}") from exc
    w = w[::-1].copy()
    v = v[:, ::-1].copy()
    for k in range(n):
        v[:, k] = _fix_phase(v[:, k])

    # relative, so averaging a cluster stays well inside the residual contract
    cluster_tol = 1e-12 * norm
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and w[start] - w[stop] <= cluster_tol:
            stop += 1
        if stop - start > 1:
            block = sorted(range(start, stop), key=lambda k: _tie_key(v[:, k]))
            v[:, start:stop] = v[:, block]
            w[start:stop] = np.mean(w[start:stop])
        start = stop

    residual = float(np.max(np.linalg.norm(h @ v - v * w, axis=0))) if n else 0.0
    if residual > 1e-10 * max(norm, np.finfo(float).tiny):
        raise NumericError(f"eigendecomposition residual {residual:.3e} too large", residual=residual)
    return w, v


def reconstruct(w, v):
    return (v * w) @ dagger(v)


def _parse_constant(name):
    raise MatrixFormatError(f"non-finite value {name} in matrix file")


def _real_block(rows, n, label):
    if not isinstance(rows, list) or len(rows) != n:
        raise MatrixFormatError(f"'{label}' must be a list of {n} rows")
    for row in rows:
        if not isinstance(row, list) or len(row) != n:
            raise MatrixFormatError(f"'{label}' is ragged or has the wrong width")
        for x in row:
            if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
                raise MatrixFormatError(f"'{label}' contains a non-numeric or non-finite entry")
    return np.array(rows, dtype=float)


def matrix_from_obj(obj):
    """Decode a ``{"dim", "re", "im"}`` matrix object."""
    if not isinstance(obj, dict) or not {"dim", "re", "im"} <= obj.keys():
        raise MatrixFormatError("matrix object needs keys 'dim', 're', 'im'")
    n = obj["dim"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise MatrixFormatError("'dim' must be a positive integer")
    return _real_block(obj["re"], n, "re") + 1j * _real_block(obj["im"], n, "im")


def matrix_to_obj(a):
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeMismatchError("only square matrices are serialized")
    return {"dim": a.shape[0], "re": a.real.tolist(), "im": a.imag.tolist()}


def loads_json(text):
    try:
        return json.loads(text, parse_constant=_parse_constant)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"malformed JSON: {exc}") from exc


def load_matrix(path):
    with open(path) as fh:
        return matrix_from_obj(loads_json(fh.read()))


def save_matrix(path, a):
    with open(path, "w") as fh:
        json.dump(matrix_to_obj(a), fh)

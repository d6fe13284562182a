"""Brute-force cross-checks for the main pipeline.

Nothing here imports the package's eigensolver, SLD solver or differencing
engine; models are only used through their raw ``evaluator``.
"""

import cmath

import numpy as np
import scipy.linalg

from .errors import SldInconsistencyError, UnsupportedOracleError


def sld_vec_solve(rho, d_rho, cutoff=1e-11, max_residual=1e-8):
    """Minimal-norm SLD from the vectorized linear system.

    With column-stacking ``vec``, ``(L rho + rho L)/2`` becomes
    ``(rho^T kron I + I kron rho)/2 @ vec(L)``.
    """
    rho = np.asarray(getattr(rho, "matrix", rho), dtype=complex)
    d_rho = np.asarray(d_rho, dtype=complex)
    n = rho.shape[0]
    eye = np.eye(n)
    sup = 0.5 * (np.kron(rho.T, eye) + np.kron(eye, rho))
    rhs = d_rho.reshape(-1, order="F")
    u, s, vh = np.linalg.svd(sup)
    keep = s > cutoff
    coeff = (np.conj(u[:, keep]).T @ rhs) / s[keep]
    x = np.conj(vh[keep]).T @ coeff
    res = np.linalg.norm(sup @ x - rhs)
    if res > max_residual:
        raise SldInconsistencyError(f"vectorized SLD system is inconsistent (residual {res:.3e})", residual=res)
    sld = x.reshape(n, n, order="F")
    return 0.5 * (sld + np.conj(sld).T)


def _psd_sqrt(a):
    w, v = np.linalg.eigh(a)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ np.conj(v).T


def bures_fidelity(rho, sigma):
    """``Tr sqrt(sqrt(rho) sigma sqrt(rho))``, as the nuclear norm of ``sqrt(rho) sqrt(sigma)``."""
    return float(np.sum(scipy.linalg.svdvals(_psd_sqrt(rho) @ _psd_sqrt(sigma))))


def bures_distance_sq(rho, sigma):
    """``2 - 2 F`` evaluated as ``min_U ||sqrt(rho) - sqrt(sigma) U||_F^2``.

    The minimizing unitary is the polar factor of ``sqrt(sigma) sqrt(rho)``.
    Working with the difference avoids the cancellation in ``1 - F`` for
    nearby states.
    """
    a = _psd_sqrt(rho)
    b = _psd_sqrt(sigma)
    u, _ = scipy.linalg.polar(b @ a)
    return float(np.linalg.norm(a - b @ u) ** 2)


def qfi_fidelity(model, theta, axis, eps=1e-4, min_eigenvalue=1e-12):
    """Quantum Fisher information from the fidelity of neighbouring states.

    Uses ``8 (1 - F) / eps^2 = 4 d_B^2 / eps^2`` symmetrized over ``+-eps``
    and Richardson extrapolated over ``eps`` and ``eps/2``.
    """
    theta = np.asarray(theta, dtype=float)
    rho = np.asarray(model.evaluator(theta), dtype=complex)
    if np.min(np.linalg.eigvalsh(rho)) <= min_eigenvalue:
        raise UnsupportedOracleError("fidelity oracle needs a full-rank state")

    def estimate(h):
        e = np.zeros_like(theta)
        e[axis] = h
        d_plus = bures_distance_sq(rho, np.asarray(model.evaluator(theta + e), dtype=complex))
        d_minus = bures_distance_sq(rho, np.asarray(model.evaluator(theta - e), dtype=complex))
        return 2.0 * (d_plus + d_minus) / h**2

    return (4.0 * estimate(eps / 2) - estimate(eps)) / 3.0


def _state_vector(rho):
    # column of largest weight, normalized; no eigensolver involved
    k = int(np.argmax(np.real(np.diag(rho))))
    return rho[:, k] / np.sqrt(rho[k, k].real)


def curvature_finite_loop_pure(model, theta, axes=(0, 1), eps=1e-3, min_overlap=0.5):
    """Berry curvature of a rank-one family from a small plaquette.

    The phase of the overlap product around an ``eps x eps`` square centred
    at ``theta`` equals minus the enclosed flux, so the curvature is
    ``-arg(W) / eps^2``.
    """
    if not 1e-4 <= eps <= 1e-2:
        raise ValueError(f"plaquette size {eps} outside [1e-4, 1e-2]")
    theta = np.asarray(theta, dtype=float)
    a, b = axes
    ea = np.zeros_like(theta)
    eb = np.zeros_like(theta)
    ea[a] = eps
    eb[b] = eps
    base = theta - 0.5 * (ea + eb)
    corners = [base, base + ea, base + ea + eb, base + eb]
    vecs = [_state_vector(np.asarray(model.evaluator(c), dtype=complex)) for c in corners]
    w = 1.0 + 0j
    for k in range(4):
        ov = np.vdot(vecs[k], vecs[(k + 1) % 4])
        if abs(ov) < min_overlap:
            raise ValueError(f"neighbouring states nearly orthogonal (|overlap| = {abs(ov):.3e}); shrink eps")
        w *= ov
    return -cmath.phase(w) / eps**2

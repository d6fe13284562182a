"""Quantum geometric tensor, Fisher matrix and mixed-state Berry curvature.

Curvature is available through two independent routes:

* the commutator route ``Omega = (i/4) Tr(rho [L_a, L_b])``, which needs
  only the SLDs and has no spectral denominators;
* spectral routes built from the double Wilczek-Zee connection
  ``A_ij = <psi_i|d_a psi_j> <psi_i|d_b psi_j>^*``, with separate formulas
  for full-rank and rank-deficient states.

Eigenvector derivatives are never differenced. Their off-diagonal overlaps
come from first-order perturbation theory,
``<psi_i|d psi_j> = <psi_i|d rho|psi_j> / (p_j - p_i)``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BranchError,
    DegeneracyError,
    NumericError,
    ShapeMismatchError,
    SldInconsistencyError,
    StateValidationError,
)
from .linalg import check_hermitian, commutator
from .models import derivative, param_point
from .sld import CONSISTENCY_TOL, SUPPORT_TOL, solve_slds
from .states import STATE_TOL

DEGENERACY_TOL = 1e-8


def qgt(rho, l_a, l_b):
    """``Tr(rho L_a L_b) / 4``."""
    if l_a.shape != rho.matrix.shape or l_b.shape != rho.matrix.shape:
        raise ShapeMismatchError("SLD shapes do not match the state")
    return 0.25 * rho.expect(l_a @ l_b)


def qfi_matrix(rho, slds):
    """Fisher matrix ``Re Tr(rho L_mu L_nu)``, the expectation of the symmetrized product."""
    d = len(slds)
    f = np.empty((d, d))
    for mu in range(d):
        for nu in range(mu, d):
            f[mu, nu] = f[nu, mu] = rho.expect(slds[mu] @ slds[nu]).real
    return f


def curvature_commutator(rho, l_a, l_b, tol=1e-10):
    if l_a.shape != rho.matrix.shape or l_b.shape != rho.matrix.shape:
        raise ShapeMismatchError("SLD shapes do not match the state")
    value = 0.25j * rho.expect(commutator(l_a, l_b))
    if abs(value.imag) > tol * max(1.0, abs(value.real)):
        raise NumericError(f"curvature has imaginary residue {value.imag:.3e}", residual=abs(value.imag))
    return value.real


@dataclass(frozen=True, eq=False)
class WilczekZeeTable:
    """Double connection ``A_ij`` on the eigenbasis; ``mask`` marks computed pairs."""

    entries: np.ndarray
    mask: np.ndarray
    skipped: tuple = ()

    @property
    def real(self):
        return self.entries.real

    @property
    def imag(self):
        return self.entries.imag


def _connection(spec, d_rho, pairs):
    x = spec.to_eigenbasis(d_rho)
    p = spec.probabilities
    out = np.zeros_like(x)
    for i, j in pairs:
        out[i, j] = x[i, j] / (p[j] - p[i])
    return out


def _is_degenerate(p, i, j, tol):
    return abs(p[i] - p[j]) <= tol


def wilczek_zee(spec, d_rho_a, d_rho_b, pairs=None, degeneracy_tol=DEGENERACY_TOL):
    """Double Wilczek-Zee connection over eigenvector pairs.

    With ``pairs=None`` every off-diagonal pair is attempted and degenerate
    ones are skipped (recorded in ``skipped``). Explicitly requested
    degenerate pairs raise :class:`DegeneracyError`.
    """
    d_rho_a = check_hermitian(d_rho_a)
    d_rho_b = check_hermitian(d_rho_b)
    n = spec.dim
    p = spec.probabilities
    skipped = []
    if pairs is None:
        wanted = []
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                if _is_degenerate(p, i, j, degeneracy_tol):
                    skipped.append((i, j))
                else:
                    wanted.append((i, j))
    else:
        wanted = [tuple(pair) for pair in pairs]
        for i, j in wanted:
            if i == j:
                raise ValueError(f"diagonal pair {(i, j)} has no connection entry")
            if _is_degenerate(p, i, j, degeneracy_tol):
                raise DegeneracyError(
                    f"eigenvalues {i} and {j} are degenerate (|p_i - p_j| = {abs(p[i] - p[j]):.3e})",
                    pair=(i, j),
                )
    conn_a = _connection(spec, d_rho_a, wanted)
    conn_b = _connection(spec, d_rho_b, wanted)
    entries = conn_a * np.conj(conn_b)
    mask = np.zeros((n, n), dtype=bool)
    for pair in wanted:
        mask[pair] = True
    return WilczekZeeTable(entries, mask, tuple(skipped))


def curvature_spectral_fullrank(spec, wz):
    """``-2 sum_{i<j} (p_i - p_j)^3 / (p_i + p_j)^2 Im A_ij`` for full-rank states."""
    if not spec.full_rank:
        raise BranchError(
            f"state has rank {spec.rank} < {spec.dim}; use curvature_spectral_lowrank"
        )
    p = spec.probabilities
    total = 0.0
    for i in range(spec.dim):
        for j in range(i + 1, spec.dim):
            if wz.mask[i, j]:
                total += (p[i] - p[j]) ** 3 / (p[i] + p[j]) ** 2 * wz.imag[i, j]
    return -2.0 * total


def _lowrank_table(spec, d_rho_a, d_rho_b, degeneracy_tol):
    m = spec.rank
    p = spec.probabilities
    for i in range(m):
        for k in range(i + 1, spec.dim):
            if _is_degenerate(p, i, k, degeneracy_tol):
                raise DegeneracyError(
                    f"eigenvalues {i} and {k} are degenerate (|p_i - p_k| = {abs(p[i] - p[k]):.3e})",
                    pair=(i, k),
                )
    pairs = [(i, k) for i in range(m) for k in range(spec.dim) if k != i]
    return wilczek_zee(spec, d_rho_a, d_rho_b, pairs=pairs, degeneracy_tol=degeneracy_tol)


def pure_state_curvatures(spec, wz):
    """Berry curvature of each support eigenvector, ``-2 sum_{k != i} Im A_ik``.

    Needs ``wz`` populated for every (support, any) pair.
    """
    out = np.empty(spec.rank)
    for i in range(spec.rank):
        row = np.delete(np.arange(spec.dim), i)
        if not np.all(wz.mask[i, row]):
            raise DegeneracyError(f"connection row {i} is incomplete", pair=(i, None))
        out[i] = -2.0 * np.sum(wz.imag[i, row])
    return out


def curvature_average(spec, pure_curvatures):
    """Probability-weighted average of the eigenstate Berry curvatures."""
    pure_curvatures = np.asarray(pure_curvatures, dtype=float)
    return float(np.dot(spec.probabilities[: len(pure_curvatures)], pure_curvatures))


def curvature_spectral_lowrank(spec, d_rho_a, d_rho_b, degeneracy_tol=DEGENERACY_TOL):
    """Curvature of a rank-deficient state from its support eigenpairs.

    Sum of the averaged eigenstate curvatures and a cross term
    ``4 sum_{i != j <= M} p_i p_j (p_i - p_j) / (p_i + p_j)^2 Im A_ij``.
    """
    if spec.full_rank:
        raise BranchError("state has full rank; use curvature_spectral_fullrank")
    wz = _lowrank_table(spec, d_rho_a, d_rho_b, degeneracy_tol)
    first = curvature_average(spec, pure_state_curvatures(spec, wz))
    p = spec.probabilities
    cross = 0.0
    for i in range(spec.rank):
        for j in range(spec.rank):
            if i != j:
                cross += p[i] * p[j] * (p[i] - p[j]) / (p[i] + p[j]) ** 2 * wz.imag[i, j]
    return first + 4.0 * cross


def averaged_curvature(spec, d_rho_a, d_rho_b, degeneracy_tol=DEGENERACY_TOL):
    """Alternative mixed-state curvature: only the eigenstate average, any rank."""
    pairs = [(i, k) for i in range(spec.rank) for k in range(spec.dim) if k != i]
    wz = wilczek_zee(spec, d_rho_a, d_rho_b, pairs=pairs, degeneracy_tol=degeneracy_tol)
    return curvature_average(spec, pure_state_curvatures(spec, wz))


def curvature_spectral(spec, d_rho_a, d_rho_b, degeneracy_tol=DEGENERACY_TOL):
    """Dispatch to the spectral formula matching the rank of ``spec``."""
    if spec.full_rank:
        return curvature_spectral_fullrank(spec, wilczek_zee(spec, d_rho_a, d_rho_b, degeneracy_tol=degeneracy_tol))
    return curvature_spectral_lowrank(spec, d_rho_a, d_rho_b, degeneracy_tol)


@dataclass(frozen=True, eq=False)
class GeometryReport:
    theta: np.ndarray
    qfi: np.ndarray
    qgt: np.ndarray
    curvature: np.ndarray
    branch: str
    residuals: dict = field(default_factory=dict)
    curvature_spectral: np.ndarray = None

    def to_json(self):
        return {
            "theta": self.theta.tolist(),
            "qfi": self.qfi.tolist(),
            "qgt_re": self.qgt.real.tolist(),
            "qgt_im": self.qgt.imag.tolist(),
            "curvature": self.curvature.tolist(),
            "branch": self.branch,
            "residuals": dict(self.residuals),
        }


def geometry_report(model, theta, scheme=None, degeneracy_tol=DEGENERACY_TOL):
    """Fisher matrix, QGT and curvature at one point, with cross-route residuals.

    The commutator route is authoritative; the spectral route is recorded
    alongside it and its disagreement lands in ``residuals``. If the spectral
    route is unavailable (degenerate support spectrum) the residual is
    ``None`` and the reason is kept under ``spectral_skipped``.
    """
    rho, slds = solve_slds(model, theta, scheme)
    spec = slds.spectrum
    d = model.param_count
    q = np.empty((d, d), dtype=complex)
    raw = np.zeros((d, d))
    for mu in range(d):
        for nu in range(d):
            q[mu, nu] = qgt(rho, slds[mu], slds[nu])
            if mu != nu:
                raw[mu, nu] = curvature_commutator(rho, slds[mu], slds[nu])
    omega = 0.5 * (raw - raw.T)
    fisher = qfi_matrix(rho, slds)

    residuals = {
        "sld": max(slds.residuals, default=0.0),
        "antisymmetry": float(np.max(np.abs(raw + raw.T))),
        "curvature_vs_qgt": float(np.max(np.abs(omega + 2.0 * q.imag))),
        "fisher_vs_qgt": float(np.max(np.abs(fisher - 4.0 * q.real))),
    }
    spectral = np.zeros((d, d))
    try:
        for mu in range(d):
            for nu in range(mu + 1, d):
                w = curvature_spectral(spec, slds.derivatives[mu], slds.derivatives[nu], degeneracy_tol)
                spectral[mu, nu], spectral[nu, mu] = w, -w
        residuals["commutator_vs_spectral"] = float(np.max(np.abs(spectral - omega)))
    except DegeneracyError as exc:
        spectral = None
        residuals["commutator_vs_spectral"] = None
        residuals["spectral_skipped"] = str(exc)
    return GeometryReport(
        np.array(theta, dtype=float).reshape(-1), fisher, q, omega, spec.branch, residuals, spectral,
    )


def curvature_at(model, theta, axes=(0, 1), scheme=None):
    """Commutator-route curvature for a single axis pair."""
    rho, slds = solve_slds(model, theta, scheme)
    a, b = axes
    return curvature_commutator(rho, slds[a], slds[b])


def curvature_batch(model, points, axes=(0, 1), scheme=None):
    """Commutator-route curvature at many points with stacked linear algebra.

    Same SLD convention and validation as :func:`curvature_at`, evaluated
    with one batched eigendecomposition.
    """
    points = [param_point(model, p) for p in points]
    if not points:
        return np.zeros(0)
    a, b = axes
    rho = np.array([model.evaluator(p) for p in points], dtype=complex)
    d_a = np.array([derivative(model, p, a, scheme) for p in points])
    d_b = np.array([derivative(model, p, b, scheme) for p in points])

    herm = np.max(np.abs(rho - np.conj(np.swapaxes(rho, 1, 2))))
    trace = np.max(np.abs(np.trace(rho, axis1=1, axis2=2) - 1.0))
    w, v = np.linalg.eigh(rho)
    if herm > STATE_TOL or trace > STATE_TOL or np.min(w) < -STATE_TOL:
        raise StateValidationError([("hermiticity", herm), ("trace", trace), ("negativity", -np.min(w))])
    p = np.clip(w, 0.0, None)

    vh = np.conj(np.swapaxes(v, 1, 2))
    denom = p[:, :, None] + p[:, None, :]
    off = denom <= SUPPORT_TOL
    slds = []
    for d in (d_a, d_b):
        e = vh @ d @ v
        leak = np.max(np.abs(e[off]), initial=0.0)
        if leak > CONSISTENCY_TOL:
            raise SldInconsistencyError(f"derivative leaves the support (component {leak:.3e})", residual=leak)
        l_eig = np.zeros_like(e)
        np.divide(2.0 * e, denom, out=l_eig, where=~off)
        slds.append(l_eig)
    comm = slds[0] @ slds[1] - slds[1] @ slds[0]
    value = 0.25j * np.einsum("bj,bjj->b", p, comm)
    return value.real

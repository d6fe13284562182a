"""Symmetric logarithmic derivatives.

The SLD ``L`` of a state ``rho`` along a derivative ``d_rho`` solves
``d_rho = (L rho + rho L) / 2``. In the eigenbasis of ``rho`` this is
diagonal: ``L_jk = 2 <psi_j|d_rho|psi_k> / (p_j + p_k)``. Where
``p_j + p_k`` vanishes the equation places no constraint on ``L_jk``; those
entries are set to zero (the minimal-norm solution) after checking that the
derivative has no weight there.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ShapeMismatchError, SldInconsistencyError
from .linalg import anticommutator, check_hermitian, commutator, hermitian_part
from .models import derivative, evaluate
from .states import spectral_decompose

SUPPORT_TOL = 1e-11
CONSISTENCY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SldSet:
    operators: list
    derivatives: list
    spectrum: object
    residuals: list

    def __len__(self):
        return len(self.operators)

    def __getitem__(self, k):
        return self.operators[k]


def lyapunov_residual(rho_matrix, d_rho, sld):
    return float(np.linalg.norm(d_rho - 0.5 * anticommutator(sld, rho_matrix)))


def solve_sld(spec, d_rho, support_tol=SUPPORT_TOL, consistency_tol=CONSISTENCY_TOL):
    """Minimal-norm SLD for the state with spectrum ``spec``."""
    d_rho = check_hermitian(d_rho)
    if d_rho.shape != (spec.dim, spec.dim):
        raise ShapeMismatchError(f"derivative shape {d_rho.shape} does not match state dim {spec.dim}")
    d_eig = spec.to_eigenbasis(d_rho)
    p = spec.probabilities
    denom = p[:, None] + p[None, :]
    off_support = denom <= support_tol
    leak = np.max(np.abs(d_eig[off_support]), initial=0.0)
    if leak > consistency_tol:
        raise SldInconsistencyError(
            f"derivative leaves the support of the state (component {leak:.3e}); no SLD exists",
            residual=leak,
        )
    l_eig = np.zeros_like(d_eig)
    np.divide(2.0 * d_eig, denom, out=l_eig, where=~off_support)
    return hermitian_part(spec.from_eigenbasis(l_eig))


def sld_pure_shortcut(d_rho):
    """SLD of a rank-one state: twice the derivative."""
    return 2.0 * np.asarray(d_rho, dtype=complex)


def solve_slds(model, theta, scheme=None, rank_tol=None):
    """SLDs for every parameter axis of ``model`` at ``theta``."""
    rho = evaluate(model, theta)
    spec = spectral_decompose(rho) if rank_tol is None else spectral_decompose(rho, rank_tol)
    ds = [derivative(model, theta, k, scheme) for k in range(model.param_count)]
    ops = [solve_sld(spec, d) for d in ds]
    res = [lyapunov_residual(rho.matrix, d, op) for d, op in zip(ds, ops)]
    return rho, SldSet(ops, ds, spec, res)


def sld_expectations(rho, l_a, l_b, tol=1e-10):
    """Real and imaginary parts of ``Tr(rho L_a L_b)``.

    The imaginary part is cross-checked against ``-(i/2) Tr(rho [L_a, L_b])``.
    """
    if l_a.shape != rho.matrix.shape or l_b.shape != rho.matrix.shape:
        raise ShapeMismatchError("SLD shapes do not match the state")
    t = rho.expect(l_a @ l_b)
    via_commutator = (-0.5j * rho.expect(commutator(l_a, l_b))).real
    scale = max(1.0, abs(t))
    if abs(via_commutator - t.imag) > tol * scale:
        raise NumericError(
            f"commutator cross-check failed ({abs(via_commutator - t.imag):.3e})",
            residual=abs(via_commutator - t.imag),
        )
    return {"re": t.real, "im": t.imag}


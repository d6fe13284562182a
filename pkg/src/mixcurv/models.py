"""Parametric state families and their derivatives."""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ModelRangeError, ShapeMismatchError, StepUnderflowError
from .linalg import PAULI, check_hermitian, commutator, dagger, eig_hermitian, hermitian_part
from .states import validate_density

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class DiffScheme:
    """Finite-difference settings.

    ``method`` is ``"central"`` (second order) or ``"richardson"`` (central
    differences at ``step`` and ``step/2`` combined to fourth order). With
    ``force=True`` differencing is used even when an analytic derivative
    exists.
    """

    method: str = "central"
    step: float = 1e-5
    force: bool = False

    def __post_init__(self):
        if self.method not in ("central", "richardson"):
            raise ValueError(f"unknown differencing method {self.method!r}")
        if not (1e-9 <= self.step <= 1e-2):
            raise ValueError(f"step {self.step} outside [1e-9, 1e-2]")


@dataclass(frozen=True, eq=False)
class ParametricModel:
    name: str
    dim: int
    param_names: tuple
    evaluator: Callable
    analytic_derivative: Optional[Callable] = None
    metadata: dict = field(default_factory=dict)

    @property
    def param_count(self):
        return len(self.param_names)

    def __call__(self, theta):
        return evaluate(self, theta)


def param_point(model, theta):
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if theta.ndim != 1 or theta.size != model.param_count:
        raise ShapeMismatchError(f"{model.name} takes {model.param_count} parameters, got {theta.size}")
    if not np.all(np.isfinite(theta)):
        raise ModelRangeError("parameter point has non-finite entries")
    return theta


def evaluate(model, theta):
    return validate_density(model.evaluator(param_point(model, theta)))


def _central(f, theta, axis, h):
    e = np.zeros_like(theta)
    e[axis] = h
    return (f(theta + e) - f(theta - e)) / (2 * h)


def difference(f, theta, axis, scheme, scale=1.0):
    """Differentiate ``f`` (array valued) along ``axis``.

    Runs central differences at ``h`` and ``h/2``; a discrepancy that is
    large relative to the result but no larger than the round-off floor
    ``eps * scale / h`` means the step has underflowed.
    """
    h = scheme.step
    d1 = _central(f, theta, axis, h)
    d2 = _central(f, theta, axis, h / 2)
    gap = np.linalg.norm(d1 - d2)
    size = max(np.linalg.norm(d1), np.linalg.norm(d2))
    noise = _EPS * scale / h
    if gap > 1e-3 * size and gap <= 1e3 * noise and size > 0:
        raise StepUnderflowError(f"step {h} is dominated by round-off (gap {gap:.3e})", residual=gap)
    if scheme.method == "richardson":
        return (4 * d2 - d1) / 3
    return d1


def derivative(model, theta, axis, scheme=None):
    """Hermitian derivative of the state along one parameter axis."""
    theta = param_point(model, theta)
    if not 0 <= axis < model.param_count:
        raise ShapeMismatchError(f"axis {axis} out of range for {model.param_count} parameters")
    scheme = scheme or DiffScheme()
    if model.analytic_derivative is not None and not scheme.force:
        return hermitian_part(np.asarray(model.analytic_derivative(theta, axis), dtype=complex))
    d = difference(model.evaluator, theta, axis, scheme)
    return hermitian_part(d)


def derivatives(model, theta, scheme=None):
    return [derivative(model, theta, k, scheme) for k in range(model.param_count)]


def expm_hermitian(g, t):
    """``exp(-i t G)`` for Hermitian ``G`` through its eigenbasis."""
    w, v = eig_hermitian(g)
    return (v * np.exp(-1j * t * w)) @ dagger(v)


def bloch_matrix(rvec):
    x, y, z = rvec
    return 0.5 * (np.eye(2) + x * PAULI[0] + y * PAULI[1] + z * PAULI[2])


def sigma_dot(vec):
    return vec[0] * PAULI[0] + vec[1] * PAULI[1] + vec[2] * PAULI[2]


def unit_vector(theta, phi):
    return np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])


def unit_vector_derivative(theta, phi, axis):
    if axis == 0:
        return np.array([np.cos(theta) * np.cos(phi), np.cos(theta) * np.sin(phi), -np.sin(theta)])
    return np.array([-np.sin(theta) * np.sin(phi), np.sin(theta) * np.cos(phi), 0.0])


def _bloch_family(name, r, dim=2):
    def evaluator(p):
        rho = bloch_matrix(r * unit_vector(*p))
        if dim == 2:
            return rho
        out = np.zeros((dim, dim), dtype=complex)
        out[:2, :2] = rho
        return out

    def analytic(p, axis):
        d = 0.5 * sigma_dot(r * unit_vector_derivative(p[0], p[1], axis))
        if dim == 2:
            return d
        out = np.zeros((dim, dim), dtype=complex)
        out[:2, :2] = d
        return out

    return ParametricModel(name, dim, ("theta", "phi"), evaluator, analytic, {"r": r})


def pure_bloch():
    """Pure qubit ``(I + n.sigma)/2`` in the spherical chart ``(theta, phi)``."""
    return _bloch_family("pure-bloch", 1.0)


def _check_radius(r):
    r = float(r)
    if not (0.0 <= r < 1.0):
        raise ModelRangeError(f"Bloch radius must lie in [0, 1), got {r}")
    return r


def mixed_bloch(r):
    """Qubit ``(I + r n.sigma)/2`` with fixed radius ``r`` in ``[0, 1)``."""
    return _bloch_family("mixed-bloch", _check_radius(r))


def embedded_qubit(n, r):
    """Mixed-bloch state in the top-left block of an ``n x n`` zero matrix."""
    n = int(n)
    if n < 2:
        raise ModelRangeError(f"embedding dimension must be at least 2, got {n}")
    model = _bloch_family("embedded-qubit", _check_radius(r), dim=n)
    model.metadata["n"] = n
    return model


def unitary_family(rho0, g1, g2):
    """``U rho0 U^dagger`` with ``U = exp(-i alpha G1) exp(-i beta G2)``."""
    rho0 = validate_density(rho0).matrix
    g1 = check_hermitian(g1)
    g2 = check_hermitian(g2)
    n = rho0.shape[0]
    if g1.shape != (n, n) or g2.shape != (n, n):
        raise ShapeMismatchError("generators must match the base-state dimension")

    def unitaries(p):
        return expm_hermitian(g1, p[0]), expm_hermitian(g2, p[1])

    def evaluator(p):
        a, b = unitaries(p)
        u = a @ b
        return u @ rho0 @ dagger(u)

    def analytic(p, axis):
        a, b = unitaries(p)
        inner = b @ rho0 @ dagger(b)
        if axis == 0:
            return -1j * commutator(g1, a @ inner @ dagger(a))
        return -1j * (a @ commutator(g2, inner) @ dagger(a))

    return ParametricModel(
        "unitary-family", n, ("alpha", "beta"), evaluator, analytic,
        {"rho0": rho0, "g1": g1, "g2": g2},
    )


def constant(rho, param_count=2):
    rho = validate_density(rho).matrix
    names = tuple(f"t{k}" for k in range(param_count))
    return ParametricModel(
        "constant", rho.shape[0], names, lambda p: rho, lambda p, axis: np.zeros_like(rho),
    )


def from_pure_vectors(name, psi, param_names, dpsi=None):
    """Rank-one family ``|psi(theta)><psi(theta)|`` from a normalized state-vector map."""

    def evaluator(p):
        v = np.asarray(psi(p), dtype=complex)
        return np.outer(v, np.conj(v))

    def analytic(p, axis):
        v = np.asarray(psi(p), dtype=complex)
        dv = np.asarray(dpsi(p, axis), dtype=complex)
        return np.outer(dv, np.conj(v)) + np.outer(v, np.conj(dv))

    dim = len(psi(np.zeros(len(param_names))))
    return ParametricModel(name, dim, tuple(param_names), evaluator, analytic if dpsi is not None else None)


MODEL_NAMES = ("pure-bloch", "mixed-bloch", "unitary-family", "embedded-qubit")


def build_model(name, args=None, rho0=None, g1=None, g2=None):
    """Construct a zoo model from its CLI name and ``key=value`` arguments."""
    args = dict(args or {})
    if name == "pure-bloch":
        return pure_bloch()
    if name == "mixed-bloch":
        return mixed_bloch(float(args.get("r", 0.5)))
    if name == "embedded-qubit":
        return embedded_qubit(int(args.get("n", args.get("N", 4))), float(args.get("r", 0.5)))
    if name == "unitary-family":
        if rho0 is None or g1 is None or g2 is None:
            raise ModelRangeError("unitary-family needs rho0, g1 and g2 matrices")
        return unitary_family(rho0, g1, g2)
    raise ModelRangeError(f"unknown model {name!r}; choose from {', '.join(MODEL_NAMES)}")


"""Classical Fisher information, regrets and trade-off audits."""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericError, RegretError, ShapeMismatchError
from .geometry import curvature_commutator
from .models import DiffScheme, difference, evaluate, param_point
from .sld import sld_expectations, solve_slds
from .states import born_probabilities

PROB_FLOOR = 1e-12
CLAMP_TOL = 1e-9
DEFAULT_SCHEME = DiffScheme("richardson", 1e-4)


def classical_fisher(model, povm, theta, axis, scheme=None, prob_floor=PROB_FLOOR):
    """Fisher information of the outcome distribution of ``povm`` along ``axis``.

    Outcome probabilities are differenced directly. Outcomes with probability
    at or below ``prob_floor`` contribute nothing; if their derivative does
    not vanish a warning flags the singular point.
    """
    theta = param_point(model, theta)
    if povm.dim != model.dim:
        raise ShapeMismatchError(f"POVM dim {povm.dim} vs model dim {model.dim}")
    scheme = scheme or DEFAULT_SCHEME

    def probs(p):
        return born_probabilities(evaluate(model, p), povm)

    q = probs(theta)
    dq = difference(probs, theta, axis, scheme)
    keep = q > prob_floor
    if not np.any(keep):
        raise NumericError("every outcome probability is below the floor")
    singular = ~keep & (np.abs(dq) > 1e-6)
    if np.any(singular):
        warnings.warn(
            f"outcomes {np.flatnonzero(singular).tolist()} have vanishing probability "
            "but non-vanishing derivative; Fisher information is singular here",
            RuntimeWarning,
            stacklevel=2,
        )
    return float(np.sum(dq[keep] ** 2 / q[keep]))


def regret(qfi, cfi, tol=CLAMP_TOL):
    """Fractional information lost by a measurement, ``(qfi - cfi) / qfi``."""
    if qfi <= 0:
        raise RegretError(f"regret undefined for quantum Fisher information {qfi}")
    if cfi > qfi + tol:
        raise RegretError(f"classical Fisher {cfi} exceeds quantum Fisher {qfi}")
    if cfi < -tol:
        raise RegretError(f"negative classical Fisher information {cfi}")
    return min(max((qfi - cfi) / qfi, 0.0), 1.0)


def c_squared(im_ll, qfi_a, qfi_b, tol=CLAMP_TOL):
    """Incompatibility ``Im<L_a L_b>^2 / (F_a F_b)``, clamped to ``[0, 1]``."""
    if qfi_a <= 0 or qfi_b <= 0:
        raise RegretError("incompatibility undefined when a quantum Fisher information vanishes")
    c2 = im_ll**2 / (qfi_a * qfi_b)
    if c2 > 1 + tol:
        raise NumericError(f"incompatibility {c2} exceeds 1", residual=c2 - 1)
    return min(c2, 1.0)


def _checked_sqrt(x, tol, label, flags):
    if x < 0:
        if x < -tol:
            raise NumericError(f"negative argument {x:.3e} under square root in {label}", residual=-x)
        flags.append(f"{label}: sqrt argument {x:.3e} clamped to 0")
        return 0.0
    return math.sqrt(x)


@dataclass(frozen=True)
class Inequality:
    lhs: float
    rhs: float

    @property
    def slack(self):
        return self.lhs - self.rhs

    def to_json(self):
        return {"lhs": self.lhs, "rhs": self.rhs, "slack": self.slack}


@dataclass(frozen=True)
class TradeoffAudit:
    axes: tuple
    qfi: tuple
    cfi: tuple
    regret: tuple
    gap: tuple
    c2: float
    curvature: float
    im_ll: float
    eq1: Inequality
    eq17: Inequality
    eq18_slack: float
    flags: list = field(default_factory=list)

    @property
    def min_slack(self):
        return min(self.eq1.slack, self.eq17.slack, self.eq18_slack)

    def to_json(self):
        return {
            "qfi": list(self.qfi),
            "cfi": list(self.cfi),
            "regret": list(self.regret),
            "c2": self.c2,
            "curvature": self.curvature,
            "eq1": self.eq1.to_json(),
            "eq17": self.eq17.to_json(),
            "eq18_slack": self.eq18_slack,
        }


def tradeoff_audit(model, povm, theta, axes=(0, 1), scheme=None, tol=CLAMP_TOL):
    """Evaluate the regret trade-off for two parameters under ``povm``.

    ``eq1`` is the regret form ``D_a^2 + D_b^2 + 2 sqrt(1 - C^2) D_a D_b >= C^2``;
    ``eq17`` is the same inequality multiplied through by ``F_a F_b`` and
    written with the curvature, where ``Im<L_a L_b>^2 = 4 Omega^2``;
    ``eq18_slack`` is ``F_a F_b - 4 Omega^2``.
    """
    a, b = axes
    scheme = scheme or DEFAULT_SCHEME
    rho, slds = solve_slds(model, theta, scheme)
    la, lb = slds[a], slds[b]
    qfi_a = rho.expect(la @ la).real
    qfi_b = rho.expect(lb @ lb).real
    im_ll = sld_expectations(rho, la, lb)["im"]
    omega = curvature_commutator(rho, la, lb)
    cfi_a = classical_fisher(model, povm, theta, a, scheme)
    cfi_b = classical_fisher(model, povm, theta, b, scheme)

    reg_a, reg_b = regret(qfi_a, cfi_a, tol), regret(qfi_b, cfi_b, tol)
    gap_a, gap_b = max(qfi_a - cfi_a, 0.0), max(qfi_b - cfi_b, 0.0)
    c2 = c_squared(im_ll, qfi_a, qfi_b, tol)
    flags = []

    root = _checked_sqrt(1.0 - c2, tol, "eq1", flags)
    eq1 = Inequality(
        reg_a + reg_b + 2.0 * root * math.sqrt(reg_a * reg_b), c2,
    )
    prod = qfi_a * qfi_b
    four_omega2 = 4.0 * omega**2
    root17 = _checked_sqrt(prod - four_omega2, tol * max(1.0, prod), "eq17", flags)
    eq17 = Inequality(
        qfi_b * gap_a + qfi_a * gap_b + 2.0 * math.sqrt(gap_a * gap_b) * root17, four_omega2,
    )
    return TradeoffAudit(
        (a, b), (qfi_a, qfi_b), (cfi_a, cfi_b), (reg_a, reg_b), (gap_a, gap_b),
        c2, omega, im_ll, eq1, eq17, prod - four_omega2, flags,
    )

"""Seeded randomized cross-checks between independent routes.

Each check maps ``(rng, trials)`` to its worst observed error; a check passes
when that error is at most its tolerance.
"""

from dataclasses import dataclass

import numpy as np

from . import geometry, metrology, oracle, qubit, sampling
from .models import mixed_bloch, pure_bloch, unit_vector, unit_vector_derivative
from .sld import lyapunov_residual, sld_pure_shortcut, solve_sld, solve_slds
from .states import Spectrum, spectral_decompose, validate_density


@dataclass(frozen=True)
class CheckResult:
    name: str
    worst: float
    tol: float

    @property
    def passed(self):
        return bool(self.worst <= self.tol)


def _sld_residual(rng, trials):
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 9))
        rho = validate_density(sampling.random_density(rng, n, min_eig=1e-3))
        d = sampling.random_hermitian(rng, n, traceless=True)
        worst = max(worst, lyapunov_residual(rho.matrix, d, solve_sld(spectral_decompose(rho), d)))
    return worst


def _sld_vs_oracle(rng, trials):
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 9))
        rho = validate_density(sampling.random_density(rng, n, min_eig=1e-3))
        d = sampling.random_hermitian(rng, n, traceless=True)
        main = solve_sld(spectral_decompose(rho), d)
        worst = max(worst, float(np.linalg.norm(main - oracle.sld_vec_solve(rho.matrix, d))))
    return worst


def _pure_shortcut(rng, trials):
    model = pure_bloch()
    worst = 0.0
    for _ in range(trials):
        theta = sampling.random_chart_point(rng)
        rho, slds = solve_slds(model, theta)
        for d, op in zip(slds.derivatives, slds.operators):
            worst = max(worst, float(np.linalg.norm(op - sld_pure_shortcut(d))))
    return worst


def _route_equivalence(rng, trials):
    worst = 0.0
    for _ in range(trials):
        model, theta = sampling.random_unitary_family(rng, int(rng.integers(2, 7)), min_eig=1e-3, min_gap=1e-3)
        worst = max(worst, geometry.geometry_report(model, theta).residuals["commutator_vs_spectral"])
    return worst


def _curvature_vs_qgt(rng, trials):
    worst = 0.0
    for _ in range(trials):
        model, theta = sampling.random_unitary_family(rng, int(rng.integers(2, 7)))
        worst = max(worst, geometry.geometry_report(model, theta).residuals["curvature_vs_qgt"])
    return worst


def _connection_antisymmetry(rng, trials):
    worst = 0.0
    for _ in range(trials):
        model, theta = sampling.random_unitary_family(rng, 3)
        rho, slds = solve_slds(model, theta)
        wz = geometry.wilczek_zee(slds.spectrum, *slds.derivatives)
        worst = max(worst, float(np.max(np.abs(wz.imag + wz.imag.T))))
    return worst


def _gauge_invariance(rng, trials):
    worst = 0.0
    for _ in range(trials):
        model, theta = sampling.random_unitary_family(rng, int(rng.integers(2, 5)))
        rho, slds = solve_slds(model, theta)
        spec = slds.spectrum
        phases = np.exp(1j * rng.uniform(0, 2 * np.pi, size=spec.dim))
        twisted = Spectrum(spec.probabilities, spec.states * phases, spec.rank, spec.rank_tol)
        a = geometry.wilczek_zee(spec, *slds.derivatives)
        b = geometry.wilczek_zee(twisted, *slds.derivatives)
        worst = max(worst, float(np.max(np.abs(a.entries - b.entries))))
    return worst


def _qubit_closed_form(rng, trials):
    worst = 0.0
    for _ in range(trials):
        r = float(rng.uniform(0.0, 0.99))
        theta = sampling.random_chart_point(rng)
        pipeline = geometry.curvature_at(mixed_bloch(r), theta)
        closed = qubit.mixed_curvature_bloch(
            r * unit_vector(*theta),
            r * unit_vector_derivative(*theta, 0),
            r * unit_vector_derivative(*theta, 1),
        )
        worst = max(worst, abs(pipeline - closed))
    return worst


def _pure_saturation(rng, trials):
    worst = 0.0
    for _ in range(trials):
        report = geometry.geometry_report(pure_bloch(), sampling.random_chart_point(rng))
        f = report.qfi
        worst = max(worst, abs(f[0, 0] * f[1, 1] - 4 * report.curvature[0, 1] ** 2))
    return worst


def _tradeoff_draws(rng, trials):
    slack = np.inf
    excess = -np.inf
    c2 = -np.inf
    for _ in range(trials):
        n = int(rng.integers(2, 5))
        model, theta = sampling.random_unitary_family(rng, n)
        audit = metrology.tradeoff_audit(model, sampling.random_projective_povm(rng, n), theta)
        slack = min(slack, audit.eq1.slack, audit.eq17.slack, audit.eq18_slack)
        excess = max(excess, audit.cfi[0] - audit.qfi[0], audit.cfi[1] - audit.qfi[1])
        c2 = max(c2, audit.im_ll**2 / (audit.qfi[0] * audit.qfi[1]) - 1.0)
    return slack, excess, c2


def _fidelity_oracle(rng, trials):
    worst = 0.0
    for _ in range(trials):
        model, theta = sampling.random_unitary_family(rng, int(rng.integers(2, 5)))
        axis = int(rng.integers(0, 2))
        rho, slds = solve_slds(model, theta)
        qfi = rho.expect(slds[axis] @ slds[axis]).real
        worst = max(worst, abs(oracle.qfi_fidelity(model, theta, axis) / qfi - 1.0))
    return worst


def _loop_oracle(rng, trials):
    model = pure_bloch()
    worst = 0.0
    for _ in range(trials):
        theta = sampling.random_chart_point(rng)
        worst = max(worst, abs(oracle.curvature_finite_loop_pure(model, theta) - geometry.curvature_at(model, theta)))
    return worst


def run_selftest(seed=0, trials=200, tol=None):
    """Run every check; ``tol`` overrides every per-check tolerance."""
    checks = [
        ("sld_lyapunov_residual", _sld_residual, 1e-10),
        ("sld_vs_vectorized_oracle", _sld_vs_oracle, 1e-9),
        ("sld_pure_shortcut", _pure_shortcut, 1e-10),
        ("commutator_vs_spectral", _route_equivalence, 1e-8),
        ("curvature_vs_minus_2_im_qgt", _curvature_vs_qgt, 1e-10),
        ("connection_antisymmetry", _connection_antisymmetry, 1e-10),
        ("connection_gauge_invariance", _gauge_invariance, 1e-10),
        ("qubit_closed_form", _qubit_closed_form, 1e-10),
        ("pure_qubit_saturation", _pure_saturation, 1e-9),
        ("fidelity_oracle_relative", _fidelity_oracle, 1e-4),
        ("plaquette_loop_oracle", _loop_oracle, 1e-5),
    ]
    results = []
    for k, (name, fn, default_tol) in enumerate(checks):
        rng = np.random.default_rng([seed, k])
        worst = fn(rng, trials) if trials > 0 else 0.0
        results.append(CheckResult(name, float(worst), default_tol if tol is None else tol))

    rng = np.random.default_rng([seed, len(checks)])
    if trials > 0:
        slack, excess, c2 = _tradeoff_draws(rng, trials)
    else:
        slack, excess, c2 = 0.0, 0.0, 0.0
    for name, worst in (
        ("tradeoff_min_slack", -slack),
        ("classical_le_quantum_fisher", excess),
        ("incompatibility_le_one", c2),
    ):
        results.append(CheckResult(name, float(worst), 1e-9 if tol is None else tol))
    return results

"""Seeded random states, generators, models and measurements."""

import numpy as np
from scipy.stats import unitary_group

from .models import unitary_family
from .states import projective_povm


def random_unitary(rng, n):
    return unitary_group.rvs(n, random_state=rng) if n > 1 else np.array([[1.0 + 0j]])


def random_spectrum(rng, n, min_eig=0.0, min_gap=0.0, max_tries=10_000):
    """Descending probabilities with a lower bound and minimum spacing."""
    for _ in range(max_tries):
        p = np.sort(rng.dirichlet(np.ones(n)))[::-1]
        if p[-1] >= min_eig and (n == 1 or np.min(-np.diff(p)) >= min_gap):
            return p
    raise RuntimeError("could not draw a spectrum with the requested spacing")


def random_density(rng, n, min_eig=0.0, min_gap=0.0):
    u = random_unitary(rng, n)
    p = random_spectrum(rng, n, min_eig, min_gap)
    rho = (u * p) @ np.conj(u).T
    return 0.5 * (rho + np.conj(rho).T)


def random_hermitian(rng, n, traceless=False, scale=1.0):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = 0.5 * scale * (a + np.conj(a).T)
    if traceless:
        h = h - np.trace(h) / n * np.eye(n)
    return h


def random_unitary_family(rng, n, min_eig=0.02, min_gap=0.02):
    """Unitary orbit of a random full-rank, non-degenerate state.

    Returns ``(model, theta)`` with ``theta`` a random point in ``[-pi, pi]^2``.
    """
    rho0 = random_density(rng, n, min_eig, min_gap)
    model = unitary_family(rho0, random_hermitian(rng, n), random_hermitian(rng, n))
    return model, rng.uniform(-np.pi, np.pi, size=2)


def random_projective_povm(rng, n):
    return projective_povm(random_unitary(rng, n))


def random_chart_point(rng, margin=0.05):
    """Spherical chart point away from the poles."""
    return np.array([rng.uniform(margin, np.pi - margin), rng.uniform(0.0, 2 * np.pi)])

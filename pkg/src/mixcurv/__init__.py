"""Mixed-state Berry curvature, quantum Fisher information and trade-off audits."""

from .geometry import (
    GeometryReport,
    WilczekZeeTable,
    curvature_average,
    curvature_commutator,
    curvature_spectral_fullrank,
    curvature_spectral_lowrank,
    geometry_report,
    qfi_matrix,
    qgt,
    wilczek_zee,
)
from .linalg import eig_hermitian, frobenius_distance
from .metrology import TradeoffAudit, c_squared, classical_fisher, regret, tradeoff_audit
from .models import DiffScheme, ParametricModel, derivative, embedded_qubit, evaluate, mixed_bloch, pure_bloch, unitary_family
from .sld import SldSet, sld_expectations, sld_pure_shortcut, solve_sld, solve_slds
from .states import DensityMatrix, Povm, Spectrum, born_probabilities, spectral_decompose, validate_density, validate_povm

__version__ = "0.1.0"

from metric_invariants.geometry.curvature import (
    CurvatureTensor,
    RicciData,
    christoffel,
    covariant_derivative,
    kretschmann,
    nabla_r_nonzero,
    ricci,
    ricci_generic,
    riemann,
    scalar_curvature,
    scalar_invariants,
    two_jet_from_curvature,
)
from metric_invariants.geometry.kernel_equations import (
    KernelEquationReport,
    kernel_equation_check,
)

__all__ = [
    "CurvatureTensor",
    "KernelEquationReport",
    "RicciData",
    "christoffel",
    "covariant_derivative",
    "kernel_equation_check",
    "kretschmann",
    "nabla_r_nonzero",
    "ricci",
    "ricci_generic",
    "riemann",
    "scalar_curvature",
    "scalar_invariants",
    "two_jet_from_curvature",
]

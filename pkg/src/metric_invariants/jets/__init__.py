from metric_invariants.jets.jetspace import (
    MetricJetPoint,
    TangentVector,
    VectorFieldJet,
    dim_metric_jet,
    dim_vf_jet,
    layout,
    signature_of,
    vf_layout,
)
from metric_invariants.jets.prolong import (
    PolynomialVectorField,
    bracket_residual,
    lift,
    lift0,
    lift_eval_generic,
    phi_matrix,
)

__all__ = [
    "MetricJetPoint",
    "PolynomialVectorField",
    "TangentVector",
    "VectorFieldJet",
    "bracket_residual",
    "dim_metric_jet",
    "dim_vf_jet",
    "layout",
    "lift",
    "lift0",
    "lift_eval_generic",
    "phi_matrix",
    "signature_of",
    "vf_layout",
]

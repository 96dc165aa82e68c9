from metric_invariants.counting.certificates import (
    CountCertificate,
    TrialRecord,
    certify_point,
    i_empirical,
)
from metric_invariants.counting.closed_forms import (
    WeylDims,
    expected_rank,
    i_closed_form,
    weyl_dims,
)
from metric_invariants.counting.sampling import sample_point

__all__ = [
    "CountCertificate",
    "TrialRecord",
    "WeylDims",
    "certify_point",
    "expected_rank",
    "i_closed_form",
    "i_empirical",
    "sample_point",
    "weyl_dims",
]

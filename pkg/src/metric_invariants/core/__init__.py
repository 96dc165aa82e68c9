from metric_invariants.core.errors import JetError
from metric_invariants.core.exact import (
    DualScalar,
    ExactMatrix,
    Rational,
    char_poly,
    det,
    is_squarefree,
    kernel_basis,
    rank_exact,
    rank_mod_prime,
    solve_exact,
)
from metric_invariants.core.multiindex import (
    MultiIndex,
    add_unit,
    binomial,
    enumerate_indices,
    rank,
    sub_checked,
    unrank,
)

__all__ = [
    "DualScalar",
    "ExactMatrix",
    "JetError",
    "MultiIndex",
    "Rational",
    "add_unit",
    "binomial",
    "char_poly",
    "det",
    "enumerate_indices",
    "is_squarefree",
    "kernel_basis",
    "rank",
    "rank_exact",
    "rank_mod_prime",
    "solve_exact",
    "sub_checked",
    "unrank",
]

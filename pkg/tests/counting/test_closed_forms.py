import pytest

from metric_invariants.core.errors import DimensionMismatchError
from metric_invariants.counting.closed_forms import (
    WeylDims,
    expected_rank,
    flat_kernel_dim,
    genericity_criterion,
    i_closed_form,
    weyl_dims,
)
from metric_invariants.jets.jetspace import dim_metric_jet


@pytest.mark.parametrize(
    "n,r,expected",
    [
        (2, 2, 1),
        (2, 3, 2),
        (2, 4, 5),
        (3, 2, 3),
        (4, 2, 14),
        (3, 3, 18),
        (4, 3, 74),
        (1, 5, 0),
        (3, 0, 0),
        (4, 1, 0),
    ],
)
def test_i_closed_form(n, r, expected):
    assert i_closed_form(n, r) == expected


def test_expected_rank():
    assert expected_rank(2, 2) == 19
    assert expected_rank(3, 1) == 27
    assert expected_rank(1, 2) == 4
    assert expected_rank(3, 2) == 60
    assert expected_rank(2, 0) == 5


def test_rank_and_count_add_up():
    for n in range(1, 6):
        for r in range(0, 6):
            assert expected_rank(n, r) + i_closed_form(n, r) == dim_metric_jet(n, r)


def test_bounds():
    with pytest.raises(DimensionMismatchError):
        i_closed_form(0, 2)
    with pytest.raises(DimensionMismatchError):
        expected_rank(2, -1)


def test_flat_kernel_dim():
    assert [flat_kernel_dim(n) for n in range(1, 5)] == [0, 1, 3, 6]


def test_genericity_criterion():
    assert genericity_criterion(2, 2) == "none needed"
    assert genericity_criterion(4, 1) == "none needed"
    assert genericity_criterion(3, 2) == "ricci-distinct"
    assert genericity_criterion(2, 3) == "nabla-r-nonzero"
    assert genericity_criterion(2, 5) == "nabla-r-nonzero"
    assert genericity_criterion(3, 3) == "rank-maximal"


def test_weyl_dims():
    assert weyl_dims(3) == WeylDims(3, 6, 5, 1, 0, 3)
    four = weyl_dims(4)
    assert (four.dim_CE, four.dim_WE, four.curvature_invariant_count) == (20, 10, 14)
    five = weyl_dims(5)
    assert (five.dim_CE, five.dim_WE, five.curvature_invariant_count) == (50, 35, 40)
    assert four.to_dict()["dim_WE"] == 10


def test_weyl_accounting_matches_order_two_count():
    for n in range(3, 9):
        dims = weyl_dims(n)
        assert dims.curvature_invariant_count == i_closed_form(n, 2)
        assert dims.dim_CE == dims.dim_ZE + dims.dim_UE + dims.dim_WE


def test_weyl_needs_dimension_three():
    with pytest.raises(DimensionMismatchError):
        weyl_dims(2)

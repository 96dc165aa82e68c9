import random
from fractions import Fraction

import pytest

from metric_invariants.core.errors import (
    DimensionMismatchError,
    InvalidPointFileError,
    OrderMismatchError,
    SingularMetricError,
)
from metric_invariants.core.multiindex import MultiIndex
from metric_invariants.counting.sampling import (
    congruent_metric,
    random_unimodular,
    sample_point,
)
from metric_invariants.jets.jetspace import (
    MetricJetPoint,
    TangentVector,
    VectorFieldJet,
    dim_metric_jet,
    dim_vf_jet,
    layout,
    signature_of,
    signature_of_block,
    vf_layout,
)

M = MultiIndex.of


def test_dim_metric_jet():
    for r in range(6):
        assert dim_metric_jet(1, r) == r + 2
    assert dim_metric_jet(2, 2) == 20
    assert dim_metric_jet(3, 2) == 63


def test_dim_vf_jet():
    assert dim_vf_jet(2, 3) == 20
    assert dim_vf_jet(3, 3) == 60
    for r in range(6):
        assert dim_vf_jet(1, r + 1) == r + 2


def test_count_difference_matches_closed_form():
    for n in range(1, 7):
        for r in range(2, 7):
            difference = dim_metric_jet(n, r) - dim_vf_jet(n, r + 1)
            closed = n + Fraction((r - 1) * n * n - (r + 1) * n, 2 * (r + 1)) * Fraction(
                dim_vf_jet(n, r), n
            )
            assert difference == closed


def test_layouts():
    assert [str(label) for label in layout(1, 0)] == ["x0", "y00_(0)"]
    assert [str(label) for label in layout(2, 0)] == [
        "x0",
        "x1",
        "y00_(0,0)",
        "y01_(0,0)",
        "y11_(0,0)",
    ]
    assert [str(label) for label in vf_layout(2, 1)] == [
        "u0_(0,0)",
        "u0_(1,0)",
        "u0_(0,1)",
        "u1_(0,0)",
        "u1_(1,0)",
        "u1_(0,1)",
    ]


def test_layouts_are_bijective():
    for n in range(1, 4):
        for r in range(4):
            assert len(set(layout(n, r))) == len(layout(n, r)) == dim_metric_jet(n, r)
            assert len(set(vf_layout(n, r))) == dim_vf_jet(n, r)


def test_signature_examples():
    assert signature_of_block([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == (3, 0)
    assert signature_of_block(
        [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]]
    ) == (1, 3)
    assert signature_of_block([[1, 1], [1, 0]]) == (1, 1)
    with pytest.raises(SingularMetricError):
        signature_of_block([[1, 1], [1, 1]])


def test_signature_is_congruence_invariant():
    rng = random.Random(5)
    for signature in [(3, 0), (2, 1), (1, 2), (2, 2), (1, 3)]:
        n = sum(signature)
        for _ in range(5):
            g0 = congruent_metric(random_unimodular(n, rng), signature)
            assert signature_of_block(g0) == signature


def test_symmetric_access():
    point = sample_point(3, (2, 1), 2, seed=1)
    for alpha in [M(0, 0, 0), M(1, 0, 0), M(0, 1, 1)]:
        for j in range(3):
            for k in range(3):
                assert point.y(j, k, alpha) == point.y(k, j, alpha)
    assert signature_of(point) == (2, 1)
    point.check_metric()


def test_point_shape_checks():
    with pytest.raises(DimensionMismatchError):
        MetricJetPoint(2, 0, (2, 0), (Fraction(1),))
    with pytest.raises(DimensionMismatchError):
        MetricJetPoint.from_metric([[1, 0], [0, 1]], signature=(1, 0))
    point = MetricJetPoint.from_metric([[1, 0], [0, 1]], r=1)
    with pytest.raises(OrderMismatchError):
        point.y(0, 0, M(2, 0))
    with pytest.raises(OrderMismatchError):
        point.truncate(2)


def test_check_metric_detects_wrong_signature():
    point = MetricJetPoint.from_metric([[1, 0], [0, -1]], signature=(2, 0))
    with pytest.raises(SingularMetricError):
        point.check_metric()


def test_truncate_keeps_lower_coordinates():
    point = sample_point(2, (1, 1), 3, seed=4)
    lower = point.truncate(1)
    assert lower.r == 1
    for label, value in lower.coordinates():
        assert point.y(label.j, label.k, label.alpha) == value


def test_point_json_round_trip():
    point = sample_point(2, (1, 1), 2, seed=9)
    document = point.to_json()
    assert document["signature"] == [1, 1]
    assert all("/" in item["value"] for item in document["coords"])
    assert MetricJetPoint.from_json(document) == point


def test_point_json_rejects_bad_documents():
    document = MetricJetPoint.from_metric([[1, 0], [0, 1]]).to_json()
    document["coords"][0]["value"] = "0.5"
    with pytest.raises(InvalidPointFileError):
        MetricJetPoint.from_json(document)

    singular = MetricJetPoint.from_metric([[1, 0], [0, 1]]).to_json()
    singular["coords"][0]["value"] = "0/1"
    with pytest.raises(InvalidPointFileError):
        MetricJetPoint.from_json(singular)

    outside = MetricJetPoint.from_metric([[1, 0], [0, 1]]).to_json()
    outside["coords"].append({"j": 0, "k": 0, "alpha": [1, 0], "value": "1/1"})
    with pytest.raises(InvalidPointFileError):
        MetricJetPoint.from_json(outside)


def test_vector_field_jet():
    jet = VectorFieldJet.from_mapping(2, 1, {(1, (1, 0)): 1, (0, (0, 1)): -1})
    assert jet.d(1, M(1, 0)) == 1
    assert jet.d_or_zero(0, M(2, 0)) == 0
    assert jet.truncate(0) == VectorFieldJet.zero(2, 0)
    assert {str(label): v for label, v in jet.nonzero().items()} == {
        "u0_(0,1)": -1,
        "u1_(1,0)": 1,
    }
    assert VectorFieldJet.from_json(jet.to_json()) == jet
    with pytest.raises(DimensionMismatchError):
        jet + VectorFieldJet.zero(2, 2)


def test_tangent_vector_truncate():
    tangent = TangentVector.from_vector(1, 1, [1, 2, 3])
    assert tangent.dy_at(0, 0, M(1)) == 3
    assert tangent.truncate(0) == TangentVector(1, 0, (1,), (2,))
    assert not tangent.is_zero()
    assert TangentVector.zero(2, 1).is_zero()

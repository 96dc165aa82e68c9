import random
from fractions import Fraction

import pytest

from metric_invariants.core.errors import DimensionMismatchError
from metric_invariants.core.exact import ExactMatrix, det
from metric_invariants.counting.sampling import (
    constant_curvature_point,
    flat_point,
    make_rng,
    random_normal_point,
    random_unimodular,
    random_vf_jet,
    sample_point,
)
from metric_invariants.geometry.curvature import riemann
from metric_invariants.jets.jetspace import dim_vf_jet, signature_of
from metric_invariants.utils.constants import DENOMINATORS


def test_make_rng_is_reproducible():
    assert make_rng(5, "point", 2).random() == make_rng(5, "point", 2).random()
    assert make_rng(5, "point", 2).random() != make_rng(5, "point", 3).random()
    rng = random.Random(1)
    assert make_rng(rng, "ignored") is rng


def test_sample_point_is_reproducible():
    assert sample_point(3, (2, 1), 2, seed=42) == sample_point(3, (2, 1), 2, seed=42)
    assert sample_point(3, (2, 1), 2, seed=42) != sample_point(3, (2, 1), 2, seed=43)


def test_sample_point_has_requested_signature():
    for signature in [(2, 0), (1, 1), (0, 2), (3, 1), (2, 2)]:
        n = sum(signature)
        for seed in range(3):
            point = sample_point(n, signature, 1, seed=seed)
            assert signature_of(point) == signature


def test_sample_point_values_use_small_denominators():
    point = sample_point(2, (2, 0), 2, seed=8)
    assert all(Fraction(v).denominator in DENOMINATORS for v in point.values)


def test_sample_point_rejects_bad_signature():
    with pytest.raises(DimensionMismatchError):
        sample_point(3, (1, 1), 2, seed=0)


def test_random_unimodular_has_determinant_one():
    rng = random.Random(17)
    for n in range(1, 5):
        assert det(ExactMatrix.from_rows(random_unimodular(n, rng))) == 1


def test_flat_point():
    point = flat_point(3, (1, 2), 2)
    assert point.metric_block() == [[1, 0, 0], [0, -1, 0], [0, 0, -1]]
    assert all(v == 0 for label, v in point.coordinates() if label.alpha.order > 0)


def test_constant_curvature_point_orders():
    for r in range(5):
        point = constant_curvature_point((2, 0), 1, r)
        assert point.r == r
    assert riemann(constant_curvature_point((1, 1), -2, 4).truncate(2)).get(0, 1, 0, 1) == 2


def test_random_normal_point_is_normal():
    point = random_normal_point(3, (2, 1), random.Random(3))
    assert point.metric_block() == [[1, 0, 0], [0, 1, 0], [0, 0, -1]]
    assert point.r == 2


def test_random_vf_jet_shape():
    jet = random_vf_jet(3, 2, random.Random(0))
    assert len(jet.values) == dim_vf_jet(3, 2)

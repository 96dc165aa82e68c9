import itertools
import random

import pytest

from metric_invariants.core.errors import NotNormalFormError, OrderMismatchError
from metric_invariants.core.exact import kernel_basis
from metric_invariants.counting.sampling import (
    constant_curvature_point,
    flat_point,
    random_normal_point,
    sample_point,
)
from metric_invariants.geometry.curvature import flat_metric, random_curvature
from metric_invariants.geometry.kernel_equations import (
    KernelEquationReport,
    curvature_residual,
    free_parameters,
    kernel_equation_check,
    orbit,
    orbit_representatives,
    reflect,
    rotate,
)
from metric_invariants.jets.jetspace import MetricJetPoint, VectorFieldJet
from metric_invariants.jets.prolong import phi_matrix


def _kernel_jets(point):
    s = point.r + 1
    return [VectorFieldJet.from_vector(point.n, s, v) for v in kernel_basis(phi_matrix(point))]


ROTATION = {(0, (0, 1)): -1, (1, (1, 0)): 1}


def test_orbit_of_generic_tuple():
    signs = orbit((0, 1, 2, 3))
    assert len(signs) == 8
    assert signs[rotate((0, 1, 2, 3))] == -1
    assert signs[reflect((0, 1, 2, 3))] == -1
    assert signs[rotate(rotate((0, 1, 2, 3)))] == 1


def test_orbit_representatives_cover_all_tuples():
    table = orbit_representatives(3)
    assert len(table) == 3**4
    for t, (rep, sign) in table.items():
        assert rep <= t
        assert sign in (1, -1)


def test_residual_sign_rule():
    rng = random.Random(3)
    R = random_curvature(3, rng)
    U = [[rng.randint(-5, 5) for _ in range(3)] for _ in range(3)]
    for t in itertools.product(range(3), repeat=4):
        assert curvature_residual(U, R, rotate(t)) == -curvature_residual(U, R, t)
        assert curvature_residual(U, R, reflect(t)) == -curvature_residual(U, R, t)


def test_flat_surface_kernel():
    point = flat_point(2, (2, 0), 2)
    basis = kernel_basis(phi_matrix(point))
    assert len(basis) == 1
    assert free_parameters(2, 3, basis) == ["u1_(1,0)"]
    jet = VectorFieldJet.from_vector(2, 3, basis[0])
    assert jet == VectorFieldJet.from_mapping(2, 3, ROTATION)
    report = kernel_equation_check(point, jet)
    assert report.passed
    assert report.equations_holding() == [
        "zero_order",
        "skew",
        "second_order",
        "third_order",
        "curvature_system",
    ]
    assert report.orbit_consistent


@pytest.mark.parametrize("n,r", [(2, 1), (3, 1), (3, 2), (4, 1)])
def test_flat_kernels_are_rotations(n, r):
    point = flat_point(n, (n, 0), r)
    jets = _kernel_jets(point)
    assert len(jets) == n * (n - 1) // 2
    assert all(kernel_equation_check(point, jet).passed for jet in jets)


def test_lorentzian_flat_kernel():
    point = flat_point(3, (2, 1), 2)
    jets = _kernel_jets(point)
    assert len(jets) == 3
    assert all(kernel_equation_check(point, jet).passed for jet in jets)


def test_sphere_rotation_satisfies_curvature_system():
    point = constant_curvature_point((2, 0), 1, 2)
    report = kernel_equation_check(point, VectorFieldJet.from_mapping(2, 3, ROTATION))
    assert report.curvature_system
    assert report.nonzero_residuals == 0
    assert report.passed


@pytest.mark.parametrize("signature,K", [((2, 0), 1), ((1, 1), -2), ((3, 0), 1), ((2, 1), 3)])
def test_jets_passing_every_equation_are_in_the_kernel(signature, K):
    n = sum(signature)
    point = constant_curvature_point(signature, K, 2)
    g = flat_metric(signature)
    matrix = phi_matrix(point)
    for a, b in itertools.combinations(range(n), 2):
        unit_a = tuple(int(i == a) for i in range(n))
        unit_b = tuple(int(i == b) for i in range(n))
        jet = VectorFieldJet.from_mapping(n, 3, {(a, unit_b): -g[b][b], (b, unit_a): g[a][a]})
        assert kernel_equation_check(point, jet).passed
        assert matrix.matvec(list(jet.values)) == [0] * matrix.rows


def test_generic_point_has_trivial_kernel():
    point = random_normal_point(3, (3, 0), random.Random(1))
    assert _kernel_jets(point) == []


def test_curvature_system_detects_non_isometries():
    point = random_normal_point(3, (3, 0), random.Random(2))
    rotation = {(0, (0, 1, 0)): -1, (1, (1, 0, 0)): 1}
    report = kernel_equation_check(point, VectorFieldJet.from_mapping(3, 3, rotation))
    assert report.zero_order and report.skew
    assert report.curvature_system is False
    assert report.nonzero_residuals == len(report.residuals) > 0
    assert report.orbit_consistent
    assert not report.passed


def test_dilation_breaks_skew():
    point = flat_point(2, (1, 1), 1)
    report = kernel_equation_check(point, VectorFieldJet.from_mapping(2, 2, {(0, (1, 0)): 1}))
    assert report.zero_order
    assert not report.skew
    assert report.second_order
    assert report.third_order is None
    assert report.curvature_system is None
    assert not report.passed


def test_report_serializes():
    report = KernelEquationReport(zero_order=True, skew=False)
    document = report.to_dict()
    assert document["skew"] is False
    assert KernelEquationReport.from_dict(document) == report


def test_requires_normal_point():
    with pytest.raises(NotNormalFormError):
        kernel_equation_check(
            sample_point(2, (2, 0), 1, seed=1), VectorFieldJet.zero(2, 2)
        )
    with pytest.raises(NotNormalFormError):
        kernel_equation_check(
            MetricJetPoint.from_metric([[2, 0], [0, 1]], 0), VectorFieldJet.zero(2, 1)
        )
    with pytest.raises(OrderMismatchError):
        kernel_equation_check(flat_point(2, (2, 0), 1), VectorFieldJet.zero(2, 1))

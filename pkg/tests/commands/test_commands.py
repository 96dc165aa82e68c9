import json

import jsonschema
import pytest

from metric_invariants import verification
from metric_invariants.commands import get_command, get_commands, render
from metric_invariants.commands.base import EXIT_FAILED, EXIT_OK
from metric_invariants.commands.inputs import point_from_curvature
from metric_invariants.commands.render import approx
from metric_invariants.commands.table_command import certify_grid
from metric_invariants.config import RunConfig
from metric_invariants.core.errors import (
    DimensionMismatchError,
    InvalidPointFileError,
    OrderMismatchError,
)
from metric_invariants.counting.sampling import sample_point
from metric_invariants.geometry.curvature import constant_curvature_tensor, flat_metric


def run(subcommand: str, **fields):
    config = RunConfig(subcommand=subcommand, **fields).resolved()
    return get_command(subcommand).run(config), config


@pytest.fixture
def sphere_file(tmp_path):
    path = tmp_path / "sphere.json"
    path.write_text(
        json.dumps({"n": 2, "components": [{"i": 0, "j": 1, "k": 0, "l": 1, "value": "1/1"}]})
    )
    return str(path)


@pytest.fixture
def point_file(tmp_path):
    path = tmp_path / "point.json"
    path.write_text(json.dumps(sample_point(2, (2, 0), 2, seed=3).to_json()))
    return str(path)


def test_registry():
    names = [command.name for command in get_commands()]
    assert names == ["dims", "count", "rank", "kernel", "table", "verify", "geom"]
    with pytest.raises(KeyError):
        get_command("nope")


@pytest.mark.parametrize(
    "n,r,expected",
    [(2, 2, (20, 20, 0, 19)), (3, 2, (63, 60, 3, 60)), (1, 4, (6, 6, 0, 6))],
)
def test_dims(n, r, expected):
    output, _ = run("dims", n=n, r=r)
    payload = output.payload
    assert (
        payload["dim_metric_jet"],
        payload["dim_vf_jet"],
        payload["difference"],
        payload["expected_rank"],
    ) == expected
    assert output.exit_code == EXIT_OK


def test_dims_requires_order():
    with pytest.raises(jsonschema.ValidationError):
        run("dims", n=2)


def test_count_with_weyl_split():
    output, _ = run("count", n=4, r=2)
    assert output.payload["i_closed"] == 14
    assert output.payload["weyl"]["dim_WE"] == 10
    assert output.rows == [["4", "2", "14", "20", "10"]]

    output, _ = run("count", n=2, r=3)
    assert output.payload == {"n": 2, "r": 3, "i_closed": 2}


def test_rank_sampled():
    output, _ = run("rank", n=2, r=2, trials=2)
    assert output.exit_code == EXIT_OK
    assert output.payload["observed_ranks"] == [19, 19]
    assert output.payload["i_empirical"] == 1
    assert "PASS" in output.title


def test_rank_flat():
    output, _ = run("rank", n=3, r=2, flat=True)
    assert output.payload["source"] == "flat"
    assert output.payload["record"]["rank"] == 57
    assert output.payload["record"]["kernel_dim"] == 3


def test_rank_point_file_must_match_flags(point_file):
    output, _ = run("rank", point=point_file)
    assert output.payload["record"]["rank"] == 19
    with pytest.raises(DimensionMismatchError):
        run("rank", point=point_file, n=3)
    with pytest.raises(OrderMismatchError):
        run("rank", point=point_file, r=1)


def test_rank_requires_a_cell_or_point():
    with pytest.raises(jsonschema.ValidationError):
        run("rank", n=2)


def test_kernel_flat_surface():
    output, _ = run("kernel", n=2, r=2, flat=True)
    payload = output.payload
    assert payload["kernel_dim"] == 1
    assert payload["free_parameters"] == ["u1_(1,0)"]
    assert payload["basis"] == [{"u0_(0,1)": "-1/1", "u1_(1,0)": "1/1"}]
    assert payload["equations"][0]["curvature_system"] is True
    assert output.exit_code == EXIT_OK


def test_kernel_at_curvature_point(sphere_file):
    output, _ = run("kernel", curvature=sphere_file)
    assert output.payload["kernel_dim"] == 1
    assert output.exit_code == EXIT_OK


def test_kernel_skips_equations_off_normal_form(point_file):
    output, _ = run("kernel", point=point_file)
    assert output.payload["kernel_dim"] == 1
    assert output.payload["equations"] is None
    assert output.rows[0][3] == "n/a"


def test_kernel_sampled_generic_cell_is_trivial():
    output, _ = run("kernel", n=3, r=2, seed=4)
    assert output.payload["kernel_dim"] == 0
    assert output.rows == []


def test_verify_exit_code_follows_checks(monkeypatch):
    monkeypatch.setattr(
        verification,
        "ORACLES",
        [
            ("holds", lambda seed, workers=1: (True, "ok")),
            ("breaks", lambda seed, workers=1: (False, "no")),
        ],
    )
    output, _ = run("verify")
    assert output.exit_code == EXIT_FAILED
    assert output.payload["passed"] is False
    assert output.payload["checks"] == [
        {"name": "holds", "passed": True, "detail": "ok"},
        {"name": "breaks", "passed": False, "detail": "no"},
    ]

    monkeypatch.setattr(verification, "ORACLES", verification.ORACLES[:1])
    output, _ = run("verify")
    assert output.exit_code == EXIT_OK
    assert output.message == "verify: 1/1 checks pass"


def test_geom_sphere(sphere_file):
    output, _ = run("geom", curvature=sphere_file)
    payload = output.payload
    assert payload["scalar_curvature"] == "2/1"
    assert payload["kretschmann"] == "4/1"
    assert payload["ricci"] == [["1/1", "0/1"], ["0/1", "1/1"]]
    assert payload["ricci_generic"] is False
    assert payload["christoffel"] == {}


def test_geom_flat_surface_three_jet():
    output, _ = run("geom", n=2, r=3, flat=True)
    assert output.payload["nabla_r_nonzero"] is False
    assert output.payload["scalar_curvature"] == "0/1"


def test_geom_needs_a_point():
    with pytest.raises(jsonschema.ValidationError):
        run("geom", n=2, r=2)
    with pytest.raises(OrderMismatchError):
        run("geom", n=2, r=1, flat=True)


def test_invalid_point_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(InvalidPointFileError):
        run("rank", point=str(path))


def test_point_from_curvature_orders():
    g0 = flat_metric((2, 0))
    R = constant_curvature_tensor(g0, 1)
    assert point_from_curvature(R, (2, 0), 3).r == 3
    with pytest.raises(OrderMismatchError):
        point_from_curvature(R, (2, 0), 4)
    with pytest.raises(DimensionMismatchError):
        point_from_curvature(R, (3, 0), 2)


def test_table_small_grid():
    output, _ = run("table", nmax=2, rmax=2, trials=2)
    assert output.exit_code == EXIT_OK
    assert output.payload["failed"] == 0
    assert [(row[0], row[1], row[3]) for row in output.rows] == [
        ("1", "0", "0"),
        ("1", "1", "0"),
        ("1", "2", "0"),
        ("2", "0", "0"),
        ("2", "1", "0"),
        ("2", "2", "1"),
    ]


def test_certify_grid_order():
    certs = certify_grid(2, 1, trials=1, seed=0)
    assert [(c.n, c.r) for c in certs] == [(1, 0), (1, 1), (2, 0), (2, 1)]
    assert all(c.passed for c in certs)


def test_table_signature_mix():
    output, config = run("table", nmax=2, rmax=1, trials=1, signature_mix=True)
    assert config.signature_mix
    assert output.exit_code == EXIT_OK
    assert output.payload["failed"] == 0
    assert [(row[0], row[1], row[2]) for row in output.rows] == [
        ("1", "0", "1,0"),
        ("1", "0", "0,1"),
        ("1", "1", "1,0"),
        ("1", "1", "0,1"),
        ("2", "0", "2,0"),
        ("2", "0", "1,1"),
        ("2", "1", "2,0"),
        ("2", "1", "1,1"),
    ]
    counts = {}
    for cell in output.payload["cells"]:
        counts.setdefault((cell["n"], cell["r"]), set()).add(cell["i_empirical"])
    assert all(len(values) == 1 for values in counts.values())


def test_render_formats():
    output, config = run("dims", n=2, r=2, format="json")
    document = json.loads(render(output, config))
    assert document["config"]["n"] == 2
    assert document["config"]["signature"] == [2, 0]
    assert document["result"]["dim_metric_jet"] == 20

    output, config = run("dims", n=2, r=2, format="csv")
    assert render(output, config) == (
        "n,r,dim_metric_jet,dim_vf_jet,difference,expected_rank\n2,2,20,20,0,19\n"
    )

    output, config = run("dims", n=2, r=2)
    table = render(output, config)
    assert "dim_metric_jet" in table
    assert table == render(output, config)


def test_approx():
    assert approx(3) == "3"
    assert approx("1/3") == "1/3 ≈ 0.333333"
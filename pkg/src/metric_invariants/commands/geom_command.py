from metric_invariants.commands.base import Command, CommandOutput, schema
from metric_invariants.commands.inputs import pinned_point
from metric_invariants.commands.render import approx
from metric_invariants.config import RunConfig
from metric_invariants.core.errors import OrderMismatchError
from metric_invariants.core.exact import value_part
from metric_invariants.geometry.curvature import (
    christoffel,
    kretschmann,
    nabla_r_nonzero,
    ricci,
    ricci_generic,
    riemann,
    scalar_curvature,
)
from metric_invariants.utils.serialization import fraction_to_json


def _matrix(rows) -> list[list[str]]:
    return [[fraction_to_json(value_part(x)) for x in row] for row in rows]


class GeomCommand(Command):
    name = "geom"
    description = "Christoffel symbols, curvature, Ricci data and scalar invariants at a jet point."
    input_schema = {
        **schema([]),
        "anyOf": [
            {"required": ["point"]},
            {"required": ["curvature"]},
            {"required": ["n", "r"], "properties": {"flat": {"const": True}}},
        ],
    }

    def run_impl(self, config: RunConfig) -> CommandOutput:
        source, point = pinned_point(config)
        if point.r < 2:
            raise OrderMismatchError("curvature needs a jet of order at least 2")
        n = point.n
        gamma = christoffel(point)
        R = riemann(point.truncate(2))
        ric = ricci(point.truncate(2))
        scalar = value_part(scalar_curvature(point.truncate(2)))
        kretsch = value_part(kretschmann(point.truncate(2)))
        generic = ricci_generic(point.truncate(2))
        payload = {
            "source": source,
            "n": n,
            "r": point.r,
            "signature": list(point.signature),
            "christoffel": {
                f"{i}{j}{k}": fraction_to_json(value_part(gamma[i][j][k]))
                for i in range(n)
                for j in range(n)
                for k in range(j, n)
                if value_part(gamma[i][j][k]) != 0
            },
            "curvature": R.value_part().to_json(),
            "ricci": _matrix(ric.ricci),
            "ricci_endomorphism": _matrix(ric.endo),
            "scalar_curvature": fraction_to_json(scalar),
            "kretschmann": fraction_to_json(kretsch),
            "ricci_generic": generic,
        }
        rows = [
            ["scalar curvature", approx(scalar)],
            ["Kretschmann", approx(kretsch)],
            ["Ricci eigenvalues distinct", str(generic)],
        ]
        if n == 2 and point.r >= 3:
            payload["nabla_r_nonzero"] = nabla_r_nonzero(point)
            rows.append(["nabla R nonzero", str(payload["nabla_r_nonzero"])])
        for i, row in enumerate(payload["ricci"]):
            rows.append([f"Ricci row {i}", " ".join(row)])
        return CommandOutput(
            payload=payload,
            columns=["quantity", "value"],
            rows=rows,
            message=f"geom at {source}: scalar curvature {fraction_to_json(scalar)}",
            title=f"{source}: n={n} r={point.r} signature={point.signature}",
        )

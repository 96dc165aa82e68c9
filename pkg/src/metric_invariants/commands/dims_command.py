from metric_invariants.commands.base import Command, CommandOutput, schema
from metric_invariants.config import RunConfig
from metric_invariants.counting.closed_forms import expected_rank
from metric_invariants.jets.jetspace import dim_metric_jet, dim_vf_jet


class DimsCommand(Command):
    name = "dims"
    description = "Dimensions of the metric jet space and of the vector-field jets that act on it."
    input_schema = schema(["n", "r"])

    def run_impl(self, config: RunConfig) -> CommandOutput:
        n, r = config.n, config.r
        payload = {
            "n": n,
            "r": r,
            "dim_metric_jet": dim_metric_jet(n, r),
            "dim_vf_jet": dim_vf_jet(n, r + 1),
            "difference": dim_metric_jet(n, r) - dim_vf_jet(n, r + 1),
            "expected_rank": expected_rank(n, r),
        }
        columns = list(payload)
        return CommandOutput(
            payload=payload,
            columns=columns,
            rows=[[str(payload[c]) for c in columns]],
            message=f"dims n={n} r={r}: {payload['dim_metric_jet']} x {payload['dim_vf_jet']}",
        )

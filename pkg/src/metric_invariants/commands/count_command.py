from metric_invariants.commands.base import Command, CommandOutput, schema
from metric_invariants.config import RunConfig
from metric_invariants.counting.closed_forms import i_closed_form, weyl_dims


class CountCommand(Command):
    name = "count"
    description = "Closed-form number of functionally independent invariants of order r."
    input_schema = schema(["n", "r"])

    def run_impl(self, config: RunConfig) -> CommandOutput:
        n, r = config.n, config.r
        count = i_closed_form(n, r)
        payload = {"n": n, "r": r, "i_closed": count}
        columns = ["n", "r", "i_closed"]
        row = [str(n), str(r), str(count)]
        # At order 2 the count splits as Ricci eigenvalues plus Weyl components
        if r == 2 and n >= 3:
            weyl = weyl_dims(n)
            payload["weyl"] = weyl.to_dict()
            columns += ["dim_CE", "dim_WE"]
            row += [str(weyl.dim_CE), str(weyl.dim_WE)]
        return CommandOutput(
            payload=payload,
            columns=columns,
            rows=[row],
            message=f"count n={n} r={r}: {count}",
        )

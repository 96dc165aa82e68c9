from metric_invariants.commands.base import EXIT_FAILED, EXIT_OK, Command, CommandOutput, schema
from metric_invariants.commands.inputs import pinned_point
from metric_invariants.config import RunConfig
from metric_invariants.counting.certificates import certify_point, i_empirical
from metric_invariants.counting.closed_forms import expected_rank, i_closed_form
from metric_invariants.jets.jetspace import dim_metric_jet


def _cell(value) -> str:
    return "-" if value is None else str(value)


class RankCommand(Command):
    name = "rank"
    description = (
        "Rank of the prolongation map at sampled points, certified against the closed-form count; "
        "with --point/--curvature/--flat, the exact rank at that point."
    )
    input_schema = schema([], any_of=[["n", "r"], ["point"], ["curvature"]])

    def run_impl(self, config: RunConfig) -> CommandOutput:
        pinned = pinned_point(config)
        if pinned is not None:
            return self._pinned(*pinned, seed=config.seed)

        cert = i_empirical(
            config.n,
            tuple(config.signature),
            config.r,
            trials=config.trials,
            seed=config.seed,
            prime_count=config.prime_count,
            paranoid=config.paranoid,
            workers=config.workers,
        )
        columns = ["trial", "rank", "primes", "exact", "kernel_dim", "witness", "error"]
        rows = [
            [
                str(rec.trial),
                _cell(rec.rank),
                " ".join(str(p) for p in rec.primes) or "-",
                str(rec.exact),
                _cell(rec.kernel_dim),
                _cell(rec.witness),
                rec.error or "",
            ]
            for rec in cert.records
        ]
        verdict = "PASS" if cert.passed else "FAIL"
        return CommandOutput(
            payload=cert.to_dict(),
            columns=columns,
            rows=rows,
            message=f"rank n={cert.n} r={cert.r}: i_empirical={cert.i_empirical} {verdict}",
            exit_code=EXIT_OK if cert.passed else EXIT_FAILED,
            title=(
                f"n={cert.n} r={cert.r} signature={tuple(cert.signature)}: "
                f"i_closed={cert.i_closed} i_empirical={_cell(cert.i_empirical)} "
                f"({cert.genericity_criterion}) {verdict}"
            ),
        )

    def _pinned(self, source: str, point, seed: int) -> CommandOutput:
        record = certify_point(point, seed=seed)
        dim_jet = dim_metric_jet(point.n, point.r)
        payload = {
            "source": source,
            "n": point.n,
            "r": point.r,
            "signature": list(point.signature),
            "dim_jet": dim_jet,
            "expected_rank": expected_rank(point.n, point.r),
            "i_closed": i_closed_form(point.n, point.r),
            "record": record.to_dict(),
        }
        columns = ["source", "rank", "expected_rank", "kernel_dim", "witness"]
        rows = [
            [
                source,
                str(record.rank),
                str(payload["expected_rank"]),
                str(record.kernel_dim),
                _cell(record.witness),
            ]
        ]
        return CommandOutput(
            payload=payload,
            columns=columns,
            rows=rows,
            message=f"rank at {source}: {record.rank}",
        )

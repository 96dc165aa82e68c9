import logging

from metric_invariants.commands.base import EXIT_FAILED, EXIT_OK, Command, CommandOutput, schema
from metric_invariants.commands.inputs import pinned_point
from metric_invariants.config import RunConfig
from metric_invariants.core.errors import NotNormalFormError
from metric_invariants.core.exact import kernel_basis
from metric_invariants.counting.sampling import make_rng, sample_point
from metric_invariants.geometry.kernel_equations import free_parameters, kernel_equation_check
from metric_invariants.jets.jetspace import VectorFieldJet
from metric_invariants.jets.prolong import phi_matrix
from metric_invariants.utils.serialization import fraction_to_json

logger = logging.getLogger(__name__)


class KernelCommand(Command):
    name = "kernel"
    description = (
        "Exact kernel basis of the prolongation map at a point, with the kernel "
        "equations checked at normal-form points."
    )
    input_schema = schema([], any_of=[["n", "r"], ["point"], ["curvature"]])

    def run_impl(self, config: RunConfig) -> CommandOutput:
        pinned = pinned_point(config)
        if pinned is None:
            source = f"sample seed={config.seed}"
            point = sample_point(
                config.n, tuple(config.signature), config.r, make_rng(config.seed, "kernel")
            )
        else:
            source, point = pinned
        n, s = point.n, point.r + 1

        basis = kernel_basis(phi_matrix(point))
        jets = [VectorFieldJet.from_vector(n, s, v) for v in basis]
        try:
            reports = [kernel_equation_check(point, jet) for jet in jets]
        except NotNormalFormError as exc:
            logger.info("kernel equations skipped: %s", exc)
            reports = None
        free = free_parameters(n, s, basis)

        vectors = [
            {str(label): fraction_to_json(v) for label, v in jet.nonzero().items()} for jet in jets
        ]
        payload = {
            "source": source,
            "n": n,
            "r": point.r,
            "signature": list(point.signature),
            "kernel_dim": len(basis),
            "free_parameters": free,
            "basis": vectors,
            "equations": [rep.to_dict() for rep in reports] if reports is not None else None,
        }
        rows = []
        for index, vector in enumerate(vectors):
            holding = ", ".join(reports[index].equations_holding()) if reports is not None else "n/a"
            rows.append(
                [
                    str(index),
                    free[index],
                    " ".join(f"{k}={v}" for k, v in vector.items()),
                    holding,
                ]
            )
        failed = reports is not None and not all(rep.passed for rep in reports)
        return CommandOutput(
            payload=payload,
            columns=["vector", "free", "components", "equations holding"],
            rows=rows,
            message=f"kernel at {source}: dimension {len(basis)}",
            exit_code=EXIT_FAILED if failed else EXIT_OK,
            title=f"{source}: n={n} r={point.r} kernel dimension {len(basis)}",
        )

from metric_invariants.commands.base import EXIT_FAILED, EXIT_OK, Command, CommandOutput, schema
from metric_invariants.config import RunConfig
from metric_invariants.verification import run_all


class VerifyCommand(Command):
    name = "verify"
    description = "Run every acceptance oracle; exit 0 exactly when all of them pass."
    input_schema = schema([])

    def run_impl(self, config: RunConfig) -> CommandOutput:
        results = run_all(config.seed, workers=config.workers)
        # Timings go to the log only, so that output is reproducible
        checks = [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in results]
        failed = [c.name for c in results if not c.passed]
        return CommandOutput(
            payload={"checks": checks, "passed": not failed},
            columns=["check", "verdict", "detail"],
            rows=[[c.name, "PASS" if c.passed else "FAIL", c.detail] for c in results],
            message=f"verify: {len(results) - len(failed)}/{len(results)} checks pass",
            exit_code=EXIT_FAILED if failed else EXIT_OK,
            title=f"verification, seed {config.seed}",
        )

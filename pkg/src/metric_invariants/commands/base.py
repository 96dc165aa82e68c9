import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Sequence

import jsonschema
from typing_extensions import final

from metric_invariants.config import RunConfig

logger = logging.getLogger(__name__)

CommandInputSchema = dict[str, Any]

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


@dataclass
class CommandOutput:
    """Output from a command implementation.

    Attributes:
        payload: JSON-serializable result; written under "result" for --format json.
        columns: Header of the human/CSV table.
        rows: Table rows, already rendered as strings.
        message: One-line summary of what the command did, for logging.
        exit_code: 0 on success, 1 when a certificate or oracle failed.
        title: Optional table title.
    """

    payload: dict[str, Any]
    columns: list[str]
    rows: list[list[str]]
    message: str
    exit_code: int = EXIT_OK
    title: str = ""


class Command(ABC):
    """One CLI subcommand.

    Each subcommand validates the resolved run configuration against its
    input_schema before doing any work.
    """

    name: str
    description: str
    input_schema: CommandInputSchema

    # Subclasses override run_impl(), not run().
    @final
    def run(self, config: RunConfig) -> CommandOutput:
        """Validate the config and run the command.

        Raises:
            jsonschema.ValidationError: If the config lacks what the command needs.
        """
        command_input = config.model_dump(mode="json", exclude_none=True)
        self._validate_command_input(command_input)
        logger.info(self.get_command_start_message(command_input))
        result = self.run_impl(config)
        logger.info(result.message)
        return result

    def get_command_start_message(self, command_input: dict[str, Any]) -> str:
        shown = {k: v for k, v in command_input.items() if k != "subcommand"}
        return f"Running '{self.name}' with {shown}"

    @abstractmethod
    def run_impl(self, config: RunConfig) -> CommandOutput:
        """Subclasses should implement this.

        Returns:
            A CommandOutput with the payload, table rows and exit code.
        """
        raise NotImplementedError()

    def _validate_command_input(self, command_input: dict[str, Any]):
        jsonschema.validate(instance=command_input, schema=self.input_schema)


def schema(required: list[str], any_of: Sequence[Sequence[str]] = ()) -> CommandInputSchema:
    """Input schema over the RunConfig fields; extra fields are allowed."""
    result: CommandInputSchema = {
        "type": "object",
        "properties": {
            "n": {"type": "integer", "minimum": 1},
            "r": {"type": "integer", "minimum": 0},
            "nmax": {"type": "integer", "minimum": 1},
            "rmax": {"type": "integer", "minimum": 0},
            "trials": {"type": "integer", "minimum": 1},
            "signature": {
                "type": "array",
                "items": {"type": "integer", "minimum": 0},
                "minItems": 2,
                "maxItems": 2,
            },
            "point": {"type": "string"},
            "curvature": {"type": "string"},
        },
        "required": required,
    }
    if any_of:
        result["anyOf"] = [{"required": list(names)} for names in any_of]
    return result

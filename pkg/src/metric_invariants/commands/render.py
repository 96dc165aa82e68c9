import csv
import io
from fractions import Fraction
from typing import Any

from rich.console import Console
from rich.table import Table

from metric_invariants.commands.base import CommandOutput
from metric_invariants.config import RunConfig
from metric_invariants.utils.constants import CONSOLE_WIDTH
from metric_invariants.utils.serialization import dump_json, fraction_to_json


def approx(value: Any) -> str:
    """Exact value with a decimal approximation for human tables."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{fraction_to_json(value)} ≈ {float(value):.6g}"


def render_json(output: CommandOutput, config: RunConfig) -> str:
    return dump_json({"config": config.model_dump(mode="json"), "result": output.payload}) + "\n"


def render_csv(output: CommandOutput) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(output.columns)
    writer.writerows(output.rows)
    return buffer.getvalue()


def render_table(output: CommandOutput) -> str:
    # Fixed width and no colour so output is identical across terminals
    buffer = io.StringIO()
    console = Console(file=buffer, width=CONSOLE_WIDTH, color_system=None, force_terminal=False)
    table = Table(title=output.title or None)
    for column in output.columns:
        table.add_column(column)
    for row in output.rows:
        table.add_row(*row)
    console.print(table)
    return buffer.getvalue()


def render(output: CommandOutput, config: RunConfig) -> str:
    if config.format == "json":
        return render_json(output, config)
    if config.format == "csv":
        return render_csv(output)
    return render_table(output)

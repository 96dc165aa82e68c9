from metric_invariants.commands.base import Command
from metric_invariants.commands.count_command import CountCommand
from metric_invariants.commands.dims_command import DimsCommand
from metric_invariants.commands.geom_command import GeomCommand
from metric_invariants.commands.kernel_command import KernelCommand
from metric_invariants.commands.rank_command import RankCommand
from metric_invariants.commands.table_command import TableCommand
from metric_invariants.commands.verify_command import VerifyCommand


def get_commands() -> list[Command]:
    """
    Retrieves every CLI subcommand, in the order shown by --help.

    Returns:
        list[Command]: One instance per subcommand.
    """
    return [
        DimsCommand(),
        CountCommand(),
        RankCommand(),
        KernelCommand(),
        TableCommand(),
        VerifyCommand(),
        GeomCommand(),
    ]


def get_command(name: str) -> Command:
    for command in get_commands():
        if command.name == name:
            return command
    raise KeyError(f"unknown command {name!r}")

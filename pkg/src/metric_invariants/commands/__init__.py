from metric_invariants.commands.base import Command, CommandOutput
from metric_invariants.commands.command_manager import get_command, get_commands
from metric_invariants.commands.render import render

__all__ = [
    "Command",
    "CommandOutput",
    "get_command",
    "get_commands",
    "render",
]

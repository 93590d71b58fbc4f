"""Instance files, verification commands and the check suite."""

from .commands import FAIL, PASS, REFUTED, SKIP, COMMANDS, Record, Report, UsageError, run_command, verify_suite
from .instance import Instance, InstanceError, parse_instance
from .main import build_parser, main

from .main import (
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_RUNTIME,
    EXIT_SUITE,
    build_parser,
    cmd_check,
    cmd_optimize,
    cmd_solve,
    cmd_sweep,
    main,
    run,
)

__all__ = [
    "EXIT_CONFIG",
    "EXIT_OK",
    "EXIT_RUNTIME",
    "EXIT_SUITE",
    "build_parser",
    "cmd_check",
    "cmd_optimize",
    "cmd_solve",
    "cmd_sweep",
    "main",
    "run",
]

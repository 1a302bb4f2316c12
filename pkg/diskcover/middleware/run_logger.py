import time
from typing import Callable


class CommandLoggingMiddleware:
    def __init__(self, app: Callable[..., int], logger):
        self.app = app
        self.logger = logger

    def __call__(self, args, state) -> int:
        command = getattr(args, "command", None)
        self.logger.info("command_start", command=command)
        started = time.perf_counter()
        code = self.app(args, state)
        self.logger.info(
            "command_end",
            command=command,
            exit_code=code,
            elapsed_ms=round((time.perf_counter() - started) * 1000.0, 3),
        )
        return code

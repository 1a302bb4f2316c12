import argparse
import os
import sys
from types import SimpleNamespace
from typing import Callable, Dict, List, Optional, Type

if __package__ is None or __package__ == "":
    sys.path.append(os.path.dirname(os.path.dirname(__file__)))

from diskcover.middleware.error_handler import register_error_handlers
from diskcover.middleware.run_logger import CommandLoggingMiddleware
from diskcover.resources import bench, gen, render, run
from diskcover.services.solver_service import SolverService
from diskcover.utils.logger import init_logger
from diskcover.utils.settings import get_settings


class CommandApp:
    """argparse front end with exception handlers and middleware around each command."""

    def __init__(self, prog: str, description: str):
        self.parser = argparse.ArgumentParser(prog=prog, description=description)
        self.subparsers = self.parser.add_subparsers(dest="command", required=True)
        self.state = SimpleNamespace()
        self._handlers: Dict[Type[BaseException], Callable[[BaseException], int]] = {}
        self._middleware: List[tuple] = []

    def include_resource(self, module) -> None:
        module.register(self.subparsers)

    def exception_handler(self, exc_type: Type[BaseException]):
        def decorator(func: Callable[[BaseException], int]):
            self._handlers[exc_type] = func
            return func

        return decorator

    def add_middleware(self, middleware_cls, **kwargs) -> None:
        self._middleware.append((middleware_cls, kwargs))

    def _handle(self, exc: BaseException) -> int:
        for klass in type(exc).__mro__:
            if klass in self._handlers:
                return self._handlers[klass](exc)
        raise exc

    def _guarded(self, args, state) -> int:
        try:
            return int(args.handler(args, state) or 0)
        except Exception as exc:
            return self._handle(exc)

    def __call__(self, argv: Optional[List[str]] = None) -> int:
        args = self.parser.parse_args(argv)
        call = self._guarded
        for middleware_cls, kwargs in self._middleware:
            call = middleware_cls(call, **kwargs)
        return call(args, self.state)


def create_app() -> CommandApp:
    settings = get_settings()
    logger = init_logger(settings)

    app = CommandApp(prog="diskcover", description="Minimum-cost disk covering: algorithms, oracles and experiments")
    app.state.settings = settings
    app.state.logger = logger
    app.state.solver = SolverService(logger, settings)

    app.add_middleware(CommandLoggingMiddleware, logger=logger)
    register_error_handlers(app, logger)

    app.include_resource(gen)
    app.include_resource(run)
    app.include_resource(bench)
    app.include_resource(render)
    return app


def main(argv: Optional[List[str]] = None) -> int:
    return create_app()(argv)


if __name__ == "__main__":
    sys.exit(main())

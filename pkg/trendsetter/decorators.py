from argparse import ArgumentParser
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Tuple, TypeVar

F = TypeVar('F', bound=Callable)


@dataclass
class Subcommand:
    name: str
    help: str
    handler: Callable
    arguments: List[Tuple[Tuple[str, ...], Dict[str, Any]]] = field(default_factory=list)

    def add_to(self, parser: ArgumentParser) -> None:
        for flags, kwargs in self.arguments:
            parser.add_argument(*flags, **kwargs)


#: Registered subcommands by name, in registration order.
registry: Dict[str, Subcommand] = {}


def _wrap(func: F) -> Subcommand:
    arguments = list(reversed(getattr(func, '__cli_arguments__', [])))
    return Subcommand(name='', help='', handler=func, arguments=arguments)


def subcommand(name: str, help: str) -> Callable[[F], F]:
    """Register a handler as ``trendsetter <name>``.

    A flag whose ``dest`` is a dotted path such as ``influence.alpha`` overrides that config value.
    """
    def register(func: F) -> F:
        command = _wrap(func)
        command.name, command.help = name, help
        registry[name] = command
        return func
    return register


def argument(*flags: str, **kwargs) -> Callable[[F], F]:
    def add(func: F) -> F:
        func.__dict__.setdefault('__cli_arguments__', []).append((flags, kwargs))
        return func
    return add

import json
import logging
import sys
from argparse import ArgumentParser, Namespace
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd
import yaml
from pydantic import ValidationError

from trendsetter import __version__
from trendsetter.config import get_logging_config, service_config
from trendsetter.config.pipeline import load_pipeline_config
from trendsetter.decorators import registry
from trendsetter.exceptions import DataError, TrendsetterError
from . import commands  # noqa: F401  (registers the subcommands)
from .models import RunManifest

_log = logging.getLogger(__name__)

#: Errors raised while reading input files; reported as data errors.
_INPUT_ERRORS = (ValidationError, yaml.YAMLError, FileNotFoundError, json.JSONDecodeError, pd.errors.ParserError,
                 pd.errors.EmptyDataError)


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog='trendsetter', description='Discover influence among style trajectories and '
                                                            'forecast with it.')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('--config', type=Path, help='Pipeline config (YAML or JSON)')
    parser.add_argument('--jobs', type=int, default=None, help='Worker threads for parallel steps')
    parser.add_argument('--seed', type=int, default=None, help='Seed for every random step')
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true')
    verbosity.add_argument('-q', '--quiet', action='store_true')
    subparsers = parser.add_subparsers(dest='command', metavar='command', required=True)
    for name, command in registry.items():
        sub = subparsers.add_parser(name, help=command.help, description=command.help)
        command.add_to(sub)
    return parser


def config_overrides(args: Namespace) -> Dict[str, Any]:
    """Nested config overrides from flags with dotted destinations, plus the global seed."""
    overrides: Dict[str, Any] = {}
    for dest, value in vars(args).items():
        if '.' not in dest or value is None:
            continue
        section, key = dest.split('.', 1)
        overrides.setdefault(section, {})[key] = value
    if args.seed is not None:
        overrides.setdefault('styles', {})['seed'] = args.seed
        overrides.setdefault('forecast', {})['seed'] = args.seed
    return overrides


def _set_verbosity(args: Namespace) -> None:
    if args.verbose:
        logging.getLogger('trendsetter').setLevel(logging.DEBUG)
    elif args.quiet:
        logging.getLogger('trendsetter').setLevel(logging.WARNING)


def run(args: Namespace) -> int:
    started = datetime.now()
    config_path = args.config or service_config.config_file
    if config_path is not None:
        config_path = service_config.resolve(config_path)
    config = load_pipeline_config(config_path, config_overrides(args))
    jobs = args.jobs or service_config.jobs
    result = registry[args.command].handler(args, config, jobs)
    directory = result.manifest_directory()
    if directory is not None:
        manifest = RunManifest(command=args.command, config=str(config_path) if config_path else None,
                               inputs={k: str(v) for k, v in result.inputs.items()},
                               outputs=[str(p) for p in result.outputs], seed=args.seed, started=started,
                               finished=datetime.now())
        manifest.write(directory)
    _log.info(f'{args.command} finished; wrote {len(result.outputs)} files.')
    return 0


def _report(e: Exception, exit_code: int) -> int:
    print(f'error={e.__class__.__name__} message={e}', file=sys.stderr)
    _log.debug('Error details', exc_info=e)
    return exit_code


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    get_logging_config()
    _set_verbosity(args)
    try:
        return run(args)
    except TrendsetterError as e:
        return _report(e, e.exit_code)
    except _INPUT_ERRORS as e:
        return _report(e, DataError.exit_code)
    except OSError as e:
        return _report(e, DataError.exit_code)


if __name__ == '__main__':
    sys.exit(main())

from .app import build_parser, main
from .models import CommandResult, RunManifest

__all__ = ['CommandResult', 'RunManifest', 'build_parser', 'main']

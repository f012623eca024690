import json
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel

from trendsetter import __version__


@dataclass
class CommandResult:
    """Files a subcommand read and wrote."""
    inputs: Dict[str, Path] = field(default_factory=dict)
    outputs: List[Path] = field(default_factory=list)
    #: Directory the run manifest goes to; defaults to where the first output lives.
    manifest_dir: Optional[Path] = None

    def manifest_directory(self) -> Optional[Path]:
        if self.manifest_dir is not None:
            return self.manifest_dir
        if not self.outputs:
            return None
        first = self.outputs[0]
        return first if first.is_dir() else first.parent


class RunManifest(BaseModel):
    """Record of one subcommand run, written beside its outputs."""
    command: str
    config: Optional[str]
    inputs: Dict[str, str]
    outputs: List[str]
    seed: Optional[int]
    started: datetime
    finished: datetime
    version: str = __version__

    class Config:
        extra = 'forbid'

    def write(self, directory: Path) -> Path:
        path = directory / f'{self.command}.manifest.json'
        path.write_text(json.dumps(json.loads(self.json()), indent=1) + '\n')
        return path

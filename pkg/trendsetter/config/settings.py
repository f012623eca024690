import logging.config
import os
from pathlib import Path
from typing import Optional

from pydantic import BaseSettings, Field, FilePath, validator

_DEFAULT_LOG_FORMAT = '%(asctime)-15s %(levelname)-6s %(message)s'

_log = logging.getLogger(__name__)


class ServiceConfig(BaseSettings):
    """Process-wide settings taken from the environment."""

    #: Relative input/output paths on the command line are resolved against this directory.
    data_dir: Path = Field(Path('.'), env='trendsetter_data_dir')
    config_file: Optional[FilePath] = Field(None, env='trendsetter_config_file')
    log_config: Path = Field(Path('config/logging.cfg'), env='trendsetter_log_config')
    jobs: int = Field(1, ge=1, env='trendsetter_jobs')

    @validator('data_dir')
    def expand_home(cls, v: Path) -> Path:
        return v.expanduser()

    class Config:
        env_prefix = 'trendsetter_'
        env_file = os.environ.get('ENV_FILE', '.env')
        extra = 'forbid'

    def resolve(self, path: Path) -> Path:
        path = path.expanduser()
        return path if path.is_absolute() else self.data_dir / path


def get_logging_config(path: Optional[Path] = None) -> None:
    path = path or service_config.log_config
    if path.is_file():
        logging.config.fileConfig(path, disable_existing_loggers=False)
        _log.debug(f'Loaded logging config from {path}.')
    else:
        logging.basicConfig(level=logging.INFO, format=_DEFAULT_LOG_FORMAT)
        _log.debug(f'No logging config at {path}; using defaults.')


service_config = ServiceConfig()

from datetime import datetime
from typing import Literal

import pytz
from pydantic import conint, validator

from trendsetter.config.models import ModuleConfig


class IngestConfig(ModuleConfig):
    """Config for turning events into trajectories"""
    #: Week 0 starts here; timestamps earlier than this are rejected.
    epoch: datetime = datetime(2013, 1, 7)
    timezone: str = 'UTC'
    resolution: Literal['week'] = 'week'
    validation_weeks: conint(ge=1) = 4  # type: ignore[valid-type]
    test_weeks: conint(ge=1) = 26  # type: ignore[valid-type]
    season: conint(ge=1) = 52  # type: ignore[valid-type]

    @validator('timezone')
    def known_timezone(cls, v: str) -> str:
        try:
            pytz.timezone(v.strip())
        except pytz.UnknownTimeZoneError as e:
            raise ValueError(f'timezone {v} is not a tz database name') from e
        return v.strip()

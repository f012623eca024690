from typing import Literal

from pydantic import conint

from trendsetter.config.models import ModuleConfig


class AnalysisConfig(ModuleConfig):
    """Config for rankings, graphs and influence dynamics"""
    #: Sliding-window length and step for influence dynamics, in buckets.
    window: conint(ge=2) = 78  # type: ignore[valid-type]
    stride: conint(ge=1) = 13  # type: ignore[valid-type]
    threshold: Literal['above_mean', 'raw'] = 'above_mean'
    #: Score compared against external metadata.
    score: Literal['exerted', 'received', 'net'] = 'exerted'

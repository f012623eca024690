from .config import PlantedEdge, SynthConfig
from .generator import generate, ground_truth, rescale, simulate
from .scoring import RecoveryScore, score_recovery

__all__ = [
    'PlantedEdge',
    'RecoveryScore',
    'SynthConfig',
    'generate',
    'ground_truth',
    'rescale',
    'score_recovery',
    'simulate',
]

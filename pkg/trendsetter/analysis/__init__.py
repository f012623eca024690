from .config import AnalysisConfig
from .correlation import correlate_metadata, spearman, spearman_scores
from .dynamics import influence_dynamics
from .graph import export_graph, parse_dot
from .io import read_groups, read_metadata, read_ranking, write_dynamics, write_ranking
from .models import DegenerateCorrelationError, InfluenceDynamics, InfluenceRanking, MissingMetadataError
from .ranking import aggregate_ranking, rank_entities

__all__ = [
    'AnalysisConfig',
    'DegenerateCorrelationError',
    'InfluenceDynamics',
    'InfluenceRanking',
    'MissingMetadataError',
    'aggregate_ranking',
    'correlate_metadata',
    'export_graph',
    'influence_dynamics',
    'parse_dot',
    'rank_entities',
    'read_groups',
    'read_metadata',
    'read_ranking',
    'spearman',
    'spearman_scores',
    'write_dynamics',
    'write_ranking',
]

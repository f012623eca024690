import logging
from typing import List, Optional, Tuple

from .config import InfluenceConfig
from .granger import scan_with_config
from ..core.models import GLOBAL_UNIT, GrangerFailure, InfluenceEdge, InfluenceTensor, StyleId
from ..exceptions import DataError, TrendsetterError
from ..ingest.models import TrajectorySet
from ..ingest.trajectories import global_trend
from ..parallel import ordered_map

_log = logging.getLogger(__name__)

AXES = ('unit', 'style')


def build_influence_tensor(ts: TrajectorySet, axis: str = 'unit', config: Optional[InfluenceConfig] = None,
                           jobs: int = 1) -> InfluenceTensor:
    """Granger-test every ordered pair of entities within every context.

    With ``axis='unit'`` the entities are units and the contexts styles; ``axis='style'`` swaps the roles. Only
    data before the test region is used. Tests that fail are recorded on the tensor instead of aborting the build.
    """
    config = config or InfluenceConfig()
    if axis not in AXES:
        raise DataError(f'Unknown influence axis "{axis}"; expected one of {", ".join(AXES)}.')
    if ts.split is None:
        _log.debug('No split applied; testing on the full series.')
    view = ts if axis == 'unit' else ts.swapped()
    entities, contexts = view.units, view.styles
    history = view.values[:, :, :ts.history_end]
    skeleton = InfluenceTensor.empty(axis, entities, entities, contexts)
    triples = list(skeleton.iter_pairs())

    def run(triple: Tuple[int, int, int]):
        i, j, k = triple
        src, dst, context = entities[i], entities[j], contexts[k]
        try:
            result = scan_with_config(history[k, j], history[k, i], config, n_tests=len(triples))
        except TrendsetterError as e:
            return GrangerFailure(src=src, dst=dst, context=context, reason=str(e))
        return result.edge(src, dst, context)

    outcomes = ordered_map(run, triples, jobs)
    edges = [o for o in outcomes if isinstance(o, InfluenceEdge)]
    failures = [o for o in outcomes if isinstance(o, GrangerFailure)]
    for failure in failures:
        _log.warning(f'Granger test {failure.src} -> {failure.dst} ({failure.context}) failed: {failure.reason}')
    _log.info(f'Built {axis} influence tensor: {len(edges)} edges from {len(triples)} tests.')
    return InfluenceTensor.from_edges(axis, entities, entities, contexts, edges, failures)


def unit_to_global(ts: TrajectorySet, style: StyleId, config: Optional[InfluenceConfig] = None,
                   n_tests: int = 1) -> List[InfluenceEdge]:
    """Edges from each unit's trajectory of ``style`` to that style's global trend."""
    config = config or InfluenceConfig()
    if len(ts.units) < 2:
        raise DataError('Influence on the global trend needs at least two units.')
    end = ts.history_end
    trend = global_trend(ts, style).values[:end]
    block = ts.style_block(style)
    edges = []
    for j, unit in enumerate(ts.units):
        result = scan_with_config(trend, block[j, :end], config, n_tests=n_tests)
        edge = result.edge(unit, GLOBAL_UNIT, style)
        if edge is not None:
            edges.append(edge)
    _log.debug(f'Style {style}: {len(edges)} units influence the global trend.')
    return edges


def build_global_tensor(ts: TrajectorySet, config: Optional[InfluenceConfig] = None,
                        jobs: int = 1) -> InfluenceTensor:
    """Influence of every unit on every style's global trend, as a units x [global] x styles tensor."""
    config = config or InfluenceConfig()
    if GLOBAL_UNIT in ts.units:
        raise DataError(f'Unit id "{GLOBAL_UNIT}" is reserved for the global trend.')
    n_tests = len(ts.units) * len(ts.styles)
    per_style = ordered_map(lambda style: unit_to_global(ts, style, config, n_tests), ts.styles, jobs)
    edges = [edge for style_edges in per_style for edge in style_edges]
    _log.info(f'Built global influence tensor: {len(edges)} edges from {n_tests} tests.')
    return InfluenceTensor.from_edges('global', ts.units, (GLOBAL_UNIT,), ts.styles, edges)

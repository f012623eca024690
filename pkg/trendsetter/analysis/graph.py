import logging
import re
from typing import List, Tuple

import numpy as np

from ..core.models import InfluenceTensor
from ..exceptions import DataError

_log = logging.getLogger(__name__)

THRESHOLDS = ('above_mean', 'raw')

_ARC = re.compile(r'^\s*"((?:[^"\\]|\\.)*)"\s*->\s*"((?:[^"\\]|\\.)*)"\s*\[weight=([^,\]]+)')


def _quote(name: str) -> str:
    return '"' + name.replace('\\', '\\\\').replace('"', '\\"') + '"'


def _unquote(text: str) -> str:
    return re.sub(r'\\(.)', r'\1', text)


def _weight(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def graph_arcs(tensor: InfluenceTensor, threshold: str = 'above_mean',
               weight: str = 'lag') -> List[Tuple[str, str, float]]:
    """(source, target, weight) arcs with weights summed over contexts, sorted by source then target.

    ``above_mean`` keeps only pairs whose weight exceeds the mean over all connected pairs.
    """
    if threshold not in THRESHOLDS:
        raise DataError(f'Unknown threshold "{threshold}"; expected one of {", ".join(THRESHOLDS)}.')
    pair_weights = tensor.weights(weight).sum(axis=2)
    connected = pair_weights > 0
    keep = connected
    if threshold == 'above_mean' and connected.any():
        keep = pair_weights > pair_weights[connected].mean()
    arcs = [(tensor.sources[i], tensor.targets[j], float(pair_weights[i, j])) for i, j in zip(*np.nonzero(keep))]
    return sorted(arcs)


def export_graph(tensor: InfluenceTensor, threshold: str = 'above_mean', weight: str = 'lag') -> str:
    """DOT digraph of the influence relations; only entities on a retained arc appear as nodes."""
    arcs = graph_arcs(tensor, threshold, weight)
    nodes = sorted({a for a, _, _ in arcs} | {b for _, b, _ in arcs})
    lines = ['digraph influence {']
    lines += [f'  {_quote(node)};' for node in nodes]
    lines += [f'  {_quote(a)} -> {_quote(b)} [weight={_weight(w)}, label="{_weight(w)}"];' for a, b, w in arcs]
    lines.append('}')
    _log.debug(f'Graph has {len(nodes)} nodes and {len(arcs)} arcs ({threshold}).')
    return '\n'.join(lines) + '\n'


def parse_dot(text: str) -> List[Tuple[str, str, float]]:
    """Arcs of a graph written by :func:`export_graph`."""
    if not text.lstrip().startswith('digraph'):
        raise DataError('Not a DOT digraph.')
    arcs = []
    for line in text.splitlines():
        match = _ARC.match(line)
        if match:
            arcs.append((_unquote(match.group(1)), _unquote(match.group(2)), float(match.group(3))))
    return arcs

import pytest

from trendsetter.core.models import InfluenceEdge, InfluenceTensor


def tensor_from(edges, entities=('A', 'B', 'C'), contexts=('S0',)):
    return InfluenceTensor.from_edges('unit', entities, entities, contexts, [
        InfluenceEdge(src=src, dst=dst, context=ctx, lag=lag, p_value=0.01, delta_mse=0.1 * lag)
        for src, dst, ctx, lag in edges
    ])


@pytest.fixture
def make_tensor():
    return tensor_from

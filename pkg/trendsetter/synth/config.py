from typing import List, Literal, Optional

from pydantic import BaseModel, Field, confloat, conint, root_validator

from trendsetter.config.models import ModuleConfig
from trendsetter.core.models import MAX_LAG


class PlantedEdge(BaseModel):
    """``src`` drives ``dst`` within ``context`` at ``lag`` with weight ``coefficient``.

    ``axis`` defaults to the generator's axis, so one set can hold unit and style influence side by side.
    A nonzero ``start`` switches the edge on at that step of the returned series; otherwise it acts throughout.
    """
    src: str
    dst: str
    context: str
    lag: conint(ge=1, le=MAX_LAG)  # type: ignore[valid-type]
    coefficient: float
    axis: Optional[Literal['unit', 'style']] = None
    start: conint(ge=0) = 0  # type: ignore[valid-type]

    class Config:
        extra = 'forbid'

    @root_validator(skip_on_failure=True)
    def no_self_edge(cls, values):
        if values['src'] == values['dst']:
            raise ValueError(f'Planted edge {values["src"]} -> {values["dst"]} is a self loop.')
        return values


class SynthConfig(ModuleConfig):
    """Synthetic trajectories: AR(1) base, planted cross-lag terms, optional season, style trend and noise."""
    units: conint(ge=1) = 4  # type: ignore[valid-type]
    styles: conint(ge=1) = 2  # type: ignore[valid-type]
    length: conint(ge=2) = Field(200, alias='T')  # type: ignore[valid-type]
    #: Which ids the planted edges connect by default; contexts are the other kind.
    axis: Literal['unit', 'style'] = 'unit'
    planted_edges: List[PlantedEdge] = []
    noise_std: confloat(ge=0) = 0.05  # type: ignore[valid-type]
    ar_coefficient: confloat(gt=-1, lt=1) = 0.3  # type: ignore[valid-type]
    seasonal_amplitude: confloat(ge=0) = 0.0  # type: ignore[valid-type]
    seasonal_period: conint(ge=2) = 52  # type: ignore[valid-type]
    #: Innovation scale of the AR(1) trend every unit of a style shares.
    trend_std: confloat(ge=0) = 0.0  # type: ignore[valid-type]
    trend_coefficient: confloat(gt=-1, lt=1) = 0.95  # type: ignore[valid-type]
    seed: int = 0
    #: Steps simulated and dropped before the returned series start.
    burn_in: conint(ge=0) = 100  # type: ignore[valid-type]
    initial_std: confloat(ge=0) = 1.0  # type: ignore[valid-type]
    #: Split applied to the generated set; test 0 leaves the set without boundaries.
    validation: conint(ge=0) = 4  # type: ignore[valid-type]
    test: conint(ge=0) = 26  # type: ignore[valid-type]

    class Config:
        allow_population_by_field_name = True

    @property
    def unit_ids(self) -> List[str]:
        return [f'U{i}' for i in range(self.units)]

    @property
    def style_ids(self) -> List[str]:
        return [f'S{i}' for i in range(self.styles)]

    def edge_axis(self, edge: PlantedEdge) -> str:
        return edge.axis or self.axis

    def edges_on(self, axis: str) -> List[PlantedEdge]:
        return [edge for edge in self.planted_edges if self.edge_axis(edge) == axis]

    @root_validator(skip_on_failure=True)
    def edges_known(cls, values):
        units = [f'U{i}' for i in range(values['units'])]
        styles = [f'S{i}' for i in range(values['styles'])]
        if values['seasonal_amplitude'] and values['length'] <= values['seasonal_period']:
            raise ValueError(f'Seasonal data needs more than {values["seasonal_period"]} steps.')
        seen = set()
        for edge in values['planted_edges']:
            axis = edge.axis or values['axis']
            entities, contexts = (units, styles) if axis == 'unit' else (styles, units)
            if edge.src not in entities or edge.dst not in entities or edge.context not in contexts:
                raise ValueError(f'Planted {axis} edge {edge.src} -> {edge.dst} ({edge.context}) uses unknown ids.')
            if edge.start >= values['length']:
                raise ValueError(f'Planted edge {edge.src} -> {edge.dst} starts after the series ends.')
            key = (axis, edge.src, edge.dst, edge.context)
            if key in seen:
                raise ValueError(f'Planted edge {edge.src} -> {edge.dst} ({edge.context}) is given twice.')
            seen.add(key)
        if values['test'] and values['length'] < values['validation'] + values['test'] + 1:
            raise ValueError(f'{values["length"]} steps cannot hold the validation and test regions.')
        return values

from typing import Literal

from pydantic import confloat, conint

from trendsetter.config.models import ModuleConfig


class StylesConfig(ModuleConfig):
    """Config for style discovery"""
    kind: Literal['gmm', 'nmf'] = 'gmm'
    #: 50 suits city photo attributes, 20 suits product catalogs.
    k: conint(ge=1) = 50  # type: ignore[valid-type]
    variance_floor: confloat(gt=0) = 1e-6  # type: ignore[valid-type]
    tol: confloat(gt=0) = 1e-6  # type: ignore[valid-type]
    max_iter: conint(ge=1) = 500  # type: ignore[valid-type]
    #: Rows drawn for k-means++ seeding of the mixture.
    kmeans_subsample: conint(ge=1) = 2000  # type: ignore[valid-type]
    seed: int = 0

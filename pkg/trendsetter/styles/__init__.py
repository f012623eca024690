from .config import StylesConfig
from .gmm import fit_gmm
from .io import load_style_model, save_style_model
from .models import StyleFitError, StyleModel
from .nmf import fit_nmf


def style_posterior(model: StyleModel, attrs):
    """Posterior probability of each style for one attribute vector."""
    return model.posterior(attrs)


def fit_styles(data, config: StylesConfig) -> StyleModel:
    fit = fit_gmm if config.kind == 'gmm' else fit_nmf
    return fit(data, config.k, seed=config.seed, config=config)


__all__ = [
    'StyleFitError',
    'StyleModel',
    'StylesConfig',
    'fit_gmm',
    'fit_nmf',
    'fit_styles',
    'load_style_model',
    'save_style_model',
    'style_posterior',
]

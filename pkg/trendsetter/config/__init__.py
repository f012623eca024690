from .models import ModuleConfig
from .settings import ServiceConfig, get_logging_config, service_config

__all__ = [
    'ModuleConfig', 'ServiceConfig', 'get_logging_config', 'service_config'
]

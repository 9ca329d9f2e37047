# src/engine/minima_backends/__init__.py
from typing import Optional

from src.config.config_loader import LatticeSettings
from .base_backend import BaseMinimaBackend, integer_rank
from .exact_backend import ExactMinimaBackend
from .reduced_backend import ReducedMinimaBackend

# 后端名 -> 后端类
BACKEND_REGISTRY = {
    ExactMinimaBackend.name: ExactMinimaBackend,
    ReducedMinimaBackend.name: ReducedMinimaBackend,
}


def get_backend(name: str, settings: Optional[LatticeSettings] = None) -> BaseMinimaBackend:
    """按名称获取后端实例"""
    backend_class = BACKEND_REGISTRY.get(name)
    if backend_class is None:
        raise ValueError(f"未知的逐次极小后端: {name}")
    return backend_class(settings)

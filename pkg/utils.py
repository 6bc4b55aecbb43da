import logging
from functools import wraps
from typing import Callable, Any

import numpy as np

from errors import IncompatibleSuite

logger = logging.getLogger(__name__)


def require_kind(kind: str) -> Callable:
    """
    Décorateur vérifiant le type de la fixture passée en premier argument.

    Args:
        kind: 'finite' ou 'matrix'

    Returns:
        Callable: Le décorateur
    """
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(fixture, *args, **kwargs) -> Any:
            if fixture.kind != kind:
                logger.warning(f"Fixture {fixture.name} de type {fixture.kind}, {func.__name__} attend {kind}")
                raise IncompatibleSuite(
                    f"{func.__name__} requiert une fixture '{kind}', reçu '{fixture.kind}'",
                    witness=fixture.name,
                )
            return func(fixture, *args, **kwargs)
        return wrapper
    return decorator


def residual(a: np.ndarray, b: np.ndarray) -> float:
    """Norme de Frobenius de a - b."""
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)))


def to_list(array: np.ndarray) -> list:
    """Conversion en listes imbriquées pour les documents JSON."""
    return np.asarray(array).tolist()

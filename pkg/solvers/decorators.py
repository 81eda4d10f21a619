from functools import wraps
from typing import Callable, TypeVar
import logging

from errors import SolverError

T = TypeVar('T')


def with_fallback(fallback: str):
    """Decorator sending a failed decompose() on to another registered solver

    Args:
        fallback (str): registry name of the solver to use on SolverError

    Returns:
        Callable: the decorated method

    Example:
        @with_fallback('schur')
        def decompose(self, matrix):
            ...
    """
    def decorator(func: Callable[..., T]) -> Callable[..., T]:
        @wraps(func)
        def wrapper(self, matrix, *args, **kwargs) -> T:
            try:
                return func(self, matrix, *args, **kwargs)
            except SolverError as e:
                from .factory import create_solver  # factory imports the strategies

                logging.warning(f"{self.name} failed ({e}); falling back to {fallback}")
                return create_solver(fallback).decompose(matrix, *args, **kwargs)
        return wrapper
    return decorator

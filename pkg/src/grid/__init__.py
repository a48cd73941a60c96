# Grid and nodal state package

from .grid_state import (
    GridSpec,
    StateVector,
    ModelParams,
    TruncationLevel,
    NormKind,
    MIN_NODES,
    wrap,
    norm,
)

__all__ = [
    'GridSpec',
    'StateVector',
    'ModelParams',
    'TruncationLevel',
    'NormKind',
    'MIN_NODES',
    'wrap',
    'norm',
]

# Time integration package

from .tableau import EmbeddedTableau, DORMAND_PRINCE
from .step_control import PIController, stability_limited_step
from .stiff_integrator import IntegrationConfig, IntegrationStatus, Trajectory, integrate

__all__ = [
    'EmbeddedTableau',
    'DORMAND_PRINCE',
    'PIController',
    'stability_limited_step',
    'IntegrationConfig',
    'IntegrationStatus',
    'Trajectory',
    'integrate',
]

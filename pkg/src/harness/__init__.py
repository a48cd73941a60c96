# Experiment orchestration package

from .initial_conditions import InitialConditionRegistry, initial_condition_registry
from .experiment import ErrorReport, SchemeErrors, run_comparison, oracle_self_convergence
from .suites import SuiteKind, SuiteResult, CheckResult, run_suite

__all__ = [
    'InitialConditionRegistry',
    'initial_condition_registry',
    'ErrorReport',
    'SchemeErrors',
    'run_comparison',
    'oracle_self_convergence',
    'SuiteKind',
    'SuiteResult',
    'CheckResult',
    'run_suite',
]

from .checker import verify_cca_instance
from .completion import complete_instance
from .conditions import check_side_conditions
from .constants import CallKind
from .guards import abstract_term, elses, guard_handles, peel_elses, required_guards
from .parser import read_cca_structure
from .types import CcaStructure, GuardList, OracleCall

__all__ = [
    'CallKind',
    'CcaStructure',
    'GuardList',
    'OracleCall',
    'abstract_term',
    'check_side_conditions',
    'complete_instance',
    'elses',
    'guard_handles',
    'peel_elses',
    'read_cca_structure',
    'required_guards',
    'verify_cca_instance',
]

"""West's stack-sorting map and its consecutive-pattern-avoiding variants."""

from .dynamics import (
    BoundViolation,
    OrbitResult,
    Report,
    d_stat,
    delete_one,
    is_periodic,
    max_sort_time,
    orbit,
    period,
    time_to_avoider,
)
from .machine import MachineSpec, SortTrace, parse_spec, run, sc
from .patterns import Mode, Pattern, avoids_all, contains, enumerate_av, occurrences
from .perm_core import (
    CapacityError,
    InvalidInput,
    Permutation,
    complement,
    enumerate_sn,
    inverse,
    parse_perm,
    rank,
    relative_index,
    reverse,
    standardize,
    unrank,
)

__version__ = "0.1.0"

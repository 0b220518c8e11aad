"""Truncated h-fold sumsets of integer bases and finite-stability experiments."""

from .analysis import (
    CountingProfile,
    ObstructionReport,
    cross_check_obstruction,
    density_profile,
    geometric_grid,
    modular_obstruction,
)
from .basis import (
    Augmented,
    BasisSpec,
    Explicit,
    Polygonal,
    enumerate_basis,
    parse_spec,
    polygonal_value,
    to_bitmap,
)
from .engine import IntervalBitmap, complement_members, counting, hfold, sumset
from .errors import InvalidParameterError
from .order import (
    OrderReport,
    StabilityReport,
    empirical_order,
    find_representation,
    oracle_hfold_membership,
    stability_experiment,
    verify_legendre,
)

__version__ = "0.1.0"

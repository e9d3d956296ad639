"""Exact-arithmetic censuses of modular hyperbolas.

Point enumeration for x*y = a (mod n), line-incidence censuses (ordinary
lines, collinearity structure) and distinct-distance counting, all in exact
integer arithmetic, with verification sweeps that compare every closed form
against brute force.
"""

from .distances import (
    DistanceProfile,
    GapReport,
    ImageDecomposition,
    LatticeIntersection,
    RootShiftData,
    branch_eval,
    classify_image,
    distance_profile,
    distance_value,
    divisor_pairs,
    gap_experiment,
    image_count_formula,
    intersection_direct,
    intersection_via_lattice,
    prime_distance_count,
    prime_power_image_report,
    sqrt_shift_data,
)
from .geometry import (
    IncidenceCensus,
    LineKey,
    OrdinaryLowerBound,
    census,
    check_special_line,
    count_on_line,
    line_through,
    no_ordinary_moduli,
    ordinary_lower_bound,
    verify_collinearity_bounds,
    verify_line_classes,
    verify_ordinary_bound,
)
from .hyperbola import (
    ClassPartition,
    HyperbolaSpec,
    PointSet,
    enumerate_points,
    partition_classes,
    reflect_diagonal,
)
from .ntcore import (
    CongruenceSolutions,
    DiscriminantCase,
    PrimePower,
    euler_phi,
    hensel_lift_sqrt,
    is_prime,
    legendre,
    mod_inverse,
    padic_valuation,
    primes_upto,
    solve_quadratic_congruence,
    sqrt_mod_prime,
)
from .suites import SUITES, VerificationReport

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

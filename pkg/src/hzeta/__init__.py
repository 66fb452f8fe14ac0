"""Verification of horizontal factorizations of Hasse-Weil zeta functions.

Both sides of each identity are computed from finite-field enumeration, orbit
counting and Euler-product arithmetic, and compared exactly where the identity
is formal and within stated tolerances where it is numeric.
"""

from .arith import Factorization, euler_phi, factorize, moebius, multiplicative_order, unit_group
from .certificate import Certificate, Check
from .characters import DirichletCharacter, characters, dirichlet_L, verify_eq7_local
from .elliptic import (
    Curve,
    FrobeniusData,
    GroupStructure,
    TorsionOrbitSet,
    count_points_enum,
    frobenius_data,
    group_structure,
    psi_E,
    torsion_orbits,
    verify_eq4_local,
    verify_eq13_local,
)
from .errors import (
    DomainError,
    HZetaError,
    InconsistencyError,
    InternalInconsistency,
    PoleError,
    ResourceLimitError,
)
from .gm import (
    GM_PROFILE,
    HorizontalComponent,
    SystemProfile,
    cyclotomic_poly,
    phi_n_degrees_mod_p,
    psi_gm,
    verify_eq8_global,
    verify_eq25_local,
    verify_gm_local_partition,
)
from .localzeta import (
    EulerProduct,
    LocalFactor,
    PowerSeries,
    closed_point_counts,
    cyclotomic_local_factor,
    evaluate,
    expand,
    from_point_counts,
)
from .strata import (
    DiagonalOrbitDecomposition,
    OpenSubschemeSpec,
    OrderTuple,
    count_points,
    diagonal_orbits,
    enumerate_Jn,
    frobenius_orbit_degree,
    verify_eq30_local,
    verify_stratification,
)

__version__ = "0.1.0"

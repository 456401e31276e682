"""Quasi-Monte Carlo point sets, discrepancy and quadrature on triangles."""

__version__ = "0.1.0"

from .discrepancy import (
    DiscrepancyReport,
    parallelogram_discrepancy,
    parallelogram_discrepancy_grid,
    pc_discrepancy,
    signed_discrepancy,
    subtriangle_discrepancy,
)
from .errors import (
    BadDigit,
    DegenerateTriangle,
    DepthTooSmall,
    EmptySampleSet,
    MissingExactIntegral,
    NotAdmissible,
    OutOfRange,
    TriQMCError,
    WrongDomain,
)
from .generators import Generator
from .geometry import (
    Barycentric,
    Point,
    SampleSet,
    Triangle,
    affine_map,
    apply,
    classify,
    corner_box_fraction,
    from_barycentric,
    make_triangle,
    reference_triangle,
    to_barycentric,
)
from .lattice import (
    LatticeConfig,
    QuadraticIrrationalTangent,
    check_admissible,
    default_angle,
    kronecker_lattice,
    kronecker_on_triangle,
)
from .quadrature import (
    ConvergenceRow,
    Integrand,
    builtin_integrands,
    convergence_study,
    face_weight,
    get_integrand,
    integrate,
    weighted_mean,
)
from .vdc import ScrambleSeed, base4_digits, child_triangle, descend, scrambled_vdc, vdc_point, vdc_sequence

"""Exact p-adic cohomology of catalog varieties via graded Raynaud-ring modules."""

from .api import (
    CohomologyCell, TableRequest, format_table, hom_unit_derived, modpn_cohomology,
    run_table, zp_cohomology,
)
from .complexes import (
    ColumnComplex, RComplex, cohomology_Hj, column, cone_mult, shift, tate_twist_cx,
)
from .errors import (
    InvariantViolation, NotNilpotentError, OracleRefused, PrecisionError, RaynaudError,
    ShapeError, UnsupportedVariety,
)
from .hom_solver import (
    FinAbPGroup, LinearizedMap, brute_force_fiber, brute_force_oracle, fiber_cohomology,
    geometric_inverse, ker_coker_1_minus_F, linearize, smith_normal_form,
)
from .raynaud import (
    DSumModel, GradedRModule, SemilinearMap, TruncRaynaudElem, augmentation, is_diagonal,
    make_unit, ring_mul, twist_T, twist_T_inv, validate_module,
)
from .varieties import VarietyDesc, euler_characteristic, hodge_witt_table, model_rgamma, parse_variety
from .witt import FieldDesc, WittVec, make_field, universal_witt_polys, witt_add, witt_mul

__version__ = "0.1.0"

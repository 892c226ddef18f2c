"""Exact computations for congruence coverings of arithmetic hyperbolic surfaces."""

from .congruence import (
    enumerate_gamma_n,
    in_gamma_n,
    psl2_index,
    quat_enumerate,
    quat_in_congruence,
    scan_trace_gap,
    sl2_order_mod,
    systole_witness,
    trace_witness,
)
from .exact import ExtMat2, IntMat2, QuadExt, mat_det, mat_mul, mat_trace
from .geometry import (
    BoundReport,
    UpperHalfPoint,
    area_s_n,
    hyp_distance,
    mobius_apply,
    pgt_statistics,
    theorem_5_4_report,
    translation_length,
)
from .modular import (
    BinaryQuadraticForm,
    ElementKind,
    classify,
    is_primitive,
    matrix_to_form,
    mu0,
    reduce_cycle,
)
from .quaternion import Quaternion, QuaternionAlgebra, embed, hilbert_symbol, is_division, reduced_norm, reduced_trace

__version__ = "0.1.0"

"""Exact sparse interpolation of multivariate integer polynomials from modular blackboxes."""

from .arith import (
    PowerSums,
    TransposedVandermonde,
    centered,
    forward_dft,
    hensel_lift_root,
    inverse_dft,
    multi_remainder,
    power_sums,
    product_tree,
    solve_transposed_vandermonde,
)
from .blackbox import (
    SLP,
    Blackbox,
    DifferenceBlackbox,
    EvalStats,
    FunctionBlackbox,
    SLPBlackbox,
    SLPFormatError,
    SparseBlackbox,
    eval_slp,
    format_slp,
    parse_slp,
    sparse_as_blackbox,
    sparse_to_slp,
)
from .codes import (
    CodeParams,
    LevelSchedule,
    bulk_decode_level,
    encode,
    hierarchical_decode,
    make_level_schedule,
    recover_k_indices,
    sample_code_params,
)
from .divisors import divisors, divisors_naive
from .estimator import SparseInterpolator
from .heuristics import (
    bt_decode_bulk,
    bt_encode,
    make_simple_params,
    mystery_decode,
    phase_crossing,
    phase_experiment,
    simple_encode,
    zeta_supports,
)
from .interpolator import (
    RunParams,
    derive_params,
    interpolate,
    t_approximation,
    verify,
)
from .primes import (
    PrimeGenerationError,
    PrimeTriple,
    generate_prime_triple,
    is_probable_prime,
    random_distinct_primes,
)
from .projector import extract_code_table, project_dense, project_sparse
from .sparse import CyclicPoly, PolyFormatError, SparsePoly, parse_poly, project_direct, serialize, sigma

__version__ = "0.1.0"

"""Exact high-order derivative expansions of bilipschitz maps, their
inverses and products, with rearrangement-invariant norm machinery and a
numeric verification harness.

The tensor kernels run on a compiled Cython backend when available and fall
back to pure NumPy; see :mod:`bilipjet.backend` (env var ``BILIPJET_KERNELS``).
"""

from .backend import BACKEND
from .errors import (BilipjetError, ConfigError, DimensionMismatchError,
                     DomainError, InvalidOrderError, InvalidTermError,
                     InversionError, MissingJetError, NormDivergenceError,
                     ProfileError, SerializationError, SpaceSpecError,
                     SpecParseError)
from .symbolic import (DerivativeExpansion, FactorSymbol, SubTerm, TensorTerm,
                       canonicalize, differentiate_expansion,
                       expand_composition, expand_inverse, expand_product,
                       format_expansion, format_term, from_json,
                       holder_exponents, to_json)
from .multilinear import (JetContext, MultilinearMap, compose,
                          composition_context, evaluate_expansion,
                          evaluate_term, identity_map, inverse_context,
                          inverse_jets, operator_norm, product_context,
                          symmetrize, tensor_product)
from .spaces import (ExpM1Young, PowerYoung, SpaceSpec, StepProfile,
                     TabulatedYoung, YoungFunction, boyd_lower_index,
                     check_hlp, check_holder, check_young_condition,
                     convexified, corefine, decreasing_rearrangement, dilate,
                     dilation_operator_norm, format_space, lebesgue, linf,
                     lorentz, norm, orlicz, parse_space, partial_integral,
                     read_profile_csv, similar_norm, write_profile_csv,
                     young_from_name)
from .maps import (ScalarField, TestMap, default_fd_step, fd_jet_map,
                   finite_difference_jet, gallery, invert_pointwise,
                   sample_derivative_profile, scalar_gallery)
from .verify import (CheckReport, VerifyConfig, check_seed,
                     holder_decomposed_bound, load_baselines, run_suite,
                     summarize, verify_boyd, verify_composition_identity,
                     verify_gn_inequality, verify_hlp_transfer,
                     verify_holder_sampled, verify_inverse_bound_m2,
                     verify_inverse_bound_m3, verify_inverse_identity,
                     verify_product_identity, verify_young)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "__version__",
    # errors
    "BilipjetError", "ConfigError", "DimensionMismatchError", "DomainError",
    "InvalidOrderError", "InvalidTermError", "InversionError",
    "MissingJetError", "NormDivergenceError", "ProfileError",
    "SerializationError", "SpaceSpecError", "SpecParseError",
    # symbolic expansions
    "DerivativeExpansion", "FactorSymbol", "SubTerm", "TensorTerm",
    "canonicalize", "differentiate_expansion", "expand_composition",
    "expand_inverse", "expand_product", "format_expansion", "format_term",
    "from_json", "holder_exponents", "to_json",
    # multilinear numerics
    "JetContext", "MultilinearMap", "compose", "composition_context",
    "evaluate_expansion", "evaluate_term", "identity_map", "inverse_context",
    "inverse_jets", "operator_norm", "product_context", "symmetrize",
    "tensor_product",
    # function spaces
    "ExpM1Young", "PowerYoung", "SpaceSpec", "StepProfile", "TabulatedYoung",
    "YoungFunction", "boyd_lower_index", "check_hlp", "check_holder",
    "check_young_condition", "convexified", "corefine",
    "decreasing_rearrangement", "dilate", "dilation_operator_norm",
    "format_space", "lebesgue", "linf", "lorentz", "norm", "orlicz",
    "parse_space", "partial_integral", "read_profile_csv", "similar_norm",
    "write_profile_csv", "young_from_name",
    # maps and sampling
    "ScalarField", "TestMap", "default_fd_step", "fd_jet_map",
    "finite_difference_jet", "gallery", "invert_pointwise",
    "sample_derivative_profile", "scalar_gallery",
    # verification
    "CheckReport", "VerifyConfig", "check_seed", "holder_decomposed_bound",
    "load_baselines", "run_suite", "summarize", "verify_boyd",
    "verify_composition_identity", "verify_gn_inequality",
    "verify_hlp_transfer", "verify_holder_sampled", "verify_inverse_bound_m2",
    "verify_inverse_bound_m3", "verify_inverse_identity",
    "verify_product_identity", "verify_young",
]

"""Restricted partition numbers p(n, k) modulo m: engines, periods and parity analysis."""

__version__ = "0.1.0"

from .engines import (  # noqa: E402
    ModSequence,
    ParityBitStream,
    PartitionParams,
    ResourceLimitError,
    exact_values,
    mod_values,
    parity_stream,
    self_check,
)
from .polyring import ModPoly, QuotientElement, denominator_poly, divrem, pow_q_mod  # noqa: E402
from .period import (  # noqa: E402
    FactoredInteger,
    PeriodCertificate,
    minimal_period,
    residual_poly,
    structural_bound,
    verify_certificate,
)
from .analysis import (  # noqa: E402
    check_density_implication,
    check_density_lower_bound,
    joint_densities,
    max_even_run,
    odd_density,
)

__all__ = [
    "ModSequence", "ParityBitStream", "PartitionParams", "ResourceLimitError",
    "exact_values", "mod_values", "parity_stream", "self_check",
    "ModPoly", "QuotientElement", "denominator_poly", "divrem", "pow_q_mod",
    "FactoredInteger", "PeriodCertificate", "minimal_period", "residual_poly",
    "structural_bound", "verify_certificate",
    "check_density_implication", "check_density_lower_bound", "joint_densities",
    "max_even_run", "odd_density",
]

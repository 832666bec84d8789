"""Bimodal skewed distribution families on normal, Student-t and generalized-t bases.

The construction combines two-piece skewing with a quadratic tilt, giving
densities that can be simultaneously skewed and bimodal.  The package covers
density/CDF/moment evaluation (`families`), exact samplers including the
scale-mixture hierarchies (`sampling`), Bayesian fitting by adaptive
Metropolis-within-Gibbs with exact precision augmentation (`inference`), an
independent numeric validation suite (`oracle`), and a CLI (`bimodalskew`).
"""

from .bases import ExpPowerBase, GenTBase, NormalBase, StudentTBase
from .errors import CapabilityError, DomainError, ExistenceError, NumericError
from .families import (
    DistributionSpec,
    MomentReport,
    bsgt,
    bsn,
    bsstd,
    cdf,
    cdf_values,
    find_modes,
    full_moment,
    log_pdf,
    moment_exists,
    moment_report,
    pdf,
    quantile,
    skew_moment,
    two_piece_second_moment,
)
from .inference import (
    Chain,
    McmcConfig,
    MetropolisWithinGibbs,
    PriorConfig,
    effective_sample_size,
    posterior_summary,
    run_mcmc,
)
from .oracle import OracleResult, integrate, mc_moment, run_checks
from .sampling import (
    AugmentedDraw,
    RngStream,
    sample,
    sample_bsgt,
    sample_bsn,
    sample_bsstd,
    sample_gen_gamma,
    sample_quadratic_tilt,
    sample_skewed_uniform_normal,
    sample_two_piece,
)

__version__ = "0.1.0"

__all__ = [
    "AugmentedDraw",
    "CapabilityError",
    "Chain",
    "DistributionSpec",
    "DomainError",
    "ExistenceError",
    "ExpPowerBase",
    "GenTBase",
    "McmcConfig",
    "MetropolisWithinGibbs",
    "MomentReport",
    "NormalBase",
    "NumericError",
    "OracleResult",
    "PriorConfig",
    "RngStream",
    "StudentTBase",
    "bsgt",
    "bsn",
    "bsstd",
    "cdf",
    "cdf_values",
    "effective_sample_size",
    "find_modes",
    "full_moment",
    "integrate",
    "log_pdf",
    "mc_moment",
    "moment_exists",
    "moment_report",
    "pdf",
    "posterior_summary",
    "quantile",
    "run_checks",
    "run_mcmc",
    "sample",
    "sample_bsgt",
    "sample_bsn",
    "sample_bsstd",
    "sample_gen_gamma",
    "sample_quadratic_tilt",
    "sample_skewed_uniform_normal",
    "sample_two_piece",
    "skew_moment",
    "two_piece_second_moment",
    "__version__",
]

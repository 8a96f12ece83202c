"""freezelab: Cauchy-Bessel ensembles of root systems A, B and D and their
freezing limits, with exact densities, samplers and verification tools."""
from .ensembles import MultiplicitySpec, log_density, make_law
from .estimators import CauchyBesselEnsemble, FreezingLimit, FreezingRescaler
from .exceptions import DomainError, FreezelabError, InvalidInputError, NumericError
from .freezing import limit_density, limit_law, peak_vector, rescale, sigma_inv
from .orthopoly import hermite_zeros, laguerre_zeros
from .sampling import RngStream, sample_cauchy_bessel, sample_limit

__version__ = "0.1.0"

__all__ = [
    "CauchyBesselEnsemble",
    "DomainError",
    "FreezelabError",
    "FreezingLimit",
    "FreezingRescaler",
    "InvalidInputError",
    "MultiplicitySpec",
    "NumericError",
    "RngStream",
    "hermite_zeros",
    "laguerre_zeros",
    "limit_density",
    "limit_law",
    "log_density",
    "make_law",
    "peak_vector",
    "rescale",
    "sample_cauchy_bessel",
    "sample_limit",
    "sigma_inv",
]

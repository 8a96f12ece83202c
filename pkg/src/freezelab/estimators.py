"""scikit-learn style wrappers around the density, sampling and rescaling code.

The laws here have no free parameters to learn, so ``fit`` only validates
hyperparameters and the input shape and precomputes constants.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .ensembles import SQRT2, MultiplicitySpec, in_chamber, log_density, make_law
from .exceptions import InvalidInputError
from .freezing import limit_density, limit_law, peak_vector, rescale
from .sampling import RngStream, sample_bessel_ensemble, sample_cauchy_bessel, sample_limit

__all__ = ["CauchyBesselEnsemble", "FreezingRescaler", "FreezingLimit"]


def _spec(system, n, k, k1, k2):
    if system == "B":
        return MultiplicitySpec.type_b(n, k1, k2)
    return MultiplicitySpec(system, n, k=k)


def _check_dim(est, X):
    X = check_array(X, dtype=float)
    if X.shape[1] != est.n_features_in_:
        raise InvalidInputError(f"expected {est.n_features_in_} features, got {X.shape[1]}")
    return X


class CauchyBesselEnsemble(BaseEstimator):
    """Exact density and sampler of a Bessel or Cauchy-Bessel ensemble.

    ``score_samples`` returns log-densities, ``-inf`` off the open chamber.
    """

    def __init__(self, system="A", n=2, k=1.0, k1=0.0, k2=0.0, flavor="cauchy", t=SQRT2, random_state=0):
        self.system = system
        self.n = n
        self.k = k
        self.k1 = k1
        self.k2 = k2
        self.flavor = flavor
        self.t = t
        self.random_state = random_state

    def fit(self, X=None, y=None):
        self.spec_ = _spec(str(self.system).upper(), self.n, self.k, self.k1, self.k2)
        self.law_ = make_law(self.spec_, self.flavor, self.t)
        self.n_features_in_ = self.spec_.n
        if X is not None:
            _check_dim(self, X)
        return self

    def score_samples(self, X):
        check_is_fitted(self, "law_")
        X = _check_dim(self, X)
        out = np.full(len(X), -np.inf)
        inside = in_chamber(self.spec_.system, X)
        if np.any(inside):
            out[inside] = log_density(self.law_, X[inside])
        return out

    def score(self, X, y=None):
        return float(np.mean(self.score_samples(X)))

    def sample(self, n_samples=1):
        check_is_fitted(self, "law_")
        rng = RngStream(int(self.random_state)).generator()
        draw = sample_cauchy_bessel if self.flavor == "cauchy" else sample_bessel_ensemble
        return draw(self.spec_, self.t, rng, int(n_samples))


class FreezingRescaler(TransformerMixin, BaseEstimator):
    """The anisotropic map shrinking the peak direction by ``1/sqrt(scale)``.

    ``scale`` is ``k`` for type A and D and ``beta`` for type B.
    """

    def __init__(self, system="A", n=2, scale=1.0, nu=None):
        self.system = system
        self.n = n
        self.scale = scale
        self.nu = nu

    def fit(self, X=None, y=None):
        system = str(self.system).upper()
        self.peak_ = peak_vector(system, self.n, self.nu if system == "B" else None)
        if not float(self.scale) >= 1.0:
            raise InvalidInputError("scale must be >= 1")
        self.n_features_in_ = self.peak_.n
        if X is not None:
            _check_dim(self, X)
        return self

    def transform(self, X):
        check_is_fitted(self, "peak_")
        return rescale(_check_dim(self, X), self.scale, self.peak_, "forward")

    def inverse_transform(self, X):
        check_is_fitted(self, "peak_")
        return rescale(_check_dim(self, X), self.scale, self.peak_, "inverse")


class FreezingLimit(BaseEstimator):
    """Half-space limit law of the rescaled Cauchy-Bessel ensembles."""

    def __init__(self, system="A", n=2, nu=None, random_state=0):
        self.system = system
        self.n = n
        self.nu = nu
        self.random_state = random_state

    def fit(self, X=None, y=None):
        self.law_ = limit_law(self.system, self.n, self.nu)
        self.n_features_in_ = self.law_.n
        if X is not None:
            _check_dim(self, X)
        return self

    def score_samples(self, X):
        check_is_fitted(self, "law_")
        X = _check_dim(self, X)
        out = np.full(len(X), -np.inf)
        inside = self.law_.in_support(X)
        if np.any(inside):
            out[inside] = limit_density(self.law_, X[inside], log=True)
        return out

    def score(self, X, y=None):
        return float(np.mean(self.score_samples(X)))

    def sample(self, n_samples=1):
        check_is_fitted(self, "law_")
        return sample_limit(self.law_, RngStream(int(self.random_state)).generator(), int(n_samples))

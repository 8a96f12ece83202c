import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from freezelab import CauchyBesselEnsemble, FreezingLimit, FreezingRescaler
from freezelab.ensembles import in_chamber
from freezelab.exceptions import InvalidInputError


def test_ensemble_params_roundtrip():
    est = CauchyBesselEnsemble(system="B", n=2, k1=1.0, k2=2.0)
    params = est.get_params()
    assert params["k2"] == 2.0 and params["flavor"] == "cauchy"
    c = clone(est).set_params(k2=3.0)
    assert c.k2 == 3.0 and est.k2 == 2.0


def test_ensemble_score_and_sample():
    est = CauchyBesselEnsemble(system="A", n=1, k=0.0).fit()
    scores = est.score_samples([[0.0], [1.0]])
    assert np.allclose(scores, [-math.log(math.pi), -math.log(2 * math.pi)])
    est2 = CauchyBesselEnsemble(system="A", n=2, k=1.0, random_state=3).fit()
    y = est2.sample(100)
    assert y.shape == (100, 2) and np.all(in_chamber("A", y))
    assert np.array_equal(y, est2.sample(100))
    assert est2.score_samples([[-1.0, 1.0]])[0] == -np.inf
    assert np.isfinite(est2.score(y))


def test_ensemble_not_fitted_and_bad_shape():
    with pytest.raises(NotFittedError):
        CauchyBesselEnsemble().score_samples([[1.0, 0.0]])
    est = CauchyBesselEnsemble(n=2).fit()
    with pytest.raises(InvalidInputError):
        est.score_samples([[1.0, 0.0, -1.0]])
    with pytest.raises(ValueError):
        est.score_samples([[np.nan, 0.0]])
    with pytest.raises(InvalidInputError):
        CauchyBesselEnsemble(system="A", n=2, k=-1.0).fit()


def test_rescaler_transform_roundtrip():
    r = FreezingRescaler(system="B", n=3, scale=50.0, nu=2.0).fit()
    x = np.random.default_rng(0).standard_normal((20, 3))
    assert np.allclose(r.inverse_transform(r.transform(x)), x, atol=1e-12)
    assert np.allclose(r.fit_transform(x), r.transform(x))
    with pytest.raises(InvalidInputError):
        FreezingRescaler(scale=0.5).fit()


def test_pipeline_composition():
    pipe = make_pipeline(FreezingRescaler(system="A", n=2, scale=200.0))
    y = CauchyBesselEnsemble(system="A", n=2, k=200.0).fit().sample(500)
    out = pipe.fit_transform(y)
    lim = FreezingLimit(system="A", n=2).fit()
    assert np.all(np.isfinite(lim.score_samples(out)))


def test_limit_estimator():
    lim = FreezingLimit(system="B-one-sided", n=2, random_state=1).fit()
    y = lim.sample(300)
    assert np.all(y[:, -1] >= 0)
    assert lim.score_samples([[1.0, -0.5]])[0] == -np.inf
    assert np.isfinite(lim.score(y[y[:, -1] > 0]))

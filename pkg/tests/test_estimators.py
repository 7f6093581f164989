from fractions import Fraction

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from periodic_mixing.continuous import block_diagonal
from periodic_mixing.estimators import ContinuousCompressor, PeriodicCompressor, check_period_array
from periodic_mixing.exceptions import DimensionError, NotLossless


def test_params_and_clone():
    est = PeriodicCompressor(exact=True, horizon=30)
    assert est.get_params() == {"exact": True, "horizon": 30, "mixer": None}
    est.set_params(horizon=None)
    assert clone(est).get_params()["horizon"] is None


def test_round_trip_switch(rng):
    X = rng.normal(size=(5, 3))
    est = PeriodicCompressor().fit(X)
    assert est.lossless_ and est.horizon_ == 15
    y = est.transform(X)
    assert y.shape == (15,)
    assert np.allclose(est.inverse_transform(y), X)


def test_exact_round_trip_general_mixer():
    # m = 3, p = 2: m >= n * gcd(m, p) holds
    X = [[Fraction(1, 2), 3], [2, Fraction(-1, 7)]]
    est = PeriodicCompressor(mixer=[[1, 0], [0, 1], [1, 1]], exact=True).fit(X)
    assert est.lossless_
    out = est.inverse_transform(est.fit_transform(X))
    assert out.tolist() == X
    assert not PeriodicCompressor(mixer=[[1, 0], [0, 1], [1, 1]], exact=True).fit(X + [[0, 1]]).lossless_


def test_lossy_configuration_raises(rng):
    X = rng.normal(size=(4, 2))
    est = PeriodicCompressor().fit(X)
    assert not est.lossless_
    with pytest.raises(NotLossless):
        est.inverse_transform(est.transform(X))


def test_validation(rng):
    with pytest.raises(NotFittedError):
        PeriodicCompressor().transform(np.zeros((2, 2)))
    est = PeriodicCompressor().fit(np.zeros((3, 2)))
    with pytest.raises(DimensionError):
        est.transform(np.zeros((3, 4)))
    with pytest.raises(ValueError):
        check_period_array([[np.nan]])
    assert check_period_array([1.0, 2.0]).shape == (2, 1)


def test_continuous_compressor(rng):
    A = block_diagonal([1.0, 1.0, 0.0], 7)
    est = ContinuousCompressor(A=A, thetas=(2, 3, 4), n_samples=20, dt=0.3).fit()
    assert est.certificate_.passed and est.n_features_in_ == 7
    X = rng.normal(size=(4, 7))
    Y = est.transform(X)
    assert Y.shape == (4, 20)
    assert np.allclose(est.inverse_transform(Y), X, atol=1e-8)
    assert clone(est).get_params()["n_samples"] == 20

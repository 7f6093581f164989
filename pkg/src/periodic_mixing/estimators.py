"""scikit-learn style wrappers around the functional core.

``fit`` takes one period of the signal (rows are time steps, columns are
channels), ``transform`` produces the compressed stream and
``inverse_transform`` recovers the period.  The wrappers add no numerics of
their own.
"""
import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .continuous import (
    continuous_stream,
    default_sample_times,
    design_compressor,
    reconstruct_continuous,
    spanning_certificate,
)
from .exceptions import DimensionError
from .linalg import as_exact
from .number_theory import lcm
from .reconstruction import plan_reconstruction, reconstruct
from .signals import CompressedStream, MixingSignal, PeriodicVectorSignal, compress, switch_mixer


def check_period_array(X, exact=False, n_features=None):
    """Validate a (period, channels) array; keeps Fractions in exact mode."""
    if exact:
        X = as_exact(X)
    else:
        X = np.asarray(X, dtype=float)
        if not np.all(np.isfinite(X)):
            raise ValueError("input contains NaN or infinity")
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-d array, got shape {X.shape}")
    if n_features is not None and X.shape[1] != n_features:
        raise DimensionError(f"X has {X.shape[1]} channels, the estimator was fitted with {n_features}")
    return X


class PeriodicCompressor(TransformerMixin, BaseEstimator):
    """Compress a periodic vector signal into a scalar stream and invert it.

    Parameters
    ----------
    mixer : array-like of shape (m, n_channels) or MixingSignal, default=None
        One period of the mixing signal. ``None`` selects the periodic switch.
    exact : bool, default=False
        Use exact rational arithmetic end to end.
    horizon : int, default=None
        Stream length. ``None`` uses ``lcm(m, p)``, the shortest window that
        settles the losslessness verdict.
    """

    def __init__(self, mixer=None, exact=False, horizon=None):
        self.mixer = mixer
        self.exact = exact
        self.horizon = horizon

    def _mixer_for(self, n):
        kind = "exact-rational" if self.exact else "float"
        if self.mixer is None:
            return switch_mixer(n, exact=self.exact)
        if isinstance(self.mixer, MixingSignal):
            return MixingSignal(self.mixer.samples, value_kind=kind)
        return MixingSignal(self.mixer, value_kind=kind)

    def fit(self, X, y=None):
        X = check_period_array(X, self.exact)
        self.n_features_in_ = X.shape[1]
        self.period_ = X.shape[0]
        self.mixer_ = self._mixer_for(self.n_features_in_)
        if self.mixer_.n != self.n_features_in_:
            raise DimensionError(f"mixer dimension {self.mixer_.n} != {self.n_features_in_} channels")
        self.horizon_ = self.horizon or lcm(self.mixer_.m, self.period_)
        self.plan_ = plan_reconstruction(self.mixer_, self.period_, self.horizon_)
        return self

    @property
    def lossless_(self):
        check_is_fitted(self, "plan_")
        return self.plan_.feasible

    def transform(self, X):
        """Compressed stream of shape ``(horizon_,)``."""
        check_is_fitted(self, "plan_")
        X = check_period_array(X, self.exact, self.n_features_in_)
        kind = "exact-rational" if self.exact else "float"
        return compress(PeriodicVectorSignal(X, value_kind=kind), self.mixer_, self.horizon_).values.copy()

    def inverse_transform(self, y):
        """Recover one period, shape ``(period_, n_features_in_)``."""
        check_is_fitted(self, "plan_")
        y = np.asarray(y, dtype=object if self.exact else float).reshape(-1)
        plan = self.plan_ if len(y) == self.horizon_ else None
        x = reconstruct(CompressedStream(y), self.mixer_, self.period_, plan)
        return x.samples.copy()


class ContinuousCompressor(TransformerMixin, BaseEstimator):
    """Sampled compressor for ``x' = A x`` with skew-symmetric ``A``.

    ``transform`` maps initial states (rows) to sampled streams (rows of
    length ``n_samples``); ``inverse_transform`` maps them back.
    """

    def __init__(self, A=None, delta_base=1.0, thetas=None, n_samples=None, dt=None):
        self.A = A
        self.delta_base = delta_base
        self.thetas = thetas
        self.n_samples = n_samples
        self.dt = dt

    def fit(self, X=None, y=None):
        A = np.asarray(self.A, dtype=float)
        self.design_ = design_compressor(A, delta_base=self.delta_base, thetas=self.thetas)
        self.n_features_in_ = self.design_.n
        count = self.n_samples or 4 * self.design_.n
        self.sample_times_ = np.array(default_sample_times(self.design_, count, self.dt))
        self.certificate_ = spanning_certificate(self.design_, A, times=self.sample_times_)
        return self

    def transform(self, X):
        check_is_fitted(self, "design_")
        X = check_period_array(X, n_features=self.n_features_in_)
        return np.array([[v for _, v in continuous_stream(self.design_, self.A, x0, self.sample_times_)] for x0 in X])

    def inverse_transform(self, Y):
        check_is_fitted(self, "design_")
        Y = np.atleast_2d(np.asarray(Y, dtype=float))
        return np.array([reconstruct_continuous(list(zip(self.sample_times_, row)), self.design_, self.A).x0
                         for row in Y])

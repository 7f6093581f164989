"""Periodic vector signals, mixing signals and the inner-product compressor."""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import DimensionError
from .linalg import as_exact, is_exact


def _freeze(samples, exact):
    if exact:
        arr = as_exact(samples)
    else:
        arr = np.array(samples, dtype=float)
    if arr.ndim != 2:
        raise DimensionError(f"samples must be a 2-d array (period x dimension), got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError("period and dimension must be positive")
    arr.setflags(write=False)
    return arr


_KINDS = ("exact-rational", "float")


def _resolve_kind(samples, value_kind):
    if value_kind is None:
        return "exact-rational" if is_exact(np.asarray(samples)) else "float"
    if value_kind not in _KINDS:
        raise ValueError(f"value_kind must be one of {_KINDS}, got {value_kind!r}")
    return value_kind


class _Periodic:
    samples: np.ndarray

    @property
    def dimension(self) -> int:
        return self.samples.shape[1]

    @property
    def n(self) -> int:
        return self.samples.shape[1]

    @property
    def exact(self) -> bool:
        return self.samples.dtype == object

    def __call__(self, t):
        if t < 0:
            raise ValueError("signals are defined for t >= 0 only")
        return self.samples[t % self.samples.shape[0]]

    def window(self, horizon):
        """Stack of the samples at ``t = 0 .. horizon - 1``."""
        idx = np.arange(horizon) % self.samples.shape[0]
        return self.samples[idx]

    def __eq__(self, other):
        if type(self) is not type(other):
            return NotImplemented
        return self.samples.shape == other.samples.shape and bool(np.all(self.samples == other.samples))

    def __hash__(self):
        return hash((type(self).__name__, self.samples.shape, tuple(map(tuple, self.samples.tolist()))))


@dataclass(frozen=True, eq=False)
class PeriodicVectorSignal(_Periodic):
    """A ``p``-periodic sequence of vectors in ``R^n`` stored one period long.

    ``samples[k]`` is the value at time ``k``; evaluation at ``t`` returns
    ``samples[t mod p]``.  Passing ``value_kind="exact-rational"`` (or an object array of
    :class:`~fractions.Fraction`) selects exact rational arithmetic.
    """

    samples: np.ndarray
    value_kind: Optional[str] = None

    def __post_init__(self):
        kind = _resolve_kind(self.samples, self.value_kind)
        object.__setattr__(self, "samples", _freeze(self.samples, kind == "exact-rational"))
        object.__setattr__(self, "value_kind", kind)

    @property
    def period(self) -> int:
        return self.samples.shape[0]

    @property
    def p(self) -> int:
        return self.samples.shape[0]


@dataclass(frozen=True, eq=False)
class MixingSignal(_Periodic):
    """An ``m``-periodic sequence of mixing vectors ``c(0), ..., c(m-1)``."""

    samples: np.ndarray
    value_kind: Optional[str] = None

    def __post_init__(self):
        kind = _resolve_kind(self.samples, self.value_kind)
        object.__setattr__(self, "samples", _freeze(self.samples, kind == "exact-rational"))
        object.__setattr__(self, "value_kind", kind)

    @property
    def period(self) -> int:
        return self.samples.shape[0]

    @property
    def m(self) -> int:
        return self.samples.shape[0]


@dataclass(frozen=True)
class CompressedStream:
    """Scalar stream ``y(0), ..., y(horizon-1)`` plus provenance metadata."""

    values: np.ndarray
    n: Optional[int] = None
    m: Optional[int] = None
    p_hint: Optional[int] = None

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.dtype != object:
            vals = vals.astype(float)
        vals = vals.reshape(-1).copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.values.shape[0]

    def __getitem__(self, t):
        return self.values[t]

    @property
    def horizon(self) -> int:
        return self.values.shape[0]

    @property
    def exact(self) -> bool:
        return self.values.dtype == object


def compress(x: PeriodicVectorSignal, c: MixingSignal, horizon: int) -> CompressedStream:
    """Scalar stream ``y(t) = <c(t), x(t)>`` for ``t`` in ``[0, horizon)``.

    Each output depends on ``x(t)`` and ``c(t)`` only, so the map is causal.
    """
    if x.n != c.n:
        raise DimensionError(f"signal dimension {x.n} does not match mixer dimension {c.n}")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    xs = x.window(horizon)
    cs = c.window(horizon)
    if x.exact and c.exact:
        values = np.array([sum(a * b for a, b in zip(ci, xi)) for ci, xi in zip(cs, xs)], dtype=object)
    else:
        # mixed kinds degrade to floats
        values = np.einsum("ti,ti->t", cs.astype(float), xs.astype(float))
    return CompressedStream(values, n=x.n, m=c.m, p_hint=x.p)


def _basis_sequence(dim, indices, exact):
    samples = np.zeros((len(indices), dim), dtype=object if exact else float)
    if exact:
        samples[:] = 0
    for k, i in enumerate(indices):
        samples[k, i] = 1
    return MixingSignal(samples, value_kind="exact-rational" if exact else "float")


def switch_mixer(n: int, exact: bool = True) -> MixingSignal:
    """The ``n``-periodic switch ``e_1, e_2, ..., e_n, e_1, ...``."""
    if n < 1:
        raise DimensionError("switch mixer needs n >= 1")
    return _basis_sequence(n, range(n), exact)


def odd_index_mixer(N: int, exact: bool = True) -> MixingSignal:
    """``e_1, e_3, ..., e_{2N-1}`` in ``R^{2N}``, period ``N``.

    Models a round-robin medium over ``N`` two-dimensional sensors that each
    report their first coordinate.
    """
    if N < 1:
        raise DimensionError("odd-index mixer needs N >= 1")
    return _basis_sequence(2 * N, [2 * k for k in range(N)], exact)

"""Signals generated by discrete-time exosystems and read through a switch.

Covers permutation dynamics ``x_i(t+1) = x_{sigma(i)}(t)``, planar rotations,
general matrix-group dynamics ``x(t+1) = G x(t)`` and round-robin sensor
networks.  In every case the switch picks coordinate ``(t mod n) + 1`` of
``x(t)``, which is a known linear functional of the initial state; recovery
means collecting enough of those functionals to pin down ``x(0)``.
"""
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import linalg
from .exceptions import (
    InconsistentStream,
    InsufficientHorizon,
    NotLossless,
    PartialReconstruction,
    PreconditionError,
    UnsupportedSpec,
)
from .number_theory import lcm_all
from .signals import CompressedStream, PeriodicVectorSignal

TWO_PI = 2.0 * math.pi
ANGLE_TOL = 1e-9
MATRIX_TOL = 1e-9
RESIDUAL_TOL = 1e-9


# ---------------------------------------------------------------------------
# permutations


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str) -> List[List[int]]:
    """Parse cycle notation such as ``"(4 2 3 1)(5)"`` into 1-based cycles."""
    stripped = re.sub(r"\s+", "", _CYCLE_RE.sub("", text))
    if stripped:
        raise ValueError(f"unparseable cycle notation: {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(text):
        items = [int(tok) for tok in re.split(r"[\s,]+", body.strip()) if tok]
        if items:
            cycles.append(items)
    return cycles


@dataclass(frozen=True)
class PermutationSpec:
    """Permutation of ``{1..n}`` stored 0-based: ``sigma[i] = sigma(i+1) - 1``."""

    sigma: Tuple[int, ...]

    def __post_init__(self):
        sigma = tuple(int(v) for v in self.sigma)
        if sorted(sigma) != list(range(len(sigma))):
            raise PreconditionError(f"not a bijection on 0..{len(sigma) - 1}: {sigma}")
        object.__setattr__(self, "sigma", sigma)

    @classmethod
    def from_cycles(cls, text: str, n: Optional[int] = None) -> "PermutationSpec":
        cycles = parse_cycles(text)
        seen = [v for cyc in cycles for v in cyc]
        if len(seen) != len(set(seen)):
            raise PreconditionError(f"cycles are not disjoint: {text!r}")
        size = max(seen, default=0) if n is None else n
        if seen and (min(seen) < 1 or max(seen) > size):
            raise PreconditionError(f"cycle entries must lie in 1..{size}")
        sigma = list(range(size))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                sigma[a - 1] = b - 1
        return cls(tuple(sigma))

    @property
    def n(self) -> int:
        return len(self.sigma)

    @property
    def cycles(self) -> List[Tuple[int, ...]]:
        """Cycle decomposition, 1-based, fixed points included."""
        seen = set()
        out = []
        for start in range(self.n):
            if start in seen:
                continue
            cyc = []
            i = start
            while i not in seen:
                seen.add(i)
                cyc.append(i + 1)
                i = self.sigma[i]
            out.append(tuple(cyc))
        return out

    @property
    def cycle_lengths(self) -> List[int]:
        return [len(c) for c in self.cycles]

    @property
    def order(self) -> int:
        return lcm_all(self.cycle_lengths)

    def power(self, k: int) -> Tuple[int, ...]:
        """``sigma^k`` as a 0-based image tuple."""
        k %= self.order
        img = list(range(self.n))
        for _ in range(k):
            img = [self.sigma[i] for i in img]
        return tuple(img)

    def to_cycle_string(self) -> str:
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles)


@dataclass(frozen=True)
class PermutationVerdict:
    lossless: bool
    witnesses: Dict[int, Tuple[int, int, int]]
    missing: Tuple[int, ...]

    def __bool__(self):
        return self.lossless


def permutation_losslessness(spec: PermutationSpec) -> PermutationVerdict:
    """Decide whether the switch reveals every coordinate of ``x(0)``.

    At time ``t = i*n + j - 1`` the switch returns ``x_{sigma^t(j)}(0)``.
    Since ``sigma^order`` is the identity, ``i < order`` covers every case.
    ``witnesses`` maps each revealed channel ``k`` to the earliest
    ``(i, j, t)`` exposing it.
    """
    n = spec.n
    witnesses: Dict[int, Tuple[int, int, int]] = {}
    img = list(range(n))  # sigma^t
    for t in range(n * spec.order):
        j = t % n + 1
        k = img[j - 1] + 1
        if k not in witnesses:
            witnesses[k] = (t // n, j, t)
        img = [spec.sigma[v] for v in img]
    missing = tuple(k for k in range(1, n + 1) if k not in witnesses)
    return PermutationVerdict(not missing, dict(sorted(witnesses.items())), missing)


def cycle_resonance(spec: PermutationSpec) -> bool:
    """True when ``n`` is a multiple of every cycle length (the resonant case).

    Then the switch never reveals more than it does during the first ``n``
    steps.
    """
    return spec.n % spec.order == 0


def permutation_trajectory(spec: PermutationSpec, x0) -> PeriodicVectorSignal:
    """The orbit of ``x0``; it is ``order(sigma)``-periodic."""
    x0 = np.asarray(x0)
    if x0.shape != (spec.n,):
        raise PreconditionError(f"x0 must have length {spec.n}")
    rows = []
    img = list(range(spec.n))
    for _ in range(spec.order):
        rows.append([x0[i] for i in img])
        img = [spec.sigma[v] for v in img]
    return PeriodicVectorSignal(np.array(rows, dtype=x0.dtype))


@dataclass(frozen=True)
class PermutationReconstruction:
    x0: np.ndarray
    trajectory: PeriodicVectorSignal
    times: Dict[int, int]


def reconstruct_permutation(y: CompressedStream, spec: PermutationSpec) -> PermutationReconstruction:
    verdict = permutation_losslessness(spec)
    if not verdict.lossless:
        raise NotLossless(f"channels {list(verdict.missing)} never appear in y", verdict.missing)
    times = {k: w[2] for k, w in verdict.witnesses.items()}
    required = max(times.values()) + 1
    if len(y) < required:
        raise InsufficientHorizon(f"need at least {required} samples, got {len(y)}", required)
    x0 = np.empty(spec.n, dtype=y.values.dtype)
    for k, t in times.items():
        x0[k - 1] = y.values[t]
    return PermutationReconstruction(x0, permutation_trajectory(spec, x0), times)


# ---------------------------------------------------------------------------
# angles and planar rotations


@dataclass(frozen=True)
class RationalAngle:
    """The angle ``2*pi*turns`` with ``turns`` an exact rational."""

    turns: Fraction

    def __post_init__(self):
        object.__setattr__(self, "turns", Fraction(self.turns))

    @property
    def radians(self) -> float:
        return TWO_PI * float(self.turns)

    def __mul__(self, k):
        if isinstance(k, int):
            return RationalAngle(self.turns * k)
        return NotImplemented

    __rmul__ = __mul__

    def reduced(self) -> "RationalAngle":
        return RationalAngle(self.turns % 1)

    def __float__(self):
        return self.radians


Angle = Union[float, RationalAngle]


def _radians_times(alpha: Angle, t: int) -> float:
    """``alpha * t`` reduced into ``[0, 2*pi)``; exact reduction for rational angles."""
    if isinstance(alpha, RationalAngle):
        return TWO_PI * float((alpha.turns * t) % 1)
    return math.fmod(float(alpha) * t, TWO_PI)


def is_multiple_of_two_pi(alpha: Angle, k: int, tol: float = ANGLE_TOL) -> bool:
    """Whether ``k * alpha`` is a multiple of ``2*pi``.

    Exact for :class:`RationalAngle`; otherwise within ``tol`` radians.
    """
    if isinstance(alpha, RationalAngle):
        return (alpha.turns * k) % 1 == 0
    r = math.fmod(float(alpha) * k, TWO_PI)
    if r < 0:
        r += TWO_PI
    return r <= tol or TWO_PI - r <= tol


def rotation_matrix(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class RotationSpec:
    alpha: Angle

    def __post_init__(self):
        if isinstance(self.alpha, RationalAngle):
            ok = 0 < self.alpha.turns < 1
        else:
            ok = 0.0 < float(self.alpha) < TWO_PI
        if not ok:
            raise PreconditionError("rotation angle must lie strictly between 0 and 2*pi")

    @property
    def radians(self) -> float:
        return float(self.alpha)

    def power(self, t: int) -> np.ndarray:
        return rotation_matrix(_radians_times(self.alpha, t))


def rotation_resonance(alpha: Angle, search_bound: int = 100, tol: float = ANGLE_TOL) -> Optional[Tuple[int, int]]:
    """Search ``p, q <= search_bound`` with ``(2p+1)*alpha = 2q*alpha (mod 2*pi)``.

    ``p`` is the outer loop, ``q`` the inner one, both ascending.  ``None``
    means nothing was found within the bound, not that no pair exists.
    """
    for p in range(search_bound + 1):
        for q in range(search_bound + 1):
            if is_multiple_of_two_pi(alpha, 2 * p + 1 - 2 * q, tol):
                return p, q
    return None


def rotation_row(alpha: Angle, t: int) -> np.ndarray:
    """Row ``r`` with ``y(t) = r . x(0)`` under the two-channel switch."""
    return rotation_matrix(_radians_times(alpha, t))[t % 2]


def rotation_stream(spec: RotationSpec, x0, horizon: int) -> CompressedStream:
    x0 = np.asarray(x0, dtype=float)
    vals = [rotation_row(spec.alpha, t) @ x0 for t in range(horizon)]
    return CompressedStream(np.array(vals), n=2, m=2)


@dataclass(frozen=True)
class LinearRecovery:
    """Initial state recovered from a handful of stream samples.

    ``matrix`` is the stacked row system (one row per entry of ``times``)
    that was solved.
    """

    x0: np.ndarray
    times: Tuple[int, ...]
    matrix: np.ndarray = field(repr=False)
    residual: float = 0.0


def _greedy_rows(row_at, n, horizon, start=0):
    """Accumulate rows at ``start, start+1, ...`` keeping those that raise the rank."""
    times, rows = [], []
    for t in range(start, horizon):
        r = row_at(t)
        cand = np.array(rows + [r])
        if linalg.float_rank(cand) > len(rows):
            rows.append(r)
            times.append(t)
            if len(rows) == n:
                break
    return times, rows


def _solve_rows(times, rows, y):
    mat = np.array(rows, dtype=float)
    rhs = np.array([float(y.values[t]) for t in times])
    x0 = np.linalg.solve(mat, rhs)
    return LinearRecovery(x0, tuple(times), mat)


def reconstruct_rotation(y: CompressedStream, spec: RotationSpec, times: Optional[Sequence[int]] = None,
                         search_bound: int = 100) -> LinearRecovery:
    """Recover ``x(0)`` of a planar rotation read through the two-channel switch.

    Without explicit ``times`` the odd/even resonance pair ``(2q, 2p+1)`` is
    used when it fits in the stream; the solve matrix is then the rotation
    through ``2q*alpha``.  Otherwise rows are gathered greedily from ``t = 0``
    until they reach rank 2, which also succeeds for non-resonant angles such
    as ``pi``.
    """
    horizon = len(y)
    if times is None:
        hit = rotation_resonance(spec.alpha, search_bound)
        if hit is not None and max(2 * hit[0] + 1, 2 * hit[1]) < horizon:
            times = (2 * hit[1], 2 * hit[0] + 1)
    if times is not None:
        times = tuple(times)
        if max(times) >= horizon:
            raise InsufficientHorizon(f"time {max(times)} is beyond the stream", max(times) + 1)
        rows = [rotation_row(spec.alpha, t) for t in times]
        if linalg.float_rank(np.array(rows)) < 2:
            raise InsufficientHorizon(f"rows at times {times} do not span R^2")
        if len(times) != 2:
            mat = np.array(rows)
            x0, res = linalg.lstsq_solve(mat, np.array([float(y.values[t]) for t in times]))
            return LinearRecovery(x0, times, mat, res)
        return _solve_rows(times, rows, y)
    times, rows = _greedy_rows(lambda t: rotation_row(spec.alpha, t), 2, horizon)
    if len(rows) < 2:
        raise InsufficientHorizon("rows never reach rank 2 within the stream", None)
    return _solve_rows(times, rows, y)


def rotation_solver_times(alpha: Angle, horizon: int) -> Tuple[int, ...]:
    """Earliest times whose rows span ``R^2`` (fewer than two if they never do)."""
    return tuple(_greedy_rows(lambda t: rotation_row(alpha, t), 2, horizon)[0])


# ---------------------------------------------------------------------------
# matrix groups


GROUP_TAGS = ("rotation", "orthogonal", "special-linear", "permutation", "other")


@dataclass(frozen=True)
class GroupSystemSpec:
    G: np.ndarray
    group_tag: str = "other"
    search_horizon: Optional[int] = None
    tolerance: float = 1e-9

    def __post_init__(self):
        G = np.array(self.G, dtype=float)
        if G.ndim != 2 or G.shape[0] != G.shape[1]:
            raise PreconditionError("G must be square")
        if self.group_tag not in GROUP_TAGS:
            raise PreconditionError(f"unknown group tag {self.group_tag!r}")
        det = float(np.linalg.det(G))
        if abs(det) <= self.tolerance:
            raise PreconditionError("G is not invertible")
        if self.group_tag == "special-linear" and abs(det - 1.0) > self.tolerance:
            raise PreconditionError(f"det(G) = {det} but the special-linear tag needs det 1")
        if self.group_tag in ("orthogonal", "rotation", "permutation"):
            if not np.allclose(G.T @ G, np.eye(len(G)), atol=self.tolerance * 10):
                raise PreconditionError(f"G is not orthogonal but tagged {self.group_tag!r}")
        G.setflags(write=False)
        object.__setattr__(self, "G", G)
        if self.search_horizon is None:
            object.__setattr__(self, "search_horizon", 10 * len(G) * max(1, estimate_order(G)))

    @property
    def n(self) -> int:
        return self.G.shape[0]

    @property
    def T_max(self) -> int:
        return self.search_horizon


def _close(a, b, tol=MATRIX_TOL):
    return np.linalg.norm(a - b) <= tol * max(1.0, np.linalg.norm(a))


def estimate_order(G, cap: int = 1000) -> int:
    """Smallest ``k <= cap`` with ``G^k = I`` (within tolerance), else 1."""
    G = np.asarray(G, dtype=float)
    eye = np.eye(len(G))
    P = eye
    for k in range(1, cap + 1):
        P = P @ G
        if not np.all(np.isfinite(P)):
            break
        if _close(P, eye):
            return k
    return 1


def _powers(G, count):
    out = [np.eye(len(G))]
    for _ in range(count):
        out.append(out[-1] @ G)
    return out


@dataclass(frozen=True)
class GroupResonance:
    G_prime: np.ndarray
    power: int
    times: Tuple[int, ...]


def group_resonance_search(spec: GroupSystemSpec, n: Optional[int] = None,
                           candidate_power: Optional[int] = None) -> Optional[GroupResonance]:
    """Look for ``G' = G^s`` reachable as ``G^{i*n + j - 1}`` for every ``j``.

    Candidates ``s`` are tried in increasing order (or only ``candidate_power``
    when given); for each, ``times[j-1]`` is the smallest ``t = j - 1 (mod n)``
    with ``G^t = G'``.  Powers are compared with the relative Frobenius bound
    ``1e-9 * max(1, ||G^t||)``.  Only ``t <= spec.T_max`` is searched, so
    ``None`` means "not found within T_max".
    """
    n = spec.n if n is None else n
    T = spec.T_max
    powers = _powers(spec.G, T)
    candidates = range(T + 1) if candidate_power is None else [candidate_power]
    for s in candidates:
        if s > T:
            break
        target = powers[s]
        times = []
        for r in range(n):
            hit = next((t for t in range(r, T + 1, n) if _close(powers[t], target)), None)
            if hit is None:
                break
            times.append(hit)
        else:
            return GroupResonance(target.copy(), s, tuple(times))
    return None


def group_row(powers_or_G, t: int, n: int) -> np.ndarray:
    return powers_or_G[t][t % n]


def group_row_rank(spec: GroupSystemSpec, horizon: Optional[int] = None) -> int:
    """Rank of the stacked switch rows over ``t = 0..horizon-1`` (default ``T_max + 1``)."""
    horizon = spec.T_max + 1 if horizon is None else horizon
    powers = _powers(spec.G, horizon - 1)
    return linalg.float_rank(np.array([group_row(powers, t, spec.n) for t in range(horizon)]))


def group_stream(spec: GroupSystemSpec, x0, horizon: int) -> CompressedStream:
    x0 = np.asarray(x0, dtype=float)
    vals = []
    x = x0.copy()
    for t in range(horizon):
        vals.append(x[t % spec.n])
        x = spec.G @ x
    return CompressedStream(np.array(vals), n=spec.n, m=spec.n)


def reconstruct_group(y: CompressedStream, spec: GroupSystemSpec, times: Optional[Sequence[int]] = None) -> LinearRecovery:
    """Recover ``x(0)`` for ``x(t+1) = G x(t)`` read through the switch.

    ``y(t)`` is row ``(t mod n) + 1`` of ``G^t`` applied to ``x(0)``.  With
    explicit ``times`` exactly those rows are stacked; otherwise rows are
    gathered greedily from ``t = 0`` until rank ``n``.
    """
    n = spec.n
    horizon = len(y)
    powers = _powers(spec.G, horizon - 1 if times is None else max(times))
    if times is not None:
        times = tuple(times)
        if max(times) >= horizon:
            raise InsufficientHorizon(f"time {max(times)} is beyond the stream", max(times) + 1)
        rows = [group_row(powers, t, n) for t in times]
        mat = np.array(rows)
        if linalg.float_rank(mat) < n:
            raise InsufficientHorizon(f"rows at times {times} do not reach rank {n}")
        x0, res = linalg.lstsq_solve(mat, np.array([float(y.values[t]) for t in times]))
        return LinearRecovery(x0, times, mat, res)
    times, rows = _greedy_rows(lambda t: group_row(powers, t, n), n, horizon)
    if len(rows) < n:
        raise InsufficientHorizon(f"rows reach rank {len(rows)} < {n} within {horizon} samples")
    return _solve_rows(times, rows, y)


def group_trajectory(spec: GroupSystemSpec, x0, horizon: int) -> np.ndarray:
    x = np.asarray(x0, dtype=float)
    out = []
    for _ in range(horizon):
        out.append(x)
        x = spec.G @ x
    return np.array(out)


# ---------------------------------------------------------------------------
# round-robin sensor networks


@dataclass(frozen=True)
class SensorNetworkSpec:
    """``N`` sensors with ``x_i(t+1) = A_i x_i(t)`` each reporting ``C_i x_i(t)``.

    Sensor ``(t mod N) + 1`` owns the medium at time ``t``.  Build the planar
    rotation network with :meth:`from_angles`.
    """

    A: Tuple[np.ndarray, ...]
    C: Tuple[np.ndarray, ...]
    alphas: Optional[Tuple[Angle, ...]] = None

    def __post_init__(self):
        A = tuple(np.array(a, dtype=float) for a in self.A)
        C = tuple(np.atleast_2d(np.array(c, dtype=float)) for c in self.C)
        if len(A) != len(C) or not A:
            raise PreconditionError("need one output map per sensor and at least one sensor")
        for i, (a, c) in enumerate(zip(A, C)):
            if a.ndim != 2 or a.shape[0] != a.shape[1] or c.shape[1] != a.shape[0]:
                raise PreconditionError(f"sensor {i + 1}: inconsistent shapes {a.shape}, {c.shape}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "C", C)
        if self.alphas is not None:
            object.__setattr__(self, "alphas", tuple(self.alphas))

    @classmethod
    def from_angles(cls, alphas: Sequence[Angle]) -> "SensorNetworkSpec":
        for a in alphas:
            RotationSpec(a)
        A = [rotation_matrix(float(a)) for a in alphas]
        C = [np.array([[1.0, 0.0]]) for _ in alphas]
        return cls(tuple(A), tuple(C), tuple(alphas))

    @property
    def N(self) -> int:
        return len(self.A)

    @property
    def is_rotation_network(self) -> bool:
        return self.alphas is not None

    def sensor_power(self, i: int, t: int) -> np.ndarray:
        """``A_i^t`` (``i`` 0-based); exact angle reduction for rotation networks."""
        if self.alphas is not None:
            return rotation_matrix(_radians_times(self.alphas[i], t))
        return np.linalg.matrix_power(self.A[i], t)


def roundrobin_losslessness(spec: SensorNetworkSpec) -> List[bool]:
    """Per-sensor verdict ``N * alpha_i != 0 (mod 2*pi)`` for rotation networks."""
    if not spec.is_rotation_network:
        raise UnsupportedSpec("not a rotation network; use observability_criterion instead")
    return [not is_multiple_of_two_pi(a, spec.N) for a in spec.alphas]


def observability_matrix(A, C, N: int) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    C = np.atleast_2d(np.asarray(C, dtype=float))
    n = A.shape[0]
    AN = np.linalg.matrix_power(A, N)
    blocks = [C]
    for _ in range(n - 1):
        blocks.append(blocks[-1] @ AN)
    return np.vstack(blocks)


def observability_criterion(A, C, N: int) -> Tuple[bool, int]:
    """Rank test on the stride-``N`` stack ``C; C A^N; ...; C A^{(n-1)N}``."""
    if N < 1:
        raise PreconditionError("stride N must be >= 1")
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise PreconditionError("A must be square")
    C = np.atleast_2d(np.asarray(C, dtype=float))
    if C.shape[1] != A.shape[0]:
        raise PreconditionError("C and A have inconsistent shapes")
    r = int(np.linalg.matrix_rank(observability_matrix(A, C, N)))
    return r == A.shape[0], r


def sensor_network_stream(spec: SensorNetworkSpec, x0s, horizon: int) -> CompressedStream:
    """Round-robin stream ``y(t) = C_i A_i^t x_i(0)`` with ``i = t mod N``."""
    x0s = [np.asarray(x, dtype=float) for x in x0s]
    vals = []
    for t in range(horizon):
        i = t % spec.N
        vals.append(float((spec.C[i] @ spec.sensor_power(i, t) @ x0s[i])[0]))
    return CompressedStream(np.array(vals))


@dataclass(frozen=True)
class NetworkRecovery:
    states: Dict[int, np.ndarray]
    times: Dict[int, Tuple[int, ...]]
    residual: float

    def trajectory(self, spec: SensorNetworkSpec, i: int, horizon: int) -> np.ndarray:
        """States ``x_i(0..horizon-1)`` of sensor ``i`` (1-based)."""
        return np.array([spec.sensor_power(i - 1, t) @ self.states[i] for t in range(horizon)])


def reconstruct_sensor_network(y: CompressedStream, spec: SensorNetworkSpec) -> NetworkRecovery:
    """Recover every sensor's initial state from the shared round-robin stream.

    Sensor ``i`` contributes the rows ``C_i A_i^t`` at ``t = i - 1 (mod N)``;
    all such rows in the stream are stacked and solved by least squares.
    Raises :class:`PartialReconstruction` when some sensor stays rank
    deficient, carrying the sensors that did succeed.
    """
    N = spec.N
    horizon = len(y)
    states, used, failed = {}, {}, []
    worst = 0.0
    for i in range(N):
        ts = list(range(i, horizon, N))
        if not ts:
            failed.append(i + 1)
            continue
        rows = np.vstack([spec.C[i] @ spec.sensor_power(i, t) for t in ts])
        dim = spec.A[i].shape[0]
        if linalg.float_rank(rows) < dim:
            failed.append(i + 1)
            continue
        rhs = np.array([float(y.values[t]) for t in ts])
        x, res = linalg.lstsq_solve(rows, rhs)
        worst = max(worst, res)
        states[i + 1] = x
        used[i + 1] = tuple(ts)
    if failed:
        raise PartialReconstruction(f"sensors {failed} cannot be reconstructed", states, failed)
    if worst > RESIDUAL_TOL * max(1.0, float(np.max(np.abs(np.asarray(y.values, dtype=float))))):
        raise InconsistentStream(f"round-trip residual {worst:.3e} too large", residual=worst)
    return NetworkRecovery(states, used, worst)

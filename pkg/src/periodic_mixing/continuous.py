"""Compressor design for continuous-time rotational exosystems.

For skew-symmetric ``A`` the signal ``x(t) = exp(A t) x0`` lives on a torus.
A mixer ``c(t) = exp(S t) c0`` with ``S`` commuting with ``A`` turns the
stream into ``y(t) = <exp((S - A) t) c0, x0>``, so ``x0`` is recoverable as
soon as the orbit of ``c0`` under ``S - A`` spans ``R^n``.  Both matrices are
brought to block-diagonal form by one orthogonal change of basis; the
blocks are multiples of ``J = [[0, 1], [-1, 0]]``.
"""
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import linalg as sla

from .exceptions import InconsistentSamples, InsufficientExcitation, PreconditionError

SKEW_TOL = 1e-12
FREQ_TOL = 1e-8
J = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class SkewSymmetricMatrix:
    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise PreconditionError(f"expected a square matrix, got shape {a.shape}")
        norm = np.linalg.norm(a)
        if np.linalg.norm(a + a.T) > SKEW_TOL * norm:
            raise PreconditionError("matrix is not skew-symmetric")
        a = 0.5 * (a - a.T)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


def as_skew(A) -> np.ndarray:
    if isinstance(A, SkewSymmetricMatrix):
        return A.entries
    return SkewSymmetricMatrix(A).entries


def block_diagonal(omegas: Sequence[float], n: int) -> np.ndarray:
    """Element of the Cartan subalgebra with blocks ``omega_i * J``."""
    out = np.zeros((n, n))
    for i, w in enumerate(omegas):
        out[2 * i:2 * i + 2, 2 * i:2 * i + 2] = w * J
    return out


@dataclass(frozen=True)
class CartanForm:
    """``A = T @ block_diagonal(omegas) @ T.T`` with ``T`` in ``SO(n)``."""

    T: np.ndarray = field(repr=False)
    omegas: Tuple[float, ...]
    trailing_zero: bool

    @property
    def n(self) -> int:
        return self.T.shape[0]

    @property
    def reduced(self) -> np.ndarray:
        return block_diagonal(self.omegas, self.n)

    def reconstruct(self) -> np.ndarray:
        return self.T @ self.reduced @ self.T.T

    def distinct_nonzero(self, tol: float = FREQ_TOL) -> bool:
        """Whether all ``|omega_i|`` are nonzero and pairwise distinct.

        That is when a constant mixer (``S = 0``) already suffices.
        """
        w = sorted(abs(v) for v in self.omegas)
        if self.trailing_zero or not w or w[0] <= tol:
            return False
        return all(b - a > tol for a, b in zip(w, w[1:]))


def _greedy_basis(P0, picked, take):
    """Pick the standard basis vector with the largest residual projection.

    ``P0`` projects onto the target subspace; ``picked`` holds orthonormal
    vectors already chosen inside it.  Ties go to the lowest index, which
    keeps the basis aligned with coordinate axes whenever possible.
    """
    P = P0.copy()
    for v in picked:
        P -= np.outer(v, v)
    norms = np.linalg.norm(P, axis=0)
    best = norms.max()
    i = int(np.flatnonzero(norms >= best - 1e-9 * max(1.0, best))[0])
    u = P[:, i] / norms[i]
    return take(u)


def cartan_decompose(A, tol: float = FREQ_TOL) -> CartanForm:
    """Orthogonal ``T`` (``det T = +1``) bringing skew ``A`` to blocks ``omega_i J``.

    Invariant subspaces come from the real Schur form.  Within each group of
    (numerically) equal frequencies the basis is rebuilt greedily from the
    standard basis, so matrices that are already block-structured up to a
    coordinate permutation get a permutation-like ``T``.  Frequencies are
    sorted in decreasing order, zero blocks last, then the trailing zero for
    odd ``n``.

    ``omega_i >= 0`` except in one case: when ``n`` is even and no zero
    block exists, the orientation of ``T`` is forced by the frequencies, and
    achieving ``det T = +1`` may require reporting the last ``omega`` with a
    negative sign.
    """
    A = as_skew(A)
    n = A.shape[0]
    scale = max(1.0, float(np.linalg.norm(A, 2)))
    ftol = tol * scale
    U, Z = sla.schur(A, output="real")

    # collect (frequency, columns) per Schur block
    blocks = []
    k = 0
    while k < n:
        if k + 1 < n and abs(U[k + 1, k]) > 0.0:
            w = float(np.sqrt(abs(U[k, k + 1] * U[k + 1, k])))
            blocks.append((w, [k, k + 1]))
            k += 2
        else:
            blocks.append((0.0, [k]))
            k += 1

    zero_cols = [c for w, cols in blocks if w <= ftol for c in cols]
    nonzero = sorted(((w, cols) for w, cols in blocks if w > ftol), key=lambda b: -b[0])
    clusters = []
    for w, cols in nonzero:
        if clusters and abs(clusters[-1][0][-1] - w) <= ftol:
            clusters[-1][0].append(w)
            clusters[-1][1].extend(cols)
        else:
            clusters.append(([w], list(cols)))

    columns = []
    for ws, cols in clusters:
        w = float(np.mean(ws))
        Q = Z[:, cols]
        P0 = Q @ Q.T
        chosen = []
        for _ in range(len(cols) // 2):
            def take(u):
                v = -A @ u / w
                for q in chosen:
                    v -= (q @ v) * q
                v /= np.linalg.norm(v)
                return u, v
            u, v = _greedy_basis(P0, chosen, take)
            chosen.extend([u, v])
        columns.extend(chosen)
    if zero_cols:
        Q = Z[:, zero_cols]
        P0 = Q @ Q.T
        chosen = []
        for _ in zero_cols:
            chosen.append(_greedy_basis(P0, chosen, lambda u: u))
        columns.extend(chosen)

    T = np.column_stack(columns) if columns else np.eye(n)
    n_blocks = n // 2
    trailing = n % 2 == 1
    n_nonzero_blocks = sum(len(cols) // 2 for _, cols in clusters)

    if np.linalg.det(T) < 0:
        if n_nonzero_blocks < n_blocks:
            # second column of the last zero block: leaves reduced form and c0 alone
            T[:, 2 * n_blocks - 1] *= -1
        elif trailing:
            T[:, n - 1] *= -1
        else:
            T[:, 2 * n_blocks - 1] *= -1

    reduced = T.T @ A @ T
    omegas = tuple(float(reduced[2 * i, 2 * i + 1]) for i in range(n_blocks))
    omegas = tuple(0.0 if i >= n_nonzero_blocks else w for i, w in enumerate(omegas))
    return CartanForm(T, omegas, trailing)


def matrix_exponential_skew(M, t: float = 1.0, cartan: Optional[CartanForm] = None) -> np.ndarray:
    """``exp(M t)`` for skew ``M`` via its block form; the result lies in ``SO(n)``."""
    if cartan is None:
        cartan = cartan_decompose(M)
    n = cartan.n
    E = np.eye(n)
    for i, w in enumerate(cartan.omegas):
        c, s = np.cos(w * t), np.sin(w * t)
        E[2 * i:2 * i + 2, 2 * i:2 * i + 2] = [[c, s], [-s, c]]
    return cartan.T @ E @ cartan.T.T


@dataclass(frozen=True)
class ContinuousCompressorDesign:
    """Mixer ``c(t) = exp(S t) c0`` paired with the dynamics it was built for.

    ``deltas[i] = omegas[i] - thetas[i]`` are the block frequencies of
    ``A - S``; in the shared basis the difference ``S - A`` has blocks
    ``-deltas[i] * J``.
    """

    S: np.ndarray = field(repr=False)
    c0: np.ndarray
    thetas: Tuple[float, ...]
    deltas: Tuple[float, ...]
    cartan: CartanForm = field(repr=False)

    @property
    def n(self) -> int:
        return self.c0.shape[0]

    @property
    def T(self) -> np.ndarray:
        return self.cartan.T

    @property
    def omegas(self) -> Tuple[float, ...]:
        return self.cartan.omegas

    @property
    def difference_form(self) -> CartanForm:
        """Block form of ``S - A`` in the shared basis."""
        return CartanForm(self.cartan.T, tuple(-d for d in self.deltas), self.cartan.trailing_zero)

    def orbit(self, t: float) -> np.ndarray:
        """``exp((S - A) t) c0``."""
        return matrix_exponential_skew(None, t, self.difference_form) @ self.c0

    def mixer(self, t: float) -> np.ndarray:
        """``c(t) = exp(S t) c0``."""
        form = CartanForm(self.cartan.T, self.thetas, self.cartan.trailing_zero)
        return matrix_exponential_skew(None, t, form) @ self.c0

    def to_dict(self):
        return {
            "S": self.S.tolist(),
            "c0": self.c0.tolist(),
            "T": self.T.tolist(),
            "omegas": list(self.omegas),
            "thetas": list(self.thetas),
            "deltas": list(self.deltas),
            "c0_convention": "c0 = T (e1 + e3 + ...), T columns are the block basis",
            "det_T": float(np.linalg.det(self.T)),
        }


def odd_basis_sum(n: int) -> np.ndarray:
    """``e1 + e3 + ...`` up to ``e_{n-1}`` (even ``n``) or ``e_n`` (odd ``n``)."""
    v = np.zeros(n)
    v[0::2] = 1.0
    return v


def design_compressor(A, delta_base: float = 1.0, thetas: Optional[Sequence[float]] = None,
                      strict: bool = True) -> ContinuousCompressorDesign:
    """Design ``(S, c0)`` so that ``y`` determines the initial state of ``x' = A x``.

    By default ``theta_i = omega_i - i * delta_base`` (``i = 1, 2, ...``),
    giving ``delta_i = i * delta_base``.  ``thetas`` overrides that choice.
    With ``strict`` the differences must be pairwise distinct and nonzero;
    pass ``strict=False`` to build deliberately degenerate designs.
    """
    A = as_skew(A)
    n = A.shape[0]
    form = cartan_decompose(A)
    k = n // 2
    if thetas is None:
        if delta_base <= 0:
            raise PreconditionError("delta_base must be positive")
        thetas = [w - (i + 1) * delta_base for i, w in enumerate(form.omegas)]
    thetas = tuple(float(v) for v in thetas)
    if len(thetas) != k:
        raise PreconditionError(f"need {k} thetas for n={n}, got {len(thetas)}")
    deltas = tuple(w - th for w, th in zip(form.omegas, thetas))
    if strict:
        if any(abs(d) <= FREQ_TOL for d in deltas):
            raise PreconditionError(f"omega_i - theta_i must be nonzero, got {deltas}")
        if any(abs(a - b) <= FREQ_TOL for i, a in enumerate(deltas) for b in deltas[i + 1:]):
            raise PreconditionError(f"omega_i - theta_i must be pairwise distinct, got {deltas}")
    S = form.T @ block_diagonal(thetas, n) @ form.T.T
    S = 0.5 * (S - S.T)
    c0 = form.T @ odd_basis_sum(n)
    return ContinuousCompressorDesign(S, c0, thetas, deltas, form)


@dataclass(frozen=True)
class SpanningCertificate:
    gramian: np.ndarray = field(repr=False)
    min_eigenvalue: float
    threshold: float
    times: Tuple[float, ...] = field(repr=False)

    @property
    def passed(self) -> bool:
        return self.min_eigenvalue > self.threshold


def spanning_certificate(design: ContinuousCompressorDesign, A=None, sample_count: Optional[int] = None,
                         dt: Optional[float] = None, times: Optional[Sequence[float]] = None) -> SpanningCertificate:
    """Gramian of ``v_k = exp((S - A) t_k) c0`` over the sample times.

    Passes when its smallest eigenvalue exceeds ``1e-8 * trace / n``.
    ``A`` is optional: when given, ``S - A`` is formed explicitly and
    exponentiated independently of the design's block form.
    """
    n = design.n
    if times is None:
        K = sample_count if sample_count is not None else 4 * n
        if K < n:
            raise PreconditionError(f"need at least n={n} samples, got {K}")
        times = default_sample_times(design, K, dt)
    times = tuple(float(t) for t in times)
    if A is not None:
        M = design.S - as_skew(A)
        form = cartan_decompose(M)
        vs = np.array([matrix_exponential_skew(M, t, form) @ design.c0 for t in times])
    else:
        vs = np.array([design.orbit(t) for t in times])
    gram = vs.T @ vs
    eig = float(np.linalg.eigvalsh(gram)[0])
    thr = 1e-8 * float(np.trace(gram)) / n
    return SpanningCertificate(gram, eig, thr, times)


def default_dt(design: ContinuousCompressorDesign) -> float:
    top = max((abs(d) for d in design.deltas), default=0.0)
    return float(np.pi / (2.0 * top * design.n + 1.0))


def default_sample_times(design: ContinuousCompressorDesign, count: int, dt: Optional[float] = None):
    dt = default_dt(design) if dt is None else dt
    if dt <= 0:
        raise PreconditionError("dt must be positive")
    return [k * dt for k in range(count)]


def continuous_stream(design: ContinuousCompressorDesign, A, x0, times: Sequence[float]):
    """Sampled ``y(t) = <exp(S t) c0, exp(A t) x0>``, computed without the factorization."""
    A = as_skew(A)
    x0 = np.asarray(x0, dtype=float)
    form_a = design.cartan
    out = []
    for t in times:
        xt = matrix_exponential_skew(A, t, form_a) @ x0
        out.append((float(t), float(design.mixer(t) @ xt)))
    return out


@dataclass(frozen=True)
class ContinuousRecovery:
    x0: np.ndarray
    residual: float
    min_singular_value: float
    A: np.ndarray = field(repr=False)

    def trajectory(self, t: float) -> np.ndarray:
        """``x(t) = exp(A t) x0``."""
        return sla.expm(self.A * t) @ self.x0


def reconstruct_continuous(samples, design: ContinuousCompressorDesign, A=None) -> ContinuousRecovery:
    """Least-squares recovery of ``x0`` from ``(t_k, y_k)`` pairs.

    Rows are ``exp((S - A) t_k) c0``.  Raises
    :class:`InsufficientExcitation` when the smallest singular value of the
    row stack is below ``1e-8`` times the largest, and
    :class:`InconsistentSamples` when the residual exceeds
    ``1e-8 * ||y||``.
    """
    A_mat = design.T @ design.cartan.reduced @ design.T.T if A is None else as_skew(A)
    ts = [float(t) for t, _ in samples]
    ys = np.array([float(v) for _, v in samples])
    if len(set(ts)) != len(ts):
        raise PreconditionError("sample times must be distinct")
    rows = np.array([design.orbit(t) for t in ts])
    if rows.shape[0] < design.n:
        raise InsufficientExcitation(f"{rows.shape[0]} samples cannot determine {design.n} unknowns", 0.0)
    sv = np.linalg.svd(rows, compute_uv=False)
    if sv[-1] <= 1e-8 * sv[0]:
        raise InsufficientExcitation(f"row stack is ill-conditioned (min singular value {sv[-1]:.3e})", float(sv[-1]))
    x0, *_ = np.linalg.lstsq(rows, ys, rcond=None)
    res = float(np.linalg.norm(rows @ x0 - ys))
    if res > 1e-8 * max(float(np.linalg.norm(ys)), np.finfo(float).tiny):
        raise InconsistentSamples(f"residual {res:.3e} too large for these samples", residual=res)
    return ContinuousRecovery(x0, res, float(sv[-1]), A_mat)

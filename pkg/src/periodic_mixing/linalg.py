"""Small dense linear algebra over exact rationals and floats.

The exact routines work on ``numpy`` object arrays holding
:class:`fractions.Fraction` (or ``int``) entries and never round.  The float
routines use QR with column pivoting and a relative rank tolerance.
"""
from fractions import Fraction

import numpy as np
from scipy import linalg as sla


def is_exact(a):
    """True when ``a`` holds Python rationals rather than machine floats."""
    a = np.asarray(a)
    return a.dtype == object


def as_exact(a):
    """Convert an array-like of ints/Fractions/decimal strings to Fractions."""
    a = np.asarray(a, dtype=object)
    out = np.empty(a.shape, dtype=object)
    for idx, v in np.ndenumerate(a):
        out[idx] = Fraction(v)
    return out


def row_echelon(a):
    """Reduced row echelon form of an exact matrix.

    Returns ``(rref, pivot_columns)``.  The input is not modified.
    """
    m = [list(map(Fraction, row)) for row in np.asarray(a, dtype=object)]
    n_rows = len(m)
    n_cols = len(m[0]) if n_rows else 0
    pivots = []
    r = 0
    for col in range(n_cols):
        if r == n_rows:
            break
        piv = next((i for i in range(r, n_rows) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][col]
        m[r] = [v / lead for v in m[r]]
        for i in range(n_rows):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [vi - f * vr for vi, vr in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    out = np.empty((n_rows, n_cols), dtype=object)
    for i in range(n_rows):
        for j in range(n_cols):
            out[i, j] = m[i][j]
    return out, pivots


def exact_rank(a):
    a = np.asarray(a, dtype=object)
    if a.size == 0:
        return 0
    return len(row_echelon(a)[1])


def exact_solve(a, b):
    """Solve ``a @ x = b`` exactly for a full-column-rank, consistent system.

    Returns ``(x, consistent)``.  ``x`` is ``None`` when ``a`` lacks full
    column rank; ``consistent`` is False when the right-hand side is not in
    the column space (overdetermined and contradictory).
    """
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object).reshape(-1, 1)
    n = a.shape[1]
    aug = np.hstack([a, b])
    rref, pivots = row_echelon(aug)
    if n in pivots:
        return None, False
    if len(pivots) < n:
        return None, True
    x = np.array([rref[i, n] for i in range(n)], dtype=object)
    return x, True


def float_rank(a):
    """Numerical rank via QR with column pivoting.

    Tolerance is ``max(shape) * eps * |R[0, 0]|``; ``|R[0, 0]|`` is the
    largest column norm.
    """
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return 0
    _, r, _ = sla.qr(a, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    if diag.size == 0 or diag[0] == 0.0:
        return 0
    tol = max(a.shape) * np.finfo(float).eps * diag[0]
    return int(np.sum(diag > tol))


def rank(a):
    return exact_rank(a) if is_exact(a) else float_rank(a)


def in_row_space(a, v):
    """Whether ``v`` is a linear combination of the rows of ``a``."""
    a = np.asarray(a)
    if a.size == 0:
        return not any(np.asarray(v) != 0)
    stacked = np.vstack([a, np.asarray(v, dtype=a.dtype).reshape(1, -1)])
    return rank(stacked) == rank(a)


def lstsq_solve(a, b):
    """Least-squares solve; returns ``(x, max_abs_residual)``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    x, *_ = np.linalg.lstsq(a, b, rcond=None)
    res = float(np.max(np.abs(a @ x - b))) if b.size else 0.0
    return x, res

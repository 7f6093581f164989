"""Rolling-shutter readout of periodic image sequences and smear removal.

A sensor that reads row ``(t mod n_rows) + 1`` at time ``t`` is the switch
compressor applied to every pixel column at once.  When the scene is
``p``-periodic and ``gcd(n_rows, p) = 1`` each (row, phase) pair is read at
exactly one time per ``lcm(n_rows, p)`` window, given by the CRT.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from .discrete import PermutationSpec
from .exceptions import InsufficientHorizon, NotLossless, PreconditionError
from .number_theory import CongruenceSystem, crt_solve, gcd, lcm, winding_coverage


@dataclass(frozen=True)
class ImageSequence:
    frames: np.ndarray
    max_val: int = 1

    def __post_init__(self):
        f = np.array(self.frames)
        if f.ndim != 3 or min(f.shape) < 1:
            raise PreconditionError(f"frames must have shape (p, rows, width), got {f.shape}")
        if f.min() < 0 or f.max() > self.max_val:
            raise PreconditionError(f"gray values must lie in [0, {self.max_val}]")
        f.setflags(write=False)
        object.__setattr__(self, "frames", f)

    @property
    def period(self) -> int:
        return self.frames.shape[0]

    @property
    def n_rows(self) -> int:
        return self.frames.shape[1]

    @property
    def width(self) -> int:
        return self.frames.shape[2]

    def frame(self, t: int) -> np.ndarray:
        return self.frames[t % self.period]

    def __eq__(self, other):
        if not isinstance(other, ImageSequence):
            return NotImplemented
        return self.frames.shape == other.frames.shape and bool(np.all(self.frames == other.frames))

    __hash__ = None


@dataclass(frozen=True)
class ReadoutRecord:
    t: int
    row_index: int
    pixels: Tuple


@dataclass(frozen=True)
class ReadoutStream:
    records: Tuple[ReadoutRecord, ...]
    n_rows: int

    def __post_init__(self):
        recs = tuple(self.records)
        for k, r in enumerate(recs):
            if r.t != k:
                raise PreconditionError(f"record {k} carries time {r.t}; one record per step expected")
            if r.row_index != r.t % self.n_rows + 1:
                raise PreconditionError(f"record at t={r.t} reads row {r.row_index}, expected {r.t % self.n_rows + 1}")
        object.__setattr__(self, "records", recs)

    def __len__(self):
        return len(self.records)

    @property
    def horizon(self) -> int:
        return len(self.records)

    def measurement(self, t: int) -> np.ndarray:
        """Full sensor image as it looks after the readout at time ``t``.

        Row ``r`` holds the most recent readout of that row (rows not yet
        read are zero), i.e. the smeared picture a rolling shutter returns.
        """
        width = len(self.records[0].pixels)
        img = np.zeros((self.n_rows, width), dtype=np.asarray(self.records[0].pixels).dtype)
        for rec in self.records[max(0, t - self.n_rows + 1):t + 1]:
            img[rec.row_index - 1] = rec.pixels
        return img


def simulate_readout(seq: ImageSequence, horizon: int) -> ReadoutStream:
    if horizon < 1:
        raise PreconditionError("horizon must be >= 1")
    n = seq.n_rows
    recs = [ReadoutRecord(t, t % n + 1, tuple(seq.frame(t)[t % n].tolist())) for t in range(horizon)]
    return ReadoutStream(tuple(recs), n)


def readout_schedule(n_rows: int, p: int) -> Dict[Tuple[int, int], int]:
    """``(row, phase) -> t``: the earliest time row ``row`` of frame ``phase`` is read.

    Rows are 1-based, phases 0-based.  Pairs that are never read are absent.
    """
    out = {}
    for row in range(1, n_rows + 1):
        for tau in range(p):
            t = crt_solve(CongruenceSystem(row - 1, n_rows, tau, p))
            if t is not None:
                out[(row, tau)] = t
    return out


def unread_pairs(n_rows: int, p: int) -> List[Tuple[int, int]]:
    """``(row, phase)`` pairs the readout never visits (1-based rows)."""
    return sorted((i + 1, j) for i, j in winding_coverage(n_rows, p).uncovered)


def deblur(stream: ReadoutStream, p: int, n_rows: int = None, width: int = None, max_val: int = 1) -> ImageSequence:
    """Reassemble the ``p`` true frames from a rolling-shutter readout.

    Row ``r`` of frame ``tau`` is taken from the record at the unique
    ``t < lcm(n_rows, p)`` with ``t = r - 1 (mod n_rows)`` and
    ``t = tau (mod p)``.
    """
    n_rows = stream.n_rows if n_rows is None else n_rows
    if n_rows != stream.n_rows:
        raise PreconditionError("n_rows disagrees with the stream")
    if gcd(n_rows, p) != 1:
        missing = unread_pairs(n_rows, p)
        raise NotLossless(f"gcd({n_rows}, {p}) != 1: {len(missing)} (row, phase) pairs are never read", missing)
    need = lcm(n_rows, p)
    if len(stream) < need:
        raise InsufficientHorizon(f"need {need} readout steps, got {len(stream)}", need)
    width = len(stream.records[0].pixels) if width is None else width
    frames = np.zeros((p, n_rows, width), dtype=np.asarray(stream.records[0].pixels).dtype)
    for (row, tau), t in readout_schedule(n_rows, p).items():
        rec = stream.records[t]
        if len(rec.pixels) != width:
            raise PreconditionError(f"record at t={t} has {len(rec.pixels)} pixels, expected {width}")
        frames[tau, row - 1] = rec.pixels
    return ImageSequence(frames, max_val)


# ---------------------------------------------------------------------------
# the 5x5 rotor


def rotor_frames() -> np.ndarray:
    """Four frames of a five-pixel bar turning by 45 degrees per step.

    Diagonal, horizontal, anti-diagonal, vertical; lit pixels are 1.
    """
    f = np.zeros((4, 5, 5), dtype=int)
    for k in range(5):
        f[0, k, k] = 1
        f[1, 2, k] = 1
        f[2, 4 - k, k] = 1
        f[3, k, 2] = 1
    return f


def rotor_sequence() -> ImageSequence:
    return ImageSequence(rotor_frames(), 1)


def rotor_pixel_permutation() -> PermutationSpec:
    """Pixel permutation (row-major, 25 channels) that advances the rotor one step.

    Pixel ``i`` at ``t+1`` takes the value pixel ``sigma(i)`` had at ``t``;
    each arm of the bar moves one octant counter-clockwise.
    """
    c = 2
    # counter-clockwise octants around the centre, starting top-left
    octants = [(-1, -1), (0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0)]
    sigma = list(range(25))
    for dist in (1, 2):
        cells = [(c + dr * dist) * 5 + (c + dc * dist) for dr, dc in octants]
        for k, cell in enumerate(cells):
            sigma[cells[(k + 1) % 8]] = cell
    return PermutationSpec(tuple(sigma))

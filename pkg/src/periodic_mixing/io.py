"""File formats: signal/stream CSV, readout CSV, PGM (P2) images, JSON specs."""
import csv
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .discrete import GroupSystemSpec, PermutationSpec, RationalAngle, RotationSpec, SensorNetworkSpec
from .shutter import ImageSequence, ReadoutRecord, ReadoutStream
from .signals import CompressedStream, MixingSignal, PeriodicVectorSignal


def _parse(token, exact):
    token = token.strip()
    return Fraction(token) if exact else float(Fraction(token) if "/" in token else token)


def _fmt(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _read_rows(path):
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise ValueError(f"{path}: empty file")
    return [c.strip() for c in rows[0]], rows[1:]


def read_signal_csv(path, exact: bool = False, kind: str = "signal"):
    """Read one period of a vector signal from ``t,x1,...,xn`` CSV.

    ``kind="mixer"`` returns a :class:`MixingSignal`.  With ``exact`` the
    entries are parsed as rationals (``p/q`` tokens allowed).
    """
    header, rows = _read_rows(path)
    if not header or header[0] != "t" or len(header) < 2:
        raise ValueError(f"{path}: header must be t,x1,...,xn")
    rows = sorted(rows, key=lambda r: int(r[0]))
    ts = [int(r[0]) for r in rows]
    if ts != list(range(len(ts))):
        raise ValueError(f"{path}: times must be 0..p-1, got {ts}")
    width = len(header) - 1
    for r in rows:
        if len(r) != width + 1:
            raise ValueError(f"{path}: row for t={r[0]} has {len(r) - 1} values, expected {width}")
    data = [[_parse(v, exact) for v in r[1:]] for r in rows]
    arr = np.array(data, dtype=object if exact else float)
    value_kind = "exact-rational" if exact else "float"
    cls = MixingSignal if kind == "mixer" else PeriodicVectorSignal
    return cls(arr, value_kind=value_kind)


def write_signal_csv(path, signal, prefix: str = "x"):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t"] + [f"{prefix}{i + 1}" for i in range(signal.n)])
        for t, row in enumerate(signal.samples):
            w.writerow([t] + [_fmt(v) for v in row])


def read_stream_csv(path, exact: bool = False) -> CompressedStream:
    """Read a scalar stream from ``t,y`` CSV (times must be 0..L-1)."""
    header, rows = _read_rows(path)
    if header[:2] != ["t", "y"]:
        raise ValueError(f"{path}: header must be t,y")
    rows = sorted(rows, key=lambda r: int(r[0]))
    if [int(r[0]) for r in rows] != list(range(len(rows))):
        raise ValueError(f"{path}: stream times must be 0..L-1")
    vals = [_parse(r[1], exact) for r in rows]
    return CompressedStream(np.array(vals, dtype=object if exact else float))


def write_stream_csv(path, y: CompressedStream):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "y"])
        for t, v in enumerate(y.values):
            w.writerow([t, _fmt(v)])


def read_samples_csv(path):
    """Continuous-time samples: ``t,y`` with real-valued, possibly irregular times."""
    header, rows = _read_rows(path)
    if header[:2] != ["t", "y"]:
        raise ValueError(f"{path}: header must be t,y")
    return [(float(r[0]), float(r[1])) for r in rows]


def write_samples_csv(path, samples):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "y"])
        for t, v in samples:
            w.writerow([repr(float(t)), repr(float(v))])


# ---------------------------------------------------------------------------
# images


def write_pgm(path, image, max_val: int = 1):
    image = np.asarray(image, dtype=int)
    h, w = image.shape
    lines = ["P2", f"{w} {h}", str(max_val)]
    lines += [" ".join(str(int(v)) for v in row) for row in image]
    Path(path).write_text("\n".join(lines) + "\n")


def read_pgm(path):
    """Plain PGM (P2); returns ``(image, max_val)``."""
    tokens = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0]
        tokens.extend(line.split())
    if not tokens or tokens[0] != "P2":
        raise ValueError(f"{path}: not a plain (P2) PGM file")
    w, h, max_val = int(tokens[1]), int(tokens[2]), int(tokens[3])
    data = [int(v) for v in tokens[4:]]
    if len(data) != w * h:
        raise ValueError(f"{path}: expected {w * h} pixels, found {len(data)}")
    return np.array(data, dtype=int).reshape(h, w), max_val


def read_frames(paths):
    images, maxes = zip(*(read_pgm(p) for p in paths))
    return ImageSequence(np.array(images), max(maxes))


def write_frames(directory, seq: ImageSequence, stem: str = "frame"):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for k in range(seq.period):
        p = directory / f"{stem}_{k}.pgm"
        write_pgm(p, seq.frames[k], seq.max_val)
        paths.append(p)
    return paths


def write_readout_csv(path, stream: ReadoutStream):
    width = len(stream.records[0].pixels)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "row_index"] + [f"p{i + 1}" for i in range(width)])
        for r in stream.records:
            w.writerow([r.t, r.row_index] + [_fmt(v) for v in r.pixels])


def read_readout_csv(path, n_rows: int = None) -> ReadoutStream:
    """Read ``t,row_index,p1,...,pw``; ``n_rows`` defaults to the largest row index."""
    header, rows = _read_rows(path)
    if header[:2] != ["t", "row_index"]:
        raise ValueError(f"{path}: header must be t,row_index,p1,...,pw")
    recs = []
    for r in sorted(rows, key=lambda r: int(r[0])):
        px = tuple(int(v) if v.strip().lstrip("-").isdigit() else float(v) for v in r[2:])
        recs.append(ReadoutRecord(int(r[0]), int(r[1]), px))
    if n_rows is None:
        n_rows = max(r.row_index for r in recs)
    return ReadoutStream(tuple(recs), n_rows)


# ---------------------------------------------------------------------------
# JSON specs


def _load_json(source):
    if isinstance(source, (dict, list)):
        return source
    return json.loads(Path(source).read_text())


def parse_angle(value):
    """Radians as a number, or exact turns as ``{"turns": "1/3"}`` / ``"1/3 turn"``."""
    if isinstance(value, dict):
        return RationalAngle(Fraction(str(value["turns"])))
    if isinstance(value, str):
        text = value.strip()
        if text.endswith("turn") or text.endswith("turns"):
            return RationalAngle(Fraction(text.rsplit(" ", 1)[0].strip()))
        if text.endswith("pi"):
            coeff = text[:-2].strip().rstrip("*").strip() or "1"
            return RationalAngle(Fraction(coeff) / 2)
        return float(text)
    return float(value)


def load_matrix(source, key: str = None):
    data = _load_json(source)
    if isinstance(data, dict):
        if key is None:
            key = next(k for k in ("A", "G", "matrix") if k in data)
        data = data[key]
    return np.array([[float(Fraction(str(v))) for v in row] for row in data])


def load_exosystem(source):
    """Build a spec from ``{"kind": "permutation"|"rotation"|"group"|"sensors", ...}``."""
    data = _load_json(source)
    kind = data.get("kind")
    if kind == "permutation":
        sigma = data["sigma"]
        if isinstance(sigma, str):
            return PermutationSpec.from_cycles(sigma, data.get("n"))
        return PermutationSpec(tuple(int(v) - 1 for v in sigma))
    if kind == "rotation":
        return RotationSpec(parse_angle(data["alpha"]))
    if kind == "group":
        return GroupSystemSpec(load_matrix(data, "G"), data.get("group_tag", "other"), data.get("T_max"))
    if kind == "sensors":
        if "alphas" in data:
            return SensorNetworkSpec.from_angles([parse_angle(a) for a in data["alphas"]])
        return SensorNetworkSpec(tuple(np.array(a, dtype=float) for a in data["A"]),
                                 tuple(np.array(c, dtype=float) for c in data["C"]))
    raise ValueError(f"unknown exosystem kind {kind!r}")

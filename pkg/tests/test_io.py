import json
from fractions import Fraction
from importlib import resources

import numpy as np
import pytest

from periodic_mixing import discrete, io, shutter
from periodic_mixing.linalg import as_exact
from periodic_mixing.signals import CompressedStream, PeriodicVectorSignal


def test_signal_csv_round_trip_exact(tmp_path):
    x = PeriodicVectorSignal(as_exact([[Fraction(1, 3), 2], [-5, Fraction(7, 2)]]))
    path = tmp_path / "x.csv"
    io.write_signal_csv(path, x)
    assert path.read_text().splitlines()[0] == "t,x1,x2"
    assert io.read_signal_csv(path, exact=True) == x


def test_signal_csv_round_trip_float(tmp_path, rng):
    x = PeriodicVectorSignal(rng.normal(size=(3, 4)))
    io.write_signal_csv(tmp_path / "x.csv", x)
    back = io.read_signal_csv(tmp_path / "x.csv")
    assert np.array_equal(back.samples, x.samples)
    assert io.read_signal_csv(tmp_path / "x.csv", kind="mixer").m == 3


def test_signal_csv_rejects_gaps(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("t,x1\n0,1\n2,3\n")
    with pytest.raises(ValueError):
        io.read_signal_csv(path)
    path.write_text("time,x1\n0,1\n")
    with pytest.raises(ValueError):
        io.read_signal_csv(path)


def test_stream_and_samples_round_trip(tmp_path):
    y = CompressedStream(as_exact([1, Fraction(-2, 3)]))
    io.write_stream_csv(tmp_path / "y.csv", y)
    assert list(io.read_stream_csv(tmp_path / "y.csv", exact=True).values) == [1, Fraction(-2, 3)]
    samples = [(0.0, 1.5), (0.3, -0.25)]
    io.write_samples_csv(tmp_path / "s.csv", samples)
    assert io.read_samples_csv(tmp_path / "s.csv") == samples


def test_pgm_round_trip(tmp_path):
    img = np.array([[0, 3], [2, 1]])
    io.write_pgm(tmp_path / "a.pgm", img, 3)
    back, max_val = io.read_pgm(tmp_path / "a.pgm")
    assert max_val == 3 and np.array_equal(back, img)
    (tmp_path / "b.pgm").write_text("P5\n1 1\n1\n0\n")
    with pytest.raises(ValueError):
        io.read_pgm(tmp_path / "b.pgm")


def test_readout_csv_round_trip(tmp_path):
    stream = shutter.simulate_readout(shutter.rotor_sequence(), 20)
    io.write_readout_csv(tmp_path / "r.csv", stream)
    assert io.read_readout_csv(tmp_path / "r.csv") == stream


def test_packaged_rotor_assets_match_generator():
    data = resources.files("periodic_mixing") / "data"
    with resources.as_file(data) as root:
        seq = io.read_frames([root / f"rotor_{k}.pgm" for k in range(4)])
        stream = io.read_readout_csv(root / "rotor_readout.csv")
    assert seq == shutter.rotor_sequence()
    assert stream == shutter.simulate_readout(shutter.rotor_sequence(), 20)


def test_parse_angle():
    assert io.parse_angle({"turns": "1/3"}) == discrete.RationalAngle(Fraction(1, 3))
    assert io.parse_angle("1/3 turn") == discrete.RationalAngle(Fraction(1, 3))
    assert io.parse_angle("2/3 pi") == discrete.RationalAngle(Fraction(1, 3))
    assert io.parse_angle("pi") == discrete.RationalAngle(Fraction(1, 2))
    assert io.parse_angle(1.25) == 1.25 and io.parse_angle("0.5") == 0.5


def test_load_exosystems(tmp_path):
    perm = io.load_exosystem({"kind": "permutation", "sigma": "(4 2 3 1)(5)"})
    assert perm == discrete.PermutationSpec.from_cycles("(4 2 3 1)(5)")
    assert io.load_exosystem({"kind": "permutation", "sigma": [2, 1]}).sigma == (1, 0)
    rot = io.load_exosystem({"kind": "rotation", "alpha": {"turns": "1/3"}})
    assert isinstance(rot, discrete.RotationSpec)
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"kind": "group", "G": [[-1, 1, 1], [1, 1, -1], ["-3/2", "3/2", 1]]}))
    g = io.load_exosystem(path)
    assert g.G[2, 0] == -1.5
    net = io.load_exosystem({"kind": "sensors", "alphas": ["1/3 turn", 1.0]})
    assert net.N == 2 and net.is_rotation_network
    with pytest.raises(ValueError):
        io.load_exosystem({"kind": "wave"})

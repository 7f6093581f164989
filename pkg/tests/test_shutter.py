import numpy as np
import pytest

from periodic_mixing import discrete, shutter
from periodic_mixing.exceptions import InsufficientHorizon, NotLossless, PreconditionError
from periodic_mixing.signals import PeriodicVectorSignal, compress, switch_mixer


def test_rotor_frames():
    f = shutter.rotor_frames()
    assert f.shape == (4, 5, 5) and f.sum(axis=(1, 2)).tolist() == [5, 5, 5, 5]
    assert np.array_equal(f[0], np.eye(5, dtype=int))
    assert f[1][2].tolist() == [1] * 5
    assert np.array_equal(f[2], np.fliplr(np.eye(5, dtype=int)))
    assert f[3][:, 2].tolist() == [1] * 5


def test_smeared_measurement_at_t4():
    stream = shutter.simulate_readout(shutter.rotor_sequence(), 20)
    img = stream.measurement(4)
    expected = np.array([
        [1, 0, 0, 0, 0],  # frame 0 at t=0
        [0, 0, 0, 0, 0],  # frame 1 at t=1, bar is on row 3
        [0, 0, 1, 0, 0],  # frame 2 at t=2
        [0, 0, 1, 0, 0],  # frame 3 at t=3
        [0, 0, 0, 0, 1],  # frame 0 at t=4
    ])
    assert np.array_equal(img, expected)
    assert not np.array_equal(img, shutter.rotor_frames()[0])


def test_static_scene_readout_cycles(rng):
    frame = rng.integers(0, 2, size=(1, 4, 3))
    stream = shutter.simulate_readout(shutter.ImageSequence(frame), 8)
    for r in stream.records:
        assert list(r.pixels) == frame[0, r.t % 4].tolist()
    out = shutter.deblur(stream, 1)
    assert np.array_equal(out.frames, frame)


def test_readout_matches_columnwise_compress():
    seq = shutter.rotor_sequence()
    stream = shutter.simulate_readout(seq, 20)
    for col in range(5):
        x = PeriodicVectorSignal(seq.frames[:, :, col].astype(float))
        y = compress(x, switch_mixer(5, exact=False), 20)
        assert [r.pixels[col] for r in stream.records] == y.values.tolist()


def test_schedule_phase0_rows():
    sched = shutter.readout_schedule(5, 4)
    assert [sched[(row, 0)] for row in range(1, 6)] == [0, 16, 12, 8, 4]
    assert len(sched) == 20


def test_deblur_rotor():
    seq = shutter.rotor_sequence()
    assert shutter.deblur(shutter.simulate_readout(seq, 20), 4) == seq


def test_random_round_trips(rng):
    for _ in range(100):
        seq = shutter.ImageSequence(rng.integers(0, 2, size=(3, 7, 4)))
        assert shutter.deblur(shutter.simulate_readout(seq, 21), 3) == seq


def test_deblur_errors():
    seq = shutter.rotor_sequence()
    with pytest.raises(InsufficientHorizon) as info:
        shutter.deblur(shutter.simulate_readout(seq, 19), 4)
    assert info.value.required == 20
    with pytest.raises(NotLossless) as info:
        shutter.deblur(shutter.simulate_readout(seq, 20), 5)
    assert (1, 1) in info.value.uncovered
    assert shutter.unread_pairs(2, 4) == [(1, 1), (1, 3), (2, 0), (2, 2)]


def test_stream_validation():
    rec = shutter.ReadoutRecord(0, 2, (0, 1))
    with pytest.raises(PreconditionError):
        shutter.ReadoutStream((rec,), 3)
    with pytest.raises(PreconditionError):
        shutter.ImageSequence(np.full((1, 2, 2), 3), max_val=1)


def test_rotor_pixel_permutation_reproduces_frames():
    spec = shutter.rotor_pixel_permutation()
    assert spec.order == 8 and sorted(spec.cycle_lengths)[-2:] == [8, 8]
    frames = shutter.rotor_frames()
    traj = discrete.permutation_trajectory(spec, frames[0].reshape(-1))
    for t in range(8):
        assert np.array_equal(traj.samples[t].reshape(5, 5), frames[t % 4])

import numpy as np
import pytest
from scipy.io import wavfile

from lcwt.errors import NonUniformGrid, ParseError, UnsupportedEncoding
from lcwt.io import ingest, parse_builtin, read_csv
from lcwt.signals import builtin_chirp


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_csv_two_columns(tmp_path):
    f = read_csv(write(tmp_path, "a.csv", "0,1\n0.5,2\n1,3"))
    assert f.t0 == 0.0 and f.dt == 0.5
    np.testing.assert_array_equal(f.values, [1, 2, 3])


def test_csv_three_columns_with_header(tmp_path):
    f = ingest(write(tmp_path, "b.csv", "t,re,im\n-1,1,2\n-0.75,0,-1\n-0.5,3,0\n"))
    assert (f.t0, f.dt) == (-1.0, 0.25)
    np.testing.assert_array_equal(f.values, [1 + 2j, -1j, 3])


@pytest.mark.parametrize(
    "text, row",
    [
        ("0,1\n0.5,2\n1.2,3\n1.5,4\n", 3),
        ("t,x\n0,1\n0.5,2\n1,3\n1.6,4\n2,5\n", 5),
    ],
)
def test_csv_nonuniform_names_row(tmp_path, text, row):
    with pytest.raises(NonUniformGrid, match=f"row {row}:") as info:
        read_csv(write(tmp_path, "c.csv", text))
    assert info.value.row == row


@pytest.mark.parametrize(
    "text, row",
    [("0,1\n1,2,3,4\n", 2), ("0,1\n0.5,x\n", 2), ("0\n", 1)],
)
def test_csv_parse_errors(tmp_path, text, row):
    with pytest.raises(ParseError) as info:
        read_csv(write(tmp_path, "d.csv", text))
    assert info.value.row == row


def test_csv_needs_two_samples(tmp_path):
    with pytest.raises(ParseError):
        read_csv(write(tmp_path, "e.csv", "0,1\n"))


def test_wav_int16(tmp_path):
    data = np.array([0, 16384, -32768, 32767], dtype=np.int16)
    wavfile.write(tmp_path / "a.wav", 8000, data)
    f = ingest(tmp_path / "a.wav")
    assert f.dt == 1.25e-4 and f.t0 == 0.0
    np.testing.assert_array_equal(f.values, [0, 0.5, -1, 32767 / 32768])
    assert np.all(f.values.real >= -1) and np.all(f.values.real < 1)


def test_wav_int32_and_float(tmp_path):
    wavfile.write(tmp_path / "i.wav", 1000, np.array([-(2**31), 2**30], dtype=np.int32))
    np.testing.assert_array_equal(ingest(tmp_path / "i.wav").values, [-1, 0.5])
    wavfile.write(tmp_path / "f.wav", 1000, np.array([0.25, -0.5], dtype=np.float32))
    np.testing.assert_array_equal(ingest(tmp_path / "f.wav", "wav").values, [0.25, -0.5])


def test_wav_rejects_stereo_and_8bit(tmp_path):
    wavfile.write(tmp_path / "s.wav", 8000, np.zeros((8, 2), dtype=np.int16))
    with pytest.raises(UnsupportedEncoding):
        ingest(tmp_path / "s.wav")
    wavfile.write(tmp_path / "u.wav", 8000, np.full(8, 128, dtype=np.uint8))
    with pytest.raises(UnsupportedEncoding):
        ingest(tmp_path / "u.wav")


def test_wav_garbage(tmp_path):
    (tmp_path / "g.wav").write_bytes(b"not a wave file")
    with pytest.raises(ParseError):
        ingest(tmp_path / "g.wav")


def test_builtin_chirp_matches_generator():
    f = parse_builtin("builtin:chirp(f0=2,f1=20,T=4)")
    g = builtin_chirp(2.0, 20.0, 4.0)
    assert f.same_grid(g)
    np.testing.assert_array_equal(f.values, g.values)
    assert ingest("builtin:chirp").same_grid(g)


def test_builtin_chirp_instantaneous_frequency():
    f = parse_builtin("builtin:chirp(f0=2,f1=20,T=4,n=4096)")
    phase = np.unwrap(np.angle(f.values))
    inst = np.gradient(phase, f.dt) / (2 * np.pi)
    t = f.times
    for tt, hz in [(-2.0, 2.0), (0.0, 11.0), (2.0, 20.0)]:
        assert inst[np.argmin(np.abs(t - tt))] == pytest.approx(hz, abs=0.05)


@pytest.mark.parametrize("spec", ["builtin:noise", "builtin:chirp(f0)", "builtin:chirp(q=1)"])
def test_builtin_errors(spec):
    with pytest.raises(ParseError):
        parse_builtin(spec)


def test_unknown_format(tmp_path):
    with pytest.raises(ParseError):
        ingest(write(tmp_path, "x.txt", "0,1\n1,2\n"))

import struct

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from PIL import Image

from se2recon import gen_random_map
from se2recon.errors import FormatError
from se2recon.formats import (HEADER_SIZE, parse_config, read_config, read_image, read_map,
                              read_report, read_stack, to_uint8, write_image, write_map,
                              write_report, write_stack)
from se2recon.reconstruction import RunReport


def test_header_layout():
    assert HEADER_SIZE == 16


def test_stack_round_trip_bit_identical(tmp_path, rng):
    F = rng.standard_normal((3, 8, 8)) + 1j * rng.standard_normal((3, 8, 8))
    F[0, 0, 0] = complex(-0.0, np.finfo(float).tiny / 2)
    path = tmp_path / "a.se2c"
    write_stack(path, F)
    assert path.stat().st_size == 16 + 16 * 64 * 3
    G = read_stack(path)
    assert G.tobytes() == F.astype(complex).tobytes()
    write_stack(tmp_path / "b.se2c", G)
    assert (tmp_path / "b.se2c").read_bytes() == path.read_bytes()


def test_stack_byte_layout(tmp_path):
    F = np.zeros((2, 2, 2), dtype=complex)
    F[1, 0, 1] = 1.5 - 2j
    path = tmp_path / "s.se2c"
    write_stack(path, F)
    blob = path.read_bytes()
    assert blob[:4] == b"SE2C"
    assert struct.unpack_from("<HII", blob, 4)[0] == 1
    assert struct.unpack_from("<II", blob, 8) == (2, 2)
    k = (1 * 4 + 0 * 2 + 1)
    assert struct.unpack_from("<dd", blob, 16 + 16 * k) == (1.5, -2.0)


def test_map_round_trip_and_size(tmp_path):
    fmap = gen_random_map(512, 12, seed=3)
    path = tmp_path / "m.se2m"
    write_map(path, fmap)
    assert path.stat().st_size == 16 + 2 * 512 ** 2
    back = read_map(path)
    assert back == fmap and back.kind == "file"
    write_map(tmp_path / "n.se2m", back)
    assert (tmp_path / "n.se2m").read_bytes() == path.read_bytes()


def test_bad_magic_names_offset(tmp_path):
    path = tmp_path / "x.se2c"
    path.write_bytes(b"NOPE" + bytes(12))
    with pytest.raises(FormatError, match="offset 0"):
        read_stack(path)


def test_payload_mismatch_and_truncation(tmp_path, rng):
    path = tmp_path / "x.se2c"
    write_stack(path, np.zeros((1, 4, 4)))
    path.write_bytes(path.read_bytes()[:-1])
    with pytest.raises(FormatError, match="offset 16"):
        read_stack(path)
    with pytest.raises(FormatError, match="bad magic"):
        read_map(path)
    path.write_bytes(b"SE2C")
    with pytest.raises(FormatError, match="truncated"):
        read_stack(path)


def test_map_entry_out_of_range(tmp_path):
    path = tmp_path / "m.se2m"
    path.write_bytes(struct.pack("<4sH2xII", b"SE2M", 1, 2, 3) + np.array([0, 1, 2, 3], "<u2").tobytes())
    with pytest.raises(FormatError, match="offset 22"):
        read_map(path)


def test_to_uint8_clamp_and_half_even():
    vals = np.array([-5.0, 0.5, 1.5, 2.5, 254.5, 300.0, 3.49])
    np.testing.assert_array_equal(to_uint8(vals), [0, 0, 2, 2, 254, 255, 3])


@pytest.mark.parametrize("suffix", [".pgm", ".png"])
def test_image_round_trip(tmp_path, rng, suffix):
    img = rng.integers(0, 256, (16, 16)).astype(float)
    path = tmp_path / f"i{suffix}"
    write_image(path, img)
    back = read_image(path)
    assert back.dtype == np.float64
    np.testing.assert_array_equal(back, img)


def test_pgm_is_binary_p5(tmp_path):
    path = tmp_path / "i.pgm"
    write_image(path, np.zeros((4, 4)))
    assert path.read_bytes()[:2] == b"P5"


def test_image_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        read_image(tmp_path / "missing.pgm")
    with pytest.raises(FormatError):
        read_image(tmp_path / "x.jpg")
    Image.fromarray(np.zeros((4, 6), np.uint8)).save(tmp_path / "rect.png")
    with pytest.raises(FormatError):
        read_image(tmp_path / "rect.png")
    Image.fromarray(np.zeros((4, 4, 3), np.uint8)).save(tmp_path / "rgb.png")
    with pytest.raises(FormatError):
        read_image(tmp_path / "rgb.png")
    (tmp_path / "junk.png").write_bytes(b"not an image")
    with pytest.raises(FormatError):
        read_image(tmp_path / "junk.png")


def _report(has_truth):
    return RunReport(iters=np.array([1, 5, 9]), residual=np.array([0.5, 0.25, 0.125]),
                     delta=np.array([3.0, 2.0, 1.0]) if has_truth else np.array([]),
                     delta_raw=np.array([3.5, 2.5, 1.5]) if has_truth else np.array([]),
                     stop_reason="max_iters", n_iter=9, first_image=np.zeros((2, 2)),
                     final_image=np.zeros((2, 2)), max_imag=0.0, has_truth=has_truth)


def test_report_csv(tmp_path):
    path = tmp_path / "r.csv"
    write_report(path, _report(True))
    lines = path.read_text().splitlines()
    assert lines[0] == "iter,delta_pct,delta_raw_pct,residual"
    assert lines[1] == "1,3.0,3.5,0.5"
    cols = read_report(path)
    np.testing.assert_array_equal(cols["iter"], [1, 5, 9])
    np.testing.assert_array_equal(cols["delta_pct"], [3, 2, 1])
    write_report(path, _report(False))
    assert path.read_text().splitlines()[2] == "5,,,0.25"
    assert np.isnan(read_report(path)["delta_pct"]).all()


def test_parse_config(tmp_path):
    text = """
    # bench settings
    n = 64
    m = 8          # angles
    map.kind = random, pinwheel
    map.rho = 0.8,0.3
    iters = 100
    """
    cfg = parse_config(text)
    assert cfg == {"n": 64, "m": 8, "map.kind": "random, pinwheel", "map.rho": "0.8,0.3", "iters": 100}
    (tmp_path / "c.cfg").write_text("s = 3.5\n")
    assert read_config(tmp_path / "c.cfg") == {"s": 3.5}


@pytest.mark.parametrize("text, msg", [("bogus = 1", "unknown key"), ("n 64", "key = value"),
                                       ("n = sixty", "bad value")])
def test_parse_config_errors(text, msg):
    with pytest.raises(FormatError, match=msg):
        parse_config(text)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(allow_nan=False, allow_infinity=False, width=64), min_size=8, max_size=8))
def test_stack_round_trip_property(tmp_path_factory, vals):
    F = np.array(vals, dtype=float).view(complex).reshape(1, 2, 2)
    path = tmp_path_factory.mktemp("h") / "p.se2c"
    write_stack(path, F)
    assert read_stack(path).tobytes() == F.tobytes()

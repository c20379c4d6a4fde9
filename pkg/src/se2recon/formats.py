"""File formats: grayscale images, coefficient stacks, feature maps, reports, configs.

Binary containers share a 16-byte little-endian header::

    offset 0   magic    4 bytes  (b"SE2C" stacks, b"SE2M" maps)
    offset 4   version  u16      (1)
    offset 6   reserved 2 bytes  (zero)
    offset 8   n        u32
    offset 12  m        u32

Stacks carry ``n*n*m`` complex values as ``(re, im)`` float64 pairs, plane
major (angle outermost, then row, then column). Maps carry ``n*n`` u16
angle indices in row-major order.
"""
import csv
import struct
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import FormatError
from .maps import FeatureMap

STACK_MAGIC = b"SE2C"
MAP_MAGIC = b"SE2M"
VERSION = 1
_HEADER = struct.Struct("<4sH2xII")
HEADER_SIZE = _HEADER.size

IMAGE_SUFFIXES = {".pgm", ".png"}
REPORT_HEADER = ["iter", "delta_pct", "delta_raw_pct", "residual"]


# -- images -----------------------------------------------------------------

def read_image(path):
    """Read an 8-bit grayscale PGM (P5) or PNG as a float64 ``(n, n)`` array."""
    path = Path(path)
    if path.suffix.lower() not in IMAGE_SUFFIXES:
        raise FormatError(f"{path}: unsupported image format (expected .pgm or .png)")
    if not path.is_file():
        raise FileNotFoundError(f"{path}: no such image file")
    try:
        with Image.open(path) as im:
            if im.mode != "L":
                raise FormatError(f"{path}: expected 8-bit grayscale, got mode {im.mode!r}")
            data = np.asarray(im, dtype=np.uint8)
    except OSError as exc:
        raise FormatError(f"{path}: cannot decode image ({exc})") from exc
    if data.ndim != 2 or data.shape[0] != data.shape[1] or data.shape[0] % 2:
        raise FormatError(f"{path}: image must be square with even size, got {data.shape}")
    return data.astype(np.float64)


def to_uint8(img):
    """Clamp to [0, 255] and round half to even."""
    return np.rint(np.clip(np.real(img), 0, 255)).astype(np.uint8)


def write_image(path, img):
    path = Path(path)
    fmt = {".pgm": "PPM", ".png": "PNG"}.get(path.suffix.lower())
    if fmt is None:
        raise FormatError(f"{path}: unsupported image format (expected .pgm or .png)")
    Image.fromarray(to_uint8(img)).save(path, format=fmt)


def scaled_to_uint8(a):
    """Linearly rescale an array to the full 0-255 range for display."""
    a = np.asarray(a, dtype=float)
    lo, hi = float(a.min()), float(a.max())
    if hi <= lo:
        return np.zeros(a.shape)
    return 255.0 * (a - lo) / (hi - lo)


# -- binary containers ---------------------------------------------------------

def _read_header(blob, magic, path):
    if len(blob) < HEADER_SIZE:
        raise FormatError(f"{path}: truncated header at offset {len(blob)} (need {HEADER_SIZE} bytes)")
    got, version, n, m = _HEADER.unpack_from(blob)
    if got != magic:
        raise FormatError(f"{path}: bad magic {got!r} at offset 0 (expected {magic!r})")
    if version != VERSION:
        raise FormatError(f"{path}: unsupported version {version} at offset 4")
    return n, m


def write_stack(path, F):
    F = np.asarray(F, dtype="<c16")
    if F.ndim != 3 or F.shape[1] != F.shape[2]:
        raise FormatError(f"stack must have shape (m, n, n), got {F.shape}")
    m, n, _ = F.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(STACK_MAGIC, VERSION, n, m))
        fh.write(np.ascontiguousarray(F).tobytes())


def read_stack(path):
    blob = Path(path).read_bytes()
    n, m = _read_header(blob, STACK_MAGIC, path)
    expected = HEADER_SIZE + 16 * n * n * m
    if len(blob) != expected:
        raise FormatError(f"{path}: payload size mismatch at offset {HEADER_SIZE}: "
                          f"file has {len(blob)} bytes, expected {expected}")
    data = np.frombuffer(blob, dtype="<c16", offset=HEADER_SIZE)
    return data.reshape(m, n, n).astype(complex)


def write_map(path, fmap):
    if fmap.m > 65536:
        raise FormatError(f"angle count {fmap.m} does not fit in u16 entries")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAP_MAGIC, VERSION, fmap.n, fmap.m))
        fh.write(np.ascontiguousarray(fmap.theta, dtype="<u2").tobytes())


def read_map(path):
    blob = Path(path).read_bytes()
    n, m = _read_header(blob, MAP_MAGIC, path)
    expected = HEADER_SIZE + 2 * n * n
    if len(blob) != expected:
        raise FormatError(f"{path}: payload size mismatch at offset {HEADER_SIZE}: "
                          f"file has {len(blob)} bytes, expected {expected}")
    theta = np.frombuffer(blob, dtype="<u2", offset=HEADER_SIZE).reshape(n, n)
    bad = np.flatnonzero(theta >= m)
    if bad.size:
        raise FormatError(f"{path}: entry {theta.flat[bad[0]]} >= m={m} at offset {HEADER_SIZE + 2 * bad[0]}")
    return FeatureMap(theta.astype(np.intp), m, kind="file")


# -- reports -------------------------------------------------------------------

def write_report(path, report):
    """CSV with one row per recorded iteration; delta columns blank without ground truth."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(REPORT_HEADER)
        for k, n in enumerate(report.iters):
            if report.has_truth:
                d, draw = repr(float(report.delta[k])), repr(float(report.delta_raw[k]))
            else:
                d = draw = ""
            w.writerow([int(n), d, draw, repr(float(report.residual[k]))])


def read_report(path):
    """Read a report CSV into a dict of column arrays (blank cells become NaN)."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != REPORT_HEADER:
        raise FormatError(f"{path}: expected header {','.join(REPORT_HEADER)}")
    cols = list(zip(*rows[1:])) if len(rows) > 1 else [()] * len(REPORT_HEADER)
    out = {}
    for name, col in zip(REPORT_HEADER, cols):
        out[name] = np.array([float(v) if v else np.nan for v in col])
    out["iter"] = out["iter"].astype(int)
    return out


# -- configuration -------------------------------------------------------------

CONFIG_KEYS = {
    "n": int, "m": int, "s": float, "p": float, "r": float,
    "map.kind": str, "map.rho": str, "map.seed": int, "map.j": int, "map.n_alpha": int,
    "iters": int, "record_every": int, "images": str, "out": str,
}


def parse_config(text, source="<config>"):
    """Parse flat ``key = value`` lines; ``#`` starts a comment.

    Recognized keys and their types are listed in ``CONFIG_KEYS``.
    """
    cfg = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FormatError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise FormatError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            cfg[key] = CONFIG_KEYS[key](value)
        except ValueError as exc:
            raise FormatError(f"{source}:{lineno}: bad value for {key}: {value!r}") from exc
    return cfg


def read_config(path):
    return parse_config(Path(path).read_text(), source=str(path))

"""File formats: LT4D tensors, binary PPM frames and key=value manifests.

LT4D layout (all little-endian)::

    b"LT4D" | u32 version = 1 | u64 n1 | u64 n2 | u64 n3 | u64 n4 | f64 data[n1*n2*n3*n4]

with data in C order (``i`` slowest, ``l`` fastest).
"""

from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

from .errors import FormatError
from .transforms import as_real, make_transform

__all__ = [
    "LT4D_MAGIC",
    "LT4D_VERSION",
    "write_lt4d",
    "read_lt4d",
    "read_ppm",
    "write_ppm",
    "read_ppm_dir",
    "write_manifest",
    "read_manifest",
    "save_factors",
    "load_factors",
]

LT4D_MAGIC = b"LT4D"
LT4D_VERSION = 1
_HEADER = struct.Struct("<4sI4Q")


def write_lt4d(path, A):
    A = np.asarray(A)
    if A.ndim != 4:
        raise FormatError(f"LT4D stores 4-D tensors, got shape {A.shape}")
    try:
        A = as_real(A)
    except ValueError as exc:
        raise FormatError(f"LT4D stores real data only: {exc}") from None
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(LT4D_MAGIC, LT4D_VERSION, *A.shape))
        fh.write(np.ascontiguousarray(A, dtype="<f8").tobytes())


def read_lt4d(path):
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) < _HEADER.size:
            raise FormatError(f"{path}: truncated LT4D header")
        magic, version, *dims = _HEADER.unpack(head)
        if magic != LT4D_MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r}, expected {LT4D_MAGIC!r}")
        if version != LT4D_VERSION:
            raise FormatError(f"{path}: unsupported LT4D version {version}")
        count = int(np.prod(dims))
        data = fh.read()
    if len(data) != 8 * count:
        raise FormatError(f"{path}: expected {8 * count} data bytes for dims {tuple(dims)}, got {len(data)}")
    return np.frombuffer(data, dtype="<f8").astype(np.float64).reshape(dims)


def _ppm_tokens(buf, count):
    """Read ``count`` whitespace-separated header tokens, skipping comments."""
    tokens, pos = [], 0
    while len(tokens) < count:
        while pos < len(buf) and buf[pos:pos + 1].isspace():
            pos += 1
        if pos < len(buf) and buf[pos:pos + 1] == b"#":
            while pos < len(buf) and buf[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(buf) and not buf[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise FormatError("truncated PPM header")
        tokens.append(buf[start:pos])
    # exactly one whitespace byte separates the header from the raster
    return tokens, pos + 1


def read_ppm(path):
    """Binary P6 image with maxval 255 as an ``(rows, cols, 3)`` float array in [0, 1]."""
    buf = Path(path).read_bytes()
    tokens, pos = _ppm_tokens(buf, 4)
    if tokens[0] != b"P6":
        raise FormatError(f"{path}: not a binary PPM (magic {tokens[0]!r})")
    try:
        cols, rows, maxval = (int(tok) for tok in tokens[1:])
    except ValueError:
        raise FormatError(f"{path}: malformed PPM header") from None
    if maxval != 255:
        raise FormatError(f"{path}: only maxval 255 is supported, got {maxval}")
    raster = buf[pos:pos + rows * cols * 3]
    if len(raster) != rows * cols * 3:
        raise FormatError(f"{path}: truncated PPM raster")
    return np.frombuffer(raster, dtype=np.uint8).reshape(rows, cols, 3) / 255.0


def write_ppm(path, image):
    """Write an ``(rows, cols, 3)`` image with values in [0, 1] as binary P6."""
    image = np.asarray(image)
    if image.ndim != 3 or image.shape[2] != 3:
        raise FormatError(f"expected an (rows, cols, 3) image, got {image.shape}")
    data = np.clip(np.rint(image * 255.0), 0, 255).astype(np.uint8)
    rows, cols = image.shape[:2]
    with open(path, "wb") as fh:
        fh.write(f"P6\n{cols} {rows}\n255\n".encode("ascii"))
        fh.write(data.tobytes())


def read_ppm_dir(path):
    """All ``*.ppm`` frames of a directory, in lexicographic file-name order."""
    path = Path(path)
    if not path.is_dir():
        raise FileNotFoundError(f"{path}: not a directory")
    names = sorted(p for p in os.listdir(path) if p.lower().endswith(".ppm"))
    if not names:
        raise FormatError(f"{path}: no .ppm frames found")
    return [read_ppm(path / name) for name in names]


def write_manifest(path, entries):
    lines = []
    for key, value in entries.items():
        if "=" in key or "\n" in key or "\n" in str(value):
            raise FormatError(f"manifest key/value not representable: {key!r}={value!r}")
        lines.append(f"{key}={value}\n")
    Path(path).write_text("".join(lines))


def read_manifest(path):
    entries = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise FormatError(f"{path}:{n}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        entries[key.strip()] = value.strip()
    return entries


def save_factors(directory, factors):
    """Write L-SVD factors as ``U.lt4d``, ``S.lt4d``, ``Vh.lt4d`` plus ``manifest.txt``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name in ("U", "S", "Vh"):
        write_lt4d(directory / f"{name}.lt4d", getattr(factors, name))
    n1, n2, n3, n4 = factors.dims
    write_manifest(
        directory / "manifest.txt",
        {
            "kind": "lsvd",
            "transform": factors.transform.kind.value,
            "dims": f"{n1},{n2},{n3},{n4}",
            "canonical": int(factors.canonical),
        },
    )


def load_factors(directory):
    """Read factors written by :func:`save_factors`; slice data is recomputed from them."""
    from .decomp import LSvdFactors
    from .tensor import to_slices

    directory = Path(directory)
    meta = read_manifest(directory / "manifest.txt")
    try:
        n1, n2, n3, n4 = (int(v) for v in meta["dims"].split(","))
        t = make_transform(meta["transform"], n3, n4)
        canonical = bool(int(meta.get("canonical", "0")))
    except (KeyError, ValueError) as exc:
        raise FormatError(f"{directory}: bad factor manifest ({exc})") from None
    U, S, Vh = (read_lt4d(directory / f"{name}.lt4d") for name in ("U", "S", "Vh"))
    if U.shape != (n1, n1, n3, n4) or S.shape != (n1, n2, n3, n4) or Vh.shape != (n2, n2, n3, n4):
        raise FormatError(f"{directory}: factor shapes disagree with manifest dims")
    k = min(n1, n2)
    S_hat = to_slices(t, S)
    sigma = np.real(S_hat[:, np.arange(k), np.arange(k)])
    return LSvdFactors(
        U=U, S=S, Vh=Vh, transform=t, sigma=sigma,
        u_hat=to_slices(t, U), vh_hat=to_slices(t, Vh), canonical=canonical,
    )

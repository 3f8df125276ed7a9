"""8-bit grayscale image input (PGM P2/P5, PNG) and PGM (P5) artifact output."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

_WHITESPACE = frozenset(b" \t\r\n\x0b\x0c")


def _next_token(data: bytes, pos: int):
    """Advance past whitespace and '#' comments, return (token, end position)."""
    n = len(data)
    while pos < n:
        c = data[pos]
        if c in _WHITESPACE:
            pos += 1
        elif c == 0x23:  # '#'
            while pos < n and data[pos] not in (0x0A, 0x0D):
                pos += 1
        else:
            break
    start = pos
    while pos < n and data[pos] not in _WHITESPACE:
        pos += 1
    if start == pos:
        raise ValueError("truncated PGM header")
    return data[start:pos], pos


def _read_pgm(data: bytes):
    magic, pos = _next_token(data, 0)
    if magic not in (b"P2", b"P5"):
        raise ValueError(f"unsupported PGM magic {magic!r}")
    width, pos = _next_token(data, pos)
    height, pos = _next_token(data, pos)
    maxval, pos = _next_token(data, pos)
    width, height, maxval = int(width), int(height), int(maxval)
    if width < 1 or height < 1:
        raise ValueError("PGM dimensions must be positive")
    if not 0 < maxval <= 255:
        raise ValueError(f"only 8-bit PGM supported, got maxval {maxval}")
    count = width * height
    if magic == b"P5":
        # exactly one whitespace byte separates the header from the raster
        raster = data[pos + 1 : pos + 1 + count]
        if len(raster) != count:
            raise ValueError("PGM raster shorter than promised by its header")
        values = np.frombuffer(raster, dtype=np.uint8)
    else:
        values = np.empty(count, dtype=np.uint16)
        for i in range(count):
            token, pos = _next_token(data, pos)
            values[i] = int(token)
    if values.max(initial=0) > maxval:
        raise ValueError("PGM sample exceeds declared maxval")
    return values.reshape(height, width).astype(np.float64)


def _read_png(path):
    with Image.open(path) as img:
        if img.mode == "1":
            img = img.convert("L")
        if img.mode == "L":
            return np.asarray(img, dtype=np.float64)
        if img.mode in ("I", "I;16"):
            return np.asarray(img.convert("I"), dtype=np.float64)
        raise ValueError(f"grayscale PNG required, got mode {img.mode!r}")


def read_image(path) -> np.ndarray:
    """Read a grayscale image as a float64 grid of its raw intensity levels."""
    path = Path(path)
    data = path.read_bytes()
    if data[:2] in (b"P2", b"P5"):
        return _read_pgm(data)
    if data[:4] == b"\x89PNG":
        return _read_png(path)
    raise ValueError(f"{path}: not a PGM (P2/P5) or PNG grayscale image")


def read_ground_truth(path, n_phases: int) -> np.ndarray:
    """Read a label mask whose sorted distinct intensities define phases 0..N-1."""
    img = read_image(path)
    levels = np.unique(img)
    if levels.size != n_phases:
        raise ValueError(
            f"{path}: found {levels.size} intensity levels, expected {n_phases}"
        )
    return np.searchsorted(levels, img).astype(np.int64)


def write_pgm(path, img8):
    """Write a uint8 grid as binary PGM (P5, maxval 255)."""
    img8 = np.asarray(img8)
    if img8.ndim != 2:
        raise ValueError("PGM output must be 2-D")
    img8 = img8.astype(np.uint8)
    height, width = img8.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + img8.tobytes())


def write_unit_interval(path, img):
    """Write a real-valued grid, clipped to [0, 1], at 8-bit resolution."""
    img = np.clip(np.asarray(img, dtype=np.float64), 0.0, 1.0)
    write_pgm(path, np.rint(255.0 * img))


def write_label_mask(path, labels, n_phases: int):
    """Write a label mask with phase k rendered as round(255*k/(N-1))."""
    labels = np.asarray(labels)
    if n_phases < 2:
        raise ValueError("need at least 2 phases")
    if labels.min() < 0 or labels.max() >= n_phases:
        raise ValueError(f"labels must lie in [0, {n_phases})")
    lut = np.rint(255.0 * np.arange(n_phases) / (n_phases - 1)).astype(np.uint8)
    write_pgm(path, lut[labels])


def write_membership_maps(directory, U, stem: str = "membership"):
    """Write each phase's membership grid as <stem>_<k>.pgm; returns the paths."""
    directory = Path(directory)
    U = np.asarray(U, dtype=np.float64)
    paths = []
    for k in range(U.shape[0]):
        path = directory / f"{stem}_{k}.pgm"
        write_unit_interval(path, U[k])
        paths.append(path)
    return paths

"""Netpbm graymap (PGM) reading and writing, maxval 255 only."""

from __future__ import annotations

import os

import numpy as np


class PgmFormatError(ValueError):
    pass


_WHITESPACE = b" \t\r\n\v\f"


def _header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated tokens, skipping ``#`` comments.

    Returns the tokens and the offset just past the last one.
    """
    tokens = []
    pos = 0
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos] in _WHITESPACE:
            pos += 1
        if pos < n and data[pos] == ord("#"):
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
            continue
        if pos >= n:
            raise PgmFormatError("truncated header")
        start = pos
        while pos < n and data[pos] not in _WHITESPACE and data[pos] != ord("#"):
            pos += 1
        tokens.append(data[start:pos])
    return tokens, pos


def _positive_int(tok: bytes, what: str) -> int:
    try:
        value = int(tok)
    except ValueError:
        raise PgmFormatError(f"bad {what}: {tok!r}") from None
    if value <= 0:
        raise PgmFormatError(f"{what} must be positive, got {value}")
    return value


def read_pgm(data: bytes) -> np.ndarray:
    """Decode a P5 (binary) or P2 (ASCII) graymap."""
    if data[:2] not in (b"P5", b"P2"):
        raise PgmFormatError(f"not a PGM file (magic {data[:2]!r})")
    tokens, pos = _header_tokens(data, 4)
    width = _positive_int(tokens[1], "width")
    height = _positive_int(tokens[2], "height")
    maxval = _positive_int(tokens[3], "maxval")
    if maxval != 255:
        raise PgmFormatError(f"only maxval 255 is supported, got {maxval}")
    npix = width * height

    if tokens[0] == b"P5":
        # exactly one whitespace byte separates the header from the raster
        if pos >= len(data) or data[pos] not in _WHITESPACE:
            raise PgmFormatError("truncated data")
        raster = data[pos + 1:pos + 1 + npix]
        if len(raster) < npix:
            raise PgmFormatError(f"truncated data: expected {npix} bytes, got {len(raster)}")
        pixels = np.frombuffer(raster, dtype=np.uint8)
    else:
        values = data[pos:].split()
        if len(values) < npix:
            raise PgmFormatError(f"truncated data: expected {npix} values, got {len(values)}")
        try:
            pixels = np.array([int(v) for v in values[:npix]], dtype=np.int64)
        except ValueError:
            raise PgmFormatError("non-numeric pixel value") from None
        if pixels.min() < 0 or pixels.max() > 255:
            raise PgmFormatError("pixel value outside [0, 255]")
    return pixels.astype(np.uint8).reshape(height, width)


def write_pgm(img: np.ndarray, comment: str | None = None) -> bytes:
    """Encode as binary P5 with maxval 255 and an optional single comment line."""
    img = np.asarray(img)
    if img.ndim != 2 or img.size == 0:
        raise ValueError(f"expected a non-empty 2-D image, got shape {img.shape}")
    if img.dtype != np.uint8:
        if img.min() < 0 or img.max() > 255:
            raise ValueError("pixel values must lie in [0, 255]")
        img = img.astype(np.uint8)
    height, width = img.shape
    header = b"P5\n"
    if comment:
        header += b"# " + comment.replace("\n", " ").encode("ascii", "replace") + b"\n"
    header += f"{width} {height}\n255\n".encode("ascii")
    return header + np.ascontiguousarray(img).tobytes()


def load_pgm(path: str | os.PathLike) -> np.ndarray:
    with open(path, "rb") as f:
        return read_pgm(f.read())


def save_pgm(path: str | os.PathLike, img: np.ndarray, comment: str | None = None) -> None:
    with open(path, "wb") as f:
        f.write(write_pgm(img, comment))

"""Bit-exact PGM (P2/P5, maxval <= 255) reading and writing.

Images are 2-D uint8 numpy arrays.  Binary planes are 2-D uint8 arrays with
values in {0, 1}; on disk they are stored as ordinary PGM images using 0 and
255.  Only 8-bit grayscale is supported: PGM is the one format whose bytes
we can specify completely, and everything downstream needs exact integer
intensities.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "PgmError",
    "read_pgm",
    "write_pgm",
    "read_pgm_file",
    "write_pgm_file",
    "plane_to_image",
    "image_to_plane",
]

_WHITESPACE = b" \t\n\r\x0b\x0c"


class PgmError(ValueError):
    """Raised for malformed or unsupported PGM data."""


def _validate_image(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img)
    if img.ndim != 2 or img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError(f"image must be a non-empty 2-D array, got shape {img.shape}")
    if img.dtype != np.uint8:
        if not np.issubdtype(img.dtype, np.integer):
            raise ValueError(f"image dtype must be integer, got {img.dtype}")
        if img.min() < 0 or img.max() > 255:
            raise ValueError("image intensities must lie in [0, 255]")
        img = img.astype(np.uint8)
    return img


class _Tokenizer:
    """Pulls whitespace-delimited header tokens, skipping # comments."""

    def __init__(self, data: bytes, pos: int):
        self.data = data
        self.pos = pos

    def next_token(self) -> bytes:
        data, n = self.data, len(self.data)
        i = self.pos
        while i < n:
            c = data[i:i + 1]
            if c == b"#":
                while i < n and data[i:i + 1] not in (b"\n", b"\r"):
                    i += 1
            elif c in _WHITESPACE:
                i += 1
            else:
                break
        if i >= n:
            raise PgmError("malformed header: unexpected end of data")
        start = i
        while i < n and data[i:i + 1] not in _WHITESPACE and data[i:i + 1] != b"#":
            i += 1
        self.pos = i
        return data[start:i]

    def next_int(self, what: str) -> int:
        tok = self.next_token()
        try:
            return int(tok)
        except ValueError:
            raise PgmError(f"malformed header: bad {what} token {tok!r}") from None


def read_pgm(data: bytes) -> np.ndarray:
    """Parse PGM bytes into a (height, width) uint8 array.

    Accepts binary "P5" and ASCII "P2", arbitrary header whitespace, and
    ``#`` comment lines.  Stored intensities are returned exactly as
    written (no maxval rescaling).

    Raises
    ------
    PgmError
        Distinctly for a bad magic number, a malformed header, an
        unsupported maxval (> 255 or < 1), or a truncated payload.
    """
    if not isinstance(data, (bytes, bytearray, memoryview)):
        raise TypeError("read_pgm expects bytes")
    data = bytes(data)
    magic = data[:2]
    if magic not in (b"P5", b"P2"):
        raise PgmError(f"malformed header: not a PGM magic number: {magic!r}")
    tok = _Tokenizer(data, 2)
    width = tok.next_int("width")
    height = tok.next_int("height")
    maxval = tok.next_int("maxval")
    if width < 1 or height < 1:
        raise PgmError(f"malformed header: bad dimensions {width}x{height}")
    if maxval > 255 or maxval < 1:
        raise PgmError(f"unsupported maxval {maxval} (only maxval <= 255)")
    n = width * height

    if magic == b"P5":
        # exactly one whitespace byte separates maxval from the raster
        pos = tok.pos
        if pos >= len(data) or data[pos:pos + 1] not in _WHITESPACE:
            raise PgmError("malformed header: missing raster separator")
        pos += 1
        raster = data[pos:pos + n]
        if len(raster) < n:
            raise PgmError(
                f"truncated payload: expected {n} bytes, got {len(raster)}")
        flat = np.frombuffer(raster, dtype=np.uint8, count=n)
    else:
        flat = np.empty(n, dtype=np.uint8)
        for i in range(n):
            try:
                v = tok.next_int("sample")
            except PgmError:
                raise PgmError(
                    f"truncated payload: expected {n} samples, got {i}") from None
            if v < 0 or v > 255:
                raise PgmError(f"malformed header: sample {v} out of range")
            flat[i] = v
    return flat.reshape(height, width).copy()


def write_pgm(img: np.ndarray) -> bytes:
    """Serialize a uint8 image as binary P5 with maxval 255.

    ``read_pgm(write_pgm(img))`` is the identity, bit-exactly.
    """
    img = _validate_image(img)
    h, w = img.shape
    header = f"P5\n{w} {h}\n255\n".encode("ascii")
    return header + img.tobytes()


def read_pgm_file(path) -> np.ndarray:
    with open(path, "rb") as fh:
        return read_pgm(fh.read())


def write_pgm_file(path, img: np.ndarray) -> None:
    with open(path, "wb") as fh:
        fh.write(write_pgm(img))


def plane_to_image(plane: np.ndarray) -> np.ndarray:
    """Render a {0,1} binary plane as a {0,255} grayscale image."""
    plane = np.asarray(plane)
    if plane.ndim != 2:
        raise ValueError(f"plane must be 2-D, got shape {plane.shape}")
    if not np.isin(plane, (0, 1)).all():
        raise ValueError("plane values must be 0 or 1")
    return (plane.astype(np.uint8)) * np.uint8(255)


def image_to_plane(img: np.ndarray) -> np.ndarray:
    """Inverse of plane_to_image; rejects intensities other than 0 and 255."""
    img = _validate_image(img)
    if not np.isin(img, (0, 255)).all():
        bad = img[~np.isin(img, (0, 255))].flat[0]
        raise ValueError(f"image is not a rendered plane: intensity {bad}")
    return (img == 255).astype(np.uint8)

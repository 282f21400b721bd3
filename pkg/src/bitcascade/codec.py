"""Exact bitplane representation of grayscale images.

A grayscale image is converted to a rank field by histogram equalization
(each pixel replaced by its normalized rank), then split into binary planes
by iterated halving of the rank interval.  Splitting rank intervals at
their midpoints is the same thing as hierarchical median thresholding of
the original intensities, so the whole construction is invariant under any
strictly increasing remapping of the gray levels.

Ranks use the total order (intensity, row-major index): ties are broken by
pixel position, which makes every operation here exact integer arithmetic
with no floating-point thresholds.

A bitplane stack is a (depth, H, W) uint8 array of 0/1 values, most
significant plane first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "RankField",
    "MAX_DEPTH",
    "equalize",
    "decompose",
    "decompose_image",
    "recompose",
    "crop",
    "write_stack",
    "read_stack",
    "stack_plane_path",
]

MAX_DEPTH = 8


@dataclass(frozen=True)
class RankField:
    """Normalized per-pixel ranks of an image.

    ``ranks`` holds each pixel's position in the total intensity order as
    int64; the equalized value of pixel p is u(p) = (rank + 0.5) / N, kept
    implicit so bit extraction can stay exact.
    """

    ranks: np.ndarray  # (H, W) int64, a permutation of 0..N-1

    @property
    def shape(self) -> tuple[int, int]:
        return self.ranks.shape

    @property
    def size(self) -> int:
        return self.ranks.size

    @property
    def u(self) -> np.ndarray:
        """The equalized image as floats in (0, 1)."""
        return (self.ranks + 0.5) / self.size


def equalize(img: np.ndarray) -> RankField:
    """Histogram-equalize an image into a RankField.

    rank(p) is the position of p when pixels are sorted by intensity,
    ties broken by row-major index (a stable sort).
    """
    img = np.asarray(img)
    if img.ndim != 2 or img.size == 0:
        raise ValueError(f"image must be a non-empty 2-D array, got {img.shape}")
    flat = img.ravel()
    order = np.argsort(flat, kind="stable")
    ranks = np.empty(flat.size, dtype=np.int64)
    ranks[order] = np.arange(flat.size, dtype=np.int64)
    return RankField(ranks.reshape(img.shape))


def _check_depth(depth: int) -> int:
    depth = int(depth)
    if not 1 <= depth <= MAX_DEPTH:
        raise ValueError(f"depth must be in 1..{MAX_DEPTH}, got {depth}")
    return depth


def decompose(rf: RankField, depth: int = MAX_DEPTH) -> np.ndarray:
    """Split a rank field into its first ``depth`` binary planes.

    Plane k (1-based) is the k-th binary digit of u(p) = (rank + 0.5)/N,
    computed exactly: digit_k = floor(u * 2^k) mod 2.  Plane 1 is the
    median-thresholded image.
    """
    depth = _check_depth(depth)
    n = rf.size
    num = 2 * rf.ranks.astype(np.int64) + 1  # u = num / (2N), num odd
    planes = np.empty((depth, *rf.shape), dtype=np.uint8)
    for k in range(1, depth + 1):
        planes[k - 1] = (((num << (k - 1)) // n) & 1).astype(np.uint8)
    return planes


def decompose_image(img: np.ndarray, depth: int = MAX_DEPTH) -> np.ndarray:
    """decompose(equalize(img), depth)."""
    return decompose(equalize(img), depth)


def recompose(planes: np.ndarray) -> np.ndarray:
    """Weighted-sum inverse of decompose, rendered on [0, 255].

    Pixel value is sum_k 2^(depth-k) * plane_k, shifted left by
    (8 - depth) bits so shallow stacks still span the 8-bit range.
    For depth 8 this is the exact binary recomposition.
    """
    planes = np.asarray(planes)
    if planes.ndim != 3:
        raise ValueError(f"stack must be (depth, H, W), got {planes.shape}")
    depth = _check_depth(planes.shape[0])
    weights = (1 << np.arange(depth - 1, -1, -1, dtype=np.int64))
    val = np.tensordot(weights, planes.astype(np.int64), axes=(0, 0))
    return (val << (8 - depth)).astype(np.uint8)


def crop(a: np.ndarray, border: int) -> np.ndarray:
    """Remove ``border`` pixels from every side of the last two axes."""
    a = np.asarray(a)
    border = int(border)
    if border < 0:
        raise ValueError("border must be non-negative")
    if border == 0:
        return a
    h, w = a.shape[-2], a.shape[-1]
    if 2 * border >= min(h, w):
        raise ValueError(f"border {border} too large for {h}x{w}")
    return a[..., border:h - border, border:w - border]


def stack_plane_path(stem: str, k: int) -> str:
    """On-disk name of plane k (1-based) for a stack saved under ``stem``."""
    return f"{stem}.b{k}.pgm"


def write_stack(stem: str, planes: np.ndarray) -> list[str]:
    """Write each plane as <stem>.b<k>.pgm with values {0, 255}."""
    from . import pgm

    paths = []
    for k in range(planes.shape[0]):
        path = stack_plane_path(stem, k + 1)
        pgm.write_pgm_file(path, pgm.plane_to_image(planes[k]))
        paths.append(path)
    return paths


def read_stack(stem: str, depth: int) -> np.ndarray:
    """Read planes <stem>.b1.pgm .. <stem>.b<depth>.pgm back into a stack."""
    from . import pgm

    depth = _check_depth(depth)
    planes = []
    for k in range(1, depth + 1):
        planes.append(pgm.image_to_plane(pgm.read_pgm_file(stack_plane_path(stem, k))))
    return np.stack(planes)

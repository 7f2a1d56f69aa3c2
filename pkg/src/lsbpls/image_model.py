"""Lossless RGB carrier images and linear pixel addressing.

Pixels are numbered row-major: index ``X`` lives at row ``X // width``,
column ``X % width``.  Every other module relies on this convention.
"""
from __future__ import annotations

import os
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DecodeError, IndexOutOfRange, UnsupportedFormat

LOSSLESS_FORMATS = {"PNG": (".png",), "BMP": (".bmp", ".dib")}
_SAVE_FORMATS = {ext: fmt for fmt, exts in LOSSLESS_FORMATS.items() for ext in exts}

# modes that convert to 8-bit RGB without losing information
_CONVERTIBLE_MODES = {"1", "L", "P", "RGB"}
_ALPHA_MODES = {"RGBA", "LA", "PA"}


class Pixel(NamedTuple):
    r: int
    g: int
    b: int


@dataclass(frozen=True, eq=False)
class ImageMatrix:
    """An immutable ``height x width`` grid of 8-bit RGB pixels.

    ``pixels`` is a read-only ``uint8`` array of shape ``(height, width, 3)``.
    Use :meth:`copy_pixels` to get a writable buffer.
    """

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise ValueError(f"expected an (H, W, 3) array, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("image must have at least one row and one column")
        if arr.dtype != np.uint8:
            if arr.size and (arr.min() < 0 or arr.max() > 255):
                raise ValueError("channel values must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        arr = np.ascontiguousarray(arr)
        if arr is self.pixels:
            arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @classmethod
    def from_rows(cls, rows) -> ImageMatrix:
        """Build from nested ``[[(r, g, b), ...], ...]`` rows."""
        return cls(np.array(rows, dtype=np.int64))

    @classmethod
    def blank(cls, height: int, width: int, value: int = 0) -> ImageMatrix:
        return cls(np.full((height, width, 3), value, dtype=np.uint8))

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def total_pixels(self) -> int:
        return self.height * self.width

    def pixel(self, row: int, column: int) -> Pixel:
        r, g, b = self.pixels[row, column]
        return Pixel(int(r), int(g), int(b))

    def at(self, linear_index: int) -> Pixel:
        return self.pixel(*locate(linear_index, self.width, self.total_pixels))

    def copy_pixels(self) -> np.ndarray:
        return self.pixels.copy()

    def __eq__(self, other):
        if not isinstance(other, ImageMatrix):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(
            np.array_equal(self.pixels, other.pixels)
        )

    def __repr__(self):
        return f"ImageMatrix(height={self.height}, width={self.width})"


def locate(linear_index: int, width: int, total_pixels: int | None = None) -> tuple[int, int]:
    """Map a linear pixel number to ``(row, column)``.

    ``total_pixels`` (height * width) enables the range check; without it
    only negative indices are rejected.
    """
    if width < 1:
        raise ValueError("width must be positive")
    if linear_index < 0 or (total_pixels is not None and linear_index >= total_pixels):
        raise IndexOutOfRange(f"pixel index {linear_index} outside image of {total_pixels} pixels")
    return linear_index // width, linear_index % width


def load_image(path) -> ImageMatrix:
    path = os.fspath(path)
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    try:
        with Image.open(path) as im:
            fmt = im.format
            if fmt not in LOSSLESS_FORMATS:
                raise UnsupportedFormat(
                    f"{path}: {fmt or 'unknown'} is not a lossless format (use PNG or BMP)"
                )
            im.load()
            mode = im.mode
            if mode in _ALPHA_MODES:
                warnings.warn(f"{path}: dropping alpha channel", stacklevel=2)
            elif mode not in _CONVERTIBLE_MODES:
                raise UnsupportedFormat(f"{path}: pixel mode {mode} is not 8-bit RGB-compatible")
            rgb = im.convert("RGB") if mode != "RGB" else im
            arr = np.asarray(rgb, dtype=np.uint8)
    except UnidentifiedImageError as exc:
        raise DecodeError(f"{path}: cannot decode image") from exc
    except (SyntaxError, ValueError, EOFError, OSError) as exc:
        if isinstance(exc, FileNotFoundError):
            raise
        # PIL reports truncated/corrupt streams through these
        raise DecodeError(f"{path}: {exc}") from exc
    return ImageMatrix(arr)


def save_image(image: ImageMatrix, path) -> None:
    path = os.fspath(path)
    ext = os.path.splitext(path)[1].lower()
    fmt = _SAVE_FORMATS.get(ext)
    if fmt is None:
        raise UnsupportedFormat(f"{path}: refusing to write a non-lossless format")
    Image.fromarray(image.pixels).save(path, format=fmt)

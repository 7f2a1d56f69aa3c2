"""Parity embedding of hex text into locator-selected pixel triads.

Each character is written MSB first into the parities of the r,g,b,r,g,b,r,g
channels of three consecutive locator pixels.  The ninth channel (blue of
the third pixel) is never touched.  A channel whose parity already matches
is left alone; otherwise it is decremented, except 0 which becomes 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import CapacityExceeded, IndexOutOfRange, InvalidHexDigit, InvalidPls
from .image_model import ImageMatrix
from .pls import PIXELS_PER_CHAR, PixelLocatorSequence, Problem, validate_pls

BITS_PER_CHAR = 8
_HEX = frozenset("0123456789abcdef")


def set_parity(value: int, bit) -> int:
    """Force ``value`` to the parity of ``bit`` ('0'/'1' or 0/1) with a +-1 step."""
    if not 0 <= value <= 255:
        raise ValueError(f"channel value {value} outside [0, 255]")
    b = int(bit)
    if b not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    return kernels.set_parity(value, b)


@dataclass(frozen=True)
class EmbedPlan:
    payload: str
    pls: PixelLocatorSequence

    def __post_init__(self):
        bad = next((i for i, ch in enumerate(self.payload) if ch not in _HEX), None)
        if bad is not None:
            raise InvalidHexDigit(f"payload character {self.payload[bad]!r} at {bad} is not lowercase hex")
        if not self.payload:
            raise ValueError("payload must not be empty")
        if len(self.pls) != PIXELS_PER_CHAR * len(self.payload):
            raise CapacityExceeded(
                f"{len(self.payload)} characters need {PIXELS_PER_CHAR * len(self.payload)} "
                f"locator pixels, got {len(self.pls)}"
            )

    @property
    def char_count(self) -> int:
        return len(self.payload)


def _checked_indices(pls, total_pixels) -> np.ndarray:
    verdict = validate_pls(pls, total_pixels)
    if verdict.positions(Problem.INDEX_OUT_OF_RANGE):
        raise IndexOutOfRange(verdict.describe())
    if not verdict.ok:
        raise InvalidPls(verdict.describe())
    return np.ascontiguousarray(pls.as_array() if isinstance(pls, PixelLocatorSequence)
                                else np.asarray(pls, dtype=np.int64), dtype=np.int64)


def embed(cover: ImageMatrix, pls: PixelLocatorSequence, payload: str) -> ImageMatrix:
    """Return a stego copy of ``cover`` carrying ``payload``; ``cover`` is unchanged."""
    if len(pls) > cover.total_pixels:
        raise CapacityExceeded(f"locator has {len(pls)} pixels, image only {cover.total_pixels}")
    plan = EmbedPlan(payload, pls)
    idx = _checked_indices(plan.pls, cover.total_pixels)
    flat = cover.copy_pixels().reshape(-1)
    kernels.embed_bits(flat, idx, np.frombuffer(plan.payload.encode("ascii"), dtype=np.uint8))
    return ImageMatrix(flat.reshape(cover.pixels.shape))


def extract(stego: ImageMatrix, pls: PixelLocatorSequence) -> str:
    """Read one character per triad until the locator runs out.

    No hex check happens here; a wrong locator yields arbitrary characters.
    """
    idx = _checked_indices(pls, stego.total_pixels)
    raw = kernels.extract_bits(stego.pixels.reshape(-1), idx)
    return raw.decode("latin-1")


def capacity(image: ImageMatrix) -> int:
    return image.total_pixels // PIXELS_PER_CHAR

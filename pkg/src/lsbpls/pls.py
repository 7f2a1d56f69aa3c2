"""Pixel locator sequences: which pixels carry the payload, and in what order.

A sequence is drawn with a partial Fisher-Yates shuffle, so every ordered
selection of ``needed`` distinct pixels is equally likely.  Three pixels
hold one embedded character.
"""
from __future__ import annotations

import enum
import os
import struct
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import CapacityExceeded, IndexOutOfRange, InvalidPls, MalformedPls

MAGIC = b"PLS1"
PIXELS_PER_CHAR = 3
_HEADER = struct.Struct(">4sI")


@dataclass(frozen=True)
class PixelLocatorSequence:
    indices: tuple[int, ...]
    total_pixels: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __getitem__(self, item):
        return self.indices[item]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=np.int64)

    @property
    def char_count(self) -> int:
        return len(self.indices) // PIXELS_PER_CHAR


def required_pixels(message_length: int) -> int:
    """Pixels needed to embed ``message_length`` characters (3 per character)."""
    if message_length < 1:
        raise ValueError("message length must be at least 1")
    return PIXELS_PER_CHAR * message_length


def default_rng(seed=None) -> np.random.Generator:
    # PCG64; bounded draws use Lemire's unbiased method
    return np.random.default_rng(seed)


def draw_choices(total_pixels: int, needed: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform swap targets: step ``i`` draws from ``[0, total_pixels - i)``."""
    highs = total_pixels - np.arange(needed, dtype=np.int64)
    return rng.integers(0, highs, dtype=np.int64)


def generate_pls(total_pixels: int, needed: int, seed=None, *, rng=None) -> PixelLocatorSequence:
    if needed < 1:
        raise ValueError("need at least one pixel")
    if needed > total_pixels:
        raise CapacityExceeded(f"{needed} pixels requested but the image has only {total_pixels}")
    if rng is None:
        rng = default_rng(seed)
    choices = draw_choices(total_pixels, needed, rng)
    return sequence_from_choices(total_pixels, choices)


def sequence_from_choices(total_pixels: int, choices) -> PixelLocatorSequence:
    """Replay a shuffle from explicit swap targets (for enumeration tests)."""
    choices = np.ascontiguousarray(choices, dtype=np.int64)
    out = kernels.partial_shuffle(int(total_pixels), choices)
    return PixelLocatorSequence(tuple(int(i) for i in out), total_pixels)


class Problem(enum.Enum):
    DUPLICATE_INDEX = "duplicate index"
    INDEX_OUT_OF_RANGE = "index out of range"
    BAD_LENGTH = "bad length"


@dataclass(frozen=True)
class Verdict:
    problems: list[tuple[Problem, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self):
        return self.ok

    def positions(self, kind: Problem) -> list[int]:
        return [pos for k, pos in self.problems if k is kind]

    def describe(self) -> str:
        if self.ok:
            return "valid"
        return "; ".join(
            f"{kind.value} at position {pos}" if pos >= 0 else kind.value
            for kind, pos in self.problems
        )


def validate_pls(pls, total_pixels: int) -> Verdict:
    """Check distinctness, range and triad length; never raises.

    A bad length is reported with position -1.  The first occurrence of a
    repeated index is fine; later occurrences are flagged.
    """
    indices = pls.indices if isinstance(pls, PixelLocatorSequence) else tuple(pls)
    problems = []
    if not indices or len(indices) % PIXELS_PER_CHAR:
        problems.append((Problem.BAD_LENGTH, -1))
    seen = set()
    for pos, idx in enumerate(indices):
        if not 0 <= idx < total_pixels:
            problems.append((Problem.INDEX_OUT_OF_RANGE, pos))
        elif idx in seen:
            problems.append((Problem.DUPLICATE_INDEX, pos))
        seen.add(idx)
    return Verdict(problems)


def check_pls(pls, total_pixels: int) -> None:
    """Raise the matching error if :func:`validate_pls` rejects ``pls``."""
    verdict = validate_pls(pls, total_pixels)
    if verdict.ok:
        return
    if verdict.positions(Problem.INDEX_OUT_OF_RANGE):
        raise IndexOutOfRange(verdict.describe())
    raise InvalidPls(verdict.describe())


def serialize_pls(pls: PixelLocatorSequence) -> bytes:
    n = len(pls.indices)
    return _HEADER.pack(MAGIC, n) + struct.pack(f">{n}I", *pls.indices)


def deserialize_pls(data: bytes, total_pixels: int | None = None) -> PixelLocatorSequence:
    if len(data) < _HEADER.size:
        raise MalformedPls("truncated header")
    magic, n = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise MalformedPls("bad magic")
    if len(data) != _HEADER.size + 4 * n:
        raise MalformedPls(f"length field says {n} indices, body holds {(len(data) - _HEADER.size) / 4:g}")
    return PixelLocatorSequence(struct.unpack_from(f">{n}I", data, _HEADER.size), total_pixels)


def read_manual_pls(path) -> PixelLocatorSequence:
    """Parse a hand-written sequence: one decimal index per line.

    Blank lines and ``#`` comments are ignored.
    """
    indices = []
    with open(os.fspath(path), "rb") as fh:
        raw = fh.read()
    try:
        lines = raw.decode("ascii").splitlines()
    except UnicodeDecodeError as exc:
        raise MalformedPls(f"{path}: not ASCII text") from exc
    for lineno, line in enumerate(lines, 1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if not text.isdigit():
            raise MalformedPls(f"{path}:{lineno}: not a non-negative integer: {text!r}")
        indices.append(int(text))
    return PixelLocatorSequence(tuple(indices))

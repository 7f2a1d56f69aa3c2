"""Cover-vs-stego distortion: MSE, PSNR and per-channel histograms."""
from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .image_model import ImageMatrix

MAX_I = 255
CHANNELS = ("r", "g", "b")


@dataclass(frozen=True)
class QualityReport:
    mse: float
    psnr: float
    width: int
    height: int
    max_i: int = MAX_I

    @property
    def psnr_is_infinite(self) -> bool:
        return math.isinf(self.psnr)

    def to_dict(self) -> dict:
        return {
            "mse": self.mse,
            "psnr_db": "inf" if self.psnr_is_infinite else self.psnr,
            "width": self.width,
            "height": self.height,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class ChannelHistogram:
    channel: str
    bins: np.ndarray

    @property
    def total(self) -> int:
        return int(self.bins.sum())


@dataclass(frozen=True)
class Comparison:
    report: QualityReport
    cover: dict[str, ChannelHistogram]
    stego: dict[str, ChannelHistogram]

    def write_csvs(self, directory, prefix="hist") -> list[str]:
        """One ``value,cover_count,stego_count`` file per channel."""
        os.makedirs(directory, exist_ok=True)
        paths = []
        for ch in CHANNELS:
            path = os.path.join(directory, f"{prefix}_{ch}.csv")
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["value", "cover_count", "stego_count"])
                for v in range(256):
                    writer.writerow([v, int(self.cover[ch].bins[v]), int(self.stego[ch].bins[v])])
            paths.append(path)
        return paths


def _check_dims(a: ImageMatrix, b: ImageMatrix):
    if a.pixels.shape != b.pixels.shape:
        raise DimensionMismatch(
            f"images differ in size: {a.height}x{a.width} vs {b.height}x{b.width}"
        )


def mse(reference: ImageMatrix, distorted: ImageMatrix) -> float:
    """Mean squared error averaged over all ``3 * height * width`` samples."""
    _check_dims(reference, distorted)
    diff = reference.pixels.astype(np.int64) - distorted.pixels.astype(np.int64)
    return float(np.mean(diff * diff))


def psnr_from_mse(mse_value: float, max_i: int = MAX_I) -> float:
    if mse_value < 0:
        raise ValueError("mse must be non-negative")
    if mse_value == 0:
        return math.inf
    return 20.0 * math.log10(max_i / math.sqrt(mse_value))


def psnr(reference: ImageMatrix, distorted: ImageMatrix) -> float:
    return psnr_from_mse(mse(reference, distorted))


def histogram(image: ImageMatrix, channel: str) -> ChannelHistogram:
    plane = image.pixels[:, :, CHANNELS.index(channel)]
    return ChannelHistogram(channel, np.bincount(plane.reshape(-1), minlength=256).astype(np.int64))


def compare_report(cover: ImageMatrix, stego: ImageMatrix) -> Comparison:
    m = mse(cover, stego)
    report = QualityReport(m, psnr_from_mse(m), cover.width, cover.height)
    return Comparison(
        report,
        {ch: histogram(cover, ch) for ch in CHANNELS},
        {ch: histogram(stego, ch) for ch in CHANNELS},
    )

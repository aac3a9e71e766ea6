"""Image-quality metrics: variance-ratio SNR, peak-referenced PSNR, histogram
entropy and the conserved grey-level integrals."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import FieldPair
from .errors import DegenerateResidual, Requires2D
from .grids import Field

__all__ = [
    "MetricsReport",
    "snr",
    "psnr",
    "average_grey",
    "entropy",
    "quantize_grey",
    "report",
]


def _check_same_grid(ref: Field, test: Field) -> None:
    if ref.grid != test.grid:
        raise ValueError("reference and test fields live on different grids")


def snr(ref: Field, test: Field) -> float:
    """10*log10(var(test) / var(ref - test)) in dB, population variances.

    Raises :class:`DegenerateResidual` when the residual variance is exactly
    zero (test matches ref up to a constant); callers that need a value in
    that case use the +inf sentinel, see :func:`report`.
    """
    _check_same_grid(ref, test)
    residual_var = float(np.var(ref.values - test.values))
    if residual_var == 0.0:
        raise DegenerateResidual("residual variance is zero")
    test_var = float(np.var(test.values))
    if test_var == 0.0:
        return -math.inf
    return 10.0 * math.log10(test_var / residual_var)


def psnr(ref: Field, test: Field, peak: float, mean_square: bool = False) -> float:
    """10*log10(peak^2 / ||ref - test||^2) in dB.

    The default uses the plain squared Euclidean/Frobenius norm; with
    ``mean_square=True`` the squared norm is divided by the sample count.
    Raises :class:`DegenerateResidual` on exact equality.
    """
    _check_same_grid(ref, test)
    if not peak > 0.0:
        raise ValueError(f"peak must be positive, got {peak}")
    squared = float(np.sum((ref.values - test.values) ** 2))
    if squared == 0.0:
        raise DegenerateResidual("reference and test are identical")
    if mean_square:
        squared /= ref.values.size
    return 10.0 * math.log10(peak * peak / squared)


def average_grey(pair: FieldPair) -> tuple[float, float]:
    """Cell-volume-weighted sums of the two components.

    These are the discrete integrals that the filter conserves exactly, one
    per component.
    """
    volume = pair.grid.cell_volume
    return (
        volume * float(np.sum(pair.u.values)),
        volume * float(np.sum(pair.v.values)),
    )


def quantize_grey(values: np.ndarray) -> np.ndarray:
    """Clamp to [0, 255] and round half away from zero, as 8-bit grey."""
    clipped = np.clip(values, 0.0, 255.0)
    return np.floor(clipped + 0.5).astype(np.uint8)


def entropy(f: Field, co_occurrence: bool = False) -> float:
    """Histogram entropy of the 8-bit quantized field, in bits.

    The default uses the normalized 256-bin grey-level histogram, so the value
    lies in [0, 8]. With ``co_occurrence=True`` the normalized 256x256
    co-occurrence counts of vertically adjacent pixel pairs (offset (1, 0) in
    array axes) are used instead; that variant needs a 2-D field.
    """
    grey = quantize_grey(f.values)
    if co_occurrence:
        if f.grid.ndim != 2:
            raise Requires2D("co-occurrence entropy needs a 2-D field")
        first = grey[:-1, :].astype(np.int64).ravel()
        second = grey[1:, :].astype(np.int64).ravel()
        counts = np.bincount(first * 256 + second, minlength=256 * 256)
    else:
        counts = np.bincount(grey.ravel(), minlength=256)
    probability = counts[counts > 0] / counts.sum()
    return float(-np.sum(probability * np.log2(probability)))


@dataclass(frozen=True)
class MetricsReport:
    """Quality numbers for one filtered snapshot."""

    time: float
    snr: float
    psnr: float
    entropy: float
    avg_grey: tuple[float, float]

    def __post_init__(self):
        if not -1e-9 <= self.entropy <= 8.0 + 1e-9:
            raise ValueError(f"entropy out of the 8-bit range: {self.entropy}")


def report(
    ref: Field,
    pair: FieldPair,
    time: float,
    peak: float = 255.0,
    mean_square: bool = False,
) -> MetricsReport:
    """Metrics of the first component against a reference.

    Degenerate residuals map to the +inf sentinel instead of raising, so a
    perfect match shows up as infinite SNR/PSNR in emitted tables.
    """
    try:
        snr_db = snr(ref, pair.u)
    except DegenerateResidual:
        snr_db = math.inf
    try:
        psnr_db = psnr(ref, pair.u, peak, mean_square)
    except DegenerateResidual:
        psnr_db = math.inf
    return MetricsReport(time, snr_db, psnr_db, entropy(pair.u), average_grey(pair))

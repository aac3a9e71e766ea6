"""Deterministic I/O and test-signal utilities.

PGM (P2/P5, maxval <= 255) images, single-column CSV signals, seeded Gaussian
noise, synthetic test patterns and the Prewitt baseline edge detector. File
formats and the noise algorithm are documented in docs/formats.md.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import IoFailure, MalformedFile, Requires2D, UnknownKind
from .grids import Field, Grid
from .metrics import quantize_grey

__all__ = [
    "NoiseSpec",
    "default_grid",
    "read_image",
    "write_image",
    "read_signal",
    "write_signal",
    "standard_normal",
    "add_gaussian_noise",
    "prewitt",
    "make_test_pattern",
    "PATTERN_KINDS",
]

_WHITESPACE = b" \t\r\n"


def default_grid(shape: tuple[int, ...]) -> Grid:
    """Pixel-unit grid for an array shape: spacing 1, half-width N/2 per axis."""
    return Grid(tuple(n / 2 for n in shape), tuple(shape))


# ---------------------------------------------------------------------------
# PGM images


def _scan_token(data: bytes, pos: int) -> tuple[bytes, int]:
    n = len(data)
    while pos < n:
        byte = data[pos]
        if byte in _WHITESPACE:
            pos += 1
        elif byte == 0x23:  # '#' comment runs to end of line
            newline = data.find(b"\n", pos)
            if newline < 0:
                raise MalformedFile("unterminated comment in header")
            pos = newline + 1
        else:
            break
    if pos >= n:
        raise MalformedFile("truncated header")
    end = pos
    while end < n and data[end] not in _WHITESPACE:
        end += 1
    return data[pos:end], end


def _scan_int(data: bytes, pos: int, what: str) -> tuple[int, int]:
    token, pos = _scan_token(data, pos)
    try:
        value = int(token)
    except ValueError:
        raise MalformedFile(f"bad {what}: {token!r}") from None
    if value <= 0:
        raise MalformedFile(f"{what} must be positive, got {value}")
    return value, pos


def read_image(path, grid: Grid | None = None) -> Field:
    """Read a PGM (P2 or P5) grey-scale image into a field.

    Values must lie in 0..maxval with maxval <= 255. Without an explicit grid
    the pixel-unit default is attached.
    """
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    magic, pos = _scan_token(data, 0)
    if magic not in (b"P2", b"P5"):
        raise MalformedFile(f"unsupported magic {magic!r}, expected P2 or P5")
    width, pos = _scan_int(data, pos, "width")
    height, pos = _scan_int(data, pos, "height")
    maxval, pos = _scan_int(data, pos, "maxval")
    if maxval > 255:
        raise MalformedFile(f"maxval above 255 is unsupported, got {maxval}")
    count = width * height
    if magic == b"P5":
        # exactly one whitespace byte separates maxval from the raster
        if pos >= len(data) or data[pos] not in _WHITESPACE:
            raise MalformedFile("missing raster separator")
        raster = data[pos + 1 :]
        if len(raster) != count:
            raise MalformedFile(f"raster holds {len(raster)} bytes, expected {count}")
        values = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    else:
        samples = np.empty(count, dtype=np.int64)
        for i in range(count):
            samples[i], pos = _scan_int(data, pos, "sample")
        if data[pos:].strip(_WHITESPACE):
            raise MalformedFile("trailing data after the raster")
        values = samples.reshape(height, width)
    if values.max(initial=0) > maxval:
        raise MalformedFile(f"sample exceeds maxval {maxval}")
    if grid is None:
        grid = default_grid(values.shape)
    elif grid.shape != values.shape:
        raise ValueError(f"grid shape {grid.shape} != image shape {values.shape}")
    return Field(grid, values.astype(float))


def write_image(f: Field, path, fmt: str = "P5") -> None:
    """Quantize to 8-bit grey (clamp + round half away from zero) and write PGM."""
    if f.grid.ndim != 2:
        raise Requires2D("PGM images are two-dimensional")
    grey = quantize_grey(f.values)
    height, width = grey.shape
    if fmt == "P5":
        payload = b"P5\n%d %d\n255\n" % (width, height) + grey.tobytes()
    elif fmt == "P2":
        rows = "\n".join(" ".join(str(v) for v in row) for row in grey)
        payload = f"P2\n{width} {height}\n255\n{rows}\n".encode("ascii")
    else:
        raise ValueError(f"fmt must be 'P5' or 'P2', got {fmt!r}")
    try:
        Path(path).write_bytes(payload)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# 1-D signals


def read_signal(path, grid: Grid | None = None) -> Field:
    """Read a 1-D signal from a single-column CSV (one decimal per line)."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        try:
            values.append(float(stripped))
        except ValueError:
            raise MalformedFile(f"line {lineno}: not a number: {stripped!r}") from None
    if not values:
        raise MalformedFile("signal file holds no samples")
    if grid is None:
        if len(values) < 4 or len(values) % 2:
            raise MalformedFile(
                f"signal length must be even and >= 4 for the default grid, got {len(values)}"
            )
        grid = default_grid((len(values),))
    return Field(grid, np.array(values))


def write_signal(f: Field, path) -> None:
    """Write one decimal per line, 17 significant digits (lossless round trip)."""
    if f.grid.ndim != 1:
        raise ValueError("write_signal expects a 1-D field")
    text = "\n".join(f"{v:.17g}" for v in f.values) + "\n"
    try:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# Noise


@dataclass(frozen=True)
class NoiseSpec:
    """Additive white Gaussian noise: grey-level sigma and a 64-bit seed."""

    sigma: float
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "seed", int(self.seed))
        if not (math.isfinite(self.sigma) and self.sigma >= 0.0):
            raise ValueError(f"sigma must be finite and >= 0, got {self.sigma}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")


def standard_normal(count: int, seed: int) -> np.ndarray:
    """``count`` standard-normal draws from a fixed, documented generator.

    Uniforms come from the counter-based Philox generator keyed by ``seed``
    and are mapped through the Box-Muller transform; cos/sin outputs are
    interleaved. See docs/formats.md for the exact recipe.
    """
    gen = np.random.Generator(np.random.Philox(seed))
    pairs = (count + 1) // 2
    u1 = 1.0 - gen.random(pairs)  # in (0, 1] so the log stays finite
    u2 = gen.random(pairs)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * math.pi * u2
    out = np.empty(2 * pairs)
    out[0::2] = radius * np.cos(angle)
    out[1::2] = radius * np.sin(angle)
    return out[:count]


def add_gaussian_noise(f: Field, spec: NoiseSpec) -> Field:
    """f + sigma * Z with Z i.i.d. standard normal; deterministic in (f, spec)."""
    if spec.sigma == 0.0:
        return f
    noise = standard_normal(f.values.size, spec.seed).reshape(f.grid.shape)
    return Field(f.grid, f.values + spec.sigma * noise)


# ---------------------------------------------------------------------------
# Prewitt baseline


def prewitt(f: Field) -> Field:
    """Gradient magnitude from the two 3x3 Prewitt kernels, periodic borders.

    Periodic wrapping matches the spectral engine's domain; the kernels are
    unnormalized, so a unit ramp of spacing h responds with 6*h.
    """
    if f.grid.ndim != 2:
        raise Requires2D("prewitt needs a 2-D field")
    v = f.values
    diff_x = np.roll(v, -1, axis=1) - np.roll(v, 1, axis=1)
    gx = diff_x + np.roll(diff_x, -1, axis=0) + np.roll(diff_x, 1, axis=0)
    diff_y = np.roll(v, -1, axis=0) - np.roll(v, 1, axis=0)
    gy = diff_y + np.roll(diff_y, -1, axis=1) + np.roll(diff_y, 1, axis=1)
    return Field(f.grid, np.hypot(gx, gy))


# ---------------------------------------------------------------------------
# Synthetic test patterns

PATTERN_KINDS = ("box", "disk", "checkerboard", "gaussian")


def make_test_pattern(kind: str, grid: Grid) -> Field:
    """Deterministic unit-amplitude synthetic inputs.

    Kinds: 'box' (1-D indicator of the middle half of the domain), 'disk' and
    'checkerboard' (2-D), 'gaussian' (1-D or 2-D). Disk and gaussian are
    centered half a sample off the origin, which makes the value array exactly
    symmetric under flips and rot90 on square grids.
    """
    if kind == "box":
        if grid.ndim != 1:
            raise ValueError("'box' is a 1-D pattern")
        x = grid.coordinates(0)
        return Field(grid, (np.abs(x) < 0.5 * grid.half_widths[0]).astype(float))
    if kind == "disk":
        if grid.ndim != 2:
            raise ValueError("'disk' is a 2-D pattern")
        radius = 0.5 * min(grid.half_widths)
        rho2 = _centered_radius_squared(grid)
        return Field(grid, (rho2 <= radius * radius).astype(float))
    if kind == "checkerboard":
        if grid.ndim != 2:
            raise ValueError("'checkerboard' is a 2-D pattern")
        blocks = [max(1, n // 8) for n in grid.sizes]
        i = np.arange(grid.sizes[0])[:, None] // blocks[0]
        j = np.arange(grid.sizes[1])[None, :] // blocks[1]
        return Field(grid, ((i + j) % 2).astype(float))
    if kind == "gaussian":
        width = min(grid.half_widths) / 6.0
        rho2 = _centered_radius_squared(grid)
        return Field(grid, np.exp(-0.5 * rho2 / (width * width)))
    raise UnknownKind(f"unknown test pattern {kind!r}; know {PATTERN_KINDS}")


def _centered_radius_squared(grid: Grid) -> np.ndarray:
    # center sits at -h/2 per axis: the sample set {-L + j*h} is symmetric
    # about that point, so patterns centered there give symmetric arrays
    offsets = []
    for axis in range(grid.ndim):
        h = grid.spacings[axis]
        offsets.append(grid.coordinates(axis) + 0.5 * h)
    if grid.ndim == 1:
        return offsets[0] ** 2
    return offsets[0][:, None] ** 2 + offsets[1][None, :] ** 2

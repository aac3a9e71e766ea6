"""Command-line front end.

Subcommands: ``decompose`` (matrix report), ``filter`` (run the filter over a
time grid and emit images plus a metrics CSV), ``edges`` (edge channel next to
a Prewitt baseline), ``sweep`` (SNR/PSNR over p values, matrices or noise
levels) and ``demo1d`` (profile CSV for a synthetic 1-D signal).

A JSON config document may supply any setting; explicit flags override config
keys. Every command is deterministic given its inputs: rerunning writes
byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass
from itertools import pairwise
from pathlib import Path

import numpy as np

from .engine import FieldPair, FilterConfig, InitialKind, edge_map, evolve, initial_distribution
from .errors import CrossDiffError, DegenerateResidual, IoFailure, UsageError
from .grids import Field, Grid
from .matrices import DiffusionMatrix, decompose, validate_matrix
from .metrics import psnr, report, snr
from .sigio import (
    NoiseSpec,
    add_gaussian_noise,
    make_test_pattern,
    prewitt,
    read_image,
    read_signal,
    write_image,
)

__all__ = ["main", "RunManifest"]

DEFAULT_TIMES = (0.0, 0.25, 2.5, 25.0)
DEFAULT_PAD = 0.25


@dataclass(frozen=True)
class RunManifest:
    """Resolved, validated inputs of one filtering invocation."""

    config: FilterConfig
    noise: NoiseSpec | None
    time_grid: tuple[float, ...]
    output_dir: Path

    def __post_init__(self):
        if not self.time_grid:
            raise UsageError("at least one time is required")
        for t in self.time_grid:
            if not (math.isfinite(t) and t >= 0.0):
                raise UsageError(f"times must be finite and >= 0, got {t}")
        if any(b <= a for a, b in pairwise(self.time_grid)):
            raise UsageError("times must be strictly increasing")


# ---------------------------------------------------------------------------
# settings: config file overridden by flags


class _Settings:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.config: dict = {}
        path = getattr(args, "config", None)
        if path:
            try:
                self.config = json.loads(Path(path).read_text(encoding="utf-8"))
            except OSError as exc:
                raise IoFailure(f"cannot read config {path}: {exc}") from exc
            except json.JSONDecodeError as exc:
                raise UsageError(f"config {path} is not valid JSON: {exc}") from exc
            if not isinstance(self.config, dict):
                raise UsageError("config must be a JSON object")

    def get(self, name: str, default=None):
        value = getattr(self.args, name, None)
        if value is None:
            value = self.config.get(name, default)
        return value

    def require(self, name: str, flag: str):
        value = self.get(name)
        if value is None:
            raise UsageError(f"{flag} is required (flag or config key {name!r})")
        return value


def _parse_d(value) -> DiffusionMatrix:
    if isinstance(value, str):
        parts = value.split(",")
    elif isinstance(value, (list, tuple)):
        parts = list(value)
    else:
        raise UsageError(f"cannot read a matrix from {value!r}")
    if len(parts) != 4:
        raise UsageError(f"--d needs four comma-separated entries, got {value!r}")
    try:
        entries = [float(x) for x in parts]
    except (TypeError, ValueError):
        raise UsageError(f"--d entries must be numbers, got {value!r}") from None
    return validate_matrix(*entries)


def _parse_floats(value, flag: str) -> tuple[float, ...]:
    if isinstance(value, str):
        parts = [x for x in value.split(",") if x.strip()]
    elif isinstance(value, (list, tuple)):
        parts = list(value)
    else:
        raise UsageError(f"cannot read numbers from {value!r}")
    try:
        out = tuple(float(x) for x in parts)
    except (TypeError, ValueError):
        raise UsageError(f"{flag} entries must be numbers, got {value!r}") from None
    if not out:
        raise UsageError(f"{flag} must list at least one value")
    return out


def _load_field(path) -> Field:
    p = Path(path)
    suffix = p.suffix.lower()
    if suffix == ".npy":
        try:
            values = np.load(p)
        except OSError as exc:
            raise IoFailure(f"cannot read {p}: {exc}") from exc
        from .sigio import default_grid

        return Field(default_grid(values.shape), np.asarray(values, dtype=float))
    if suffix in (".pgm", ".pnm"):
        return read_image(p)
    if suffix == ".csv":
        return read_signal(p)
    raise UsageError(f"unsupported input extension {suffix!r} (use .pgm, .npy or .csv)")


def _embed_with_margin(f: Field, fraction: float) -> tuple[Field, tuple[slice, ...]]:
    """Zero-pad every side by ceil(fraction * size) samples at fixed spacing."""
    if fraction < 0.0:
        raise UsageError(f"--pad must be >= 0, got {fraction}")
    pads = tuple(math.ceil(fraction * n) for n in f.grid.sizes)
    window = tuple(slice(p, p + n) for p, n in zip(pads, f.grid.sizes))
    if all(p == 0 for p in pads):
        return f, window
    sizes = tuple(n + 2 * p for n, p in zip(f.grid.sizes, pads))
    half_widths = tuple(0.5 * sz * h for sz, h in zip(sizes, f.grid.spacings))
    values = np.zeros(sizes)
    values[window] = f.values
    return Field(Grid(half_widths, sizes), values), window


def _crop(f: Field, window: tuple[slice, ...], grid: Grid) -> Field:
    return Field(grid, f.values[window])


def _display_normalize(values: np.ndarray) -> tuple[np.ndarray, float, float]:
    """Affine map onto [0, 255] for image writing; returns (mapped, min, max)."""
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        return np.zeros_like(values), lo, hi
    return (values - lo) * (255.0 / (hi - lo)), lo, hi


def _fmt_cell(x) -> str:
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.17g}"
    return str(x)


def _write_csv(path, header, rows, comments=()) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            for line in comments:
                fh.write(f"# {line}\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt_cell(x) for x in row])
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def _safe_ratio(fn, *args, **kwargs) -> float:
    try:
        return fn(*args, **kwargs)
    except DegenerateResidual:
        return math.inf


def _output_dir(settings: _Settings) -> Path:
    out = Path(settings.require("output_dir", "--output-dir"))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _base_config(settings: _Settings, grid: Grid) -> FilterConfig:
    d = _parse_d(settings.require("d", "--d"))
    p = float(settings.get("p", 2.0))
    kind = InitialKind(int(settings.get("kind", 0)))
    return FilterConfig(d, p, kind, grid)


# ---------------------------------------------------------------------------
# commands


def cmd_decompose(args) -> int:
    settings = _Settings(args)
    d = _parse_d(settings.require("d", "--d"))
    dec = decompose(d)

    def fmt(z: complex) -> str:
        return f"{z.real:.12g}" if z.imag == 0.0 else f"{z:.12g}"

    lam_plus, lam_minus = d.eigenvalues
    print(f"case: {dec.case.value}")
    print(f"eigenvalues: {fmt(lam_plus)}, {fmt(lam_minus)}")
    print(f"s = {d.s:.12g}")
    print(f"q = {d.q:.12g}")
    print(f"m = {dec.m:.12g}")
    for name, matrix in (("P", dec.P), ("canonical", dec.canonical)):
        rows = "; ".join(
            "[" + ", ".join(f"{x:.12g}" for x in row) + "]" for row in matrix
        )
        print(f"{name} = [{rows}]")
    return 0


def _resolve_times(settings: _Settings) -> tuple[float, ...]:
    times = settings.get("times")
    if times is None:
        t = settings.get("t")
        if t is None:
            raise UsageError("--times (or --t) is required")
        times = (float(t),)
    return _parse_floats(times, "--times")


def cmd_filter(args) -> int:
    settings = _Settings(args)
    input_path = settings.require("input", "--input")
    original = _load_field(input_path)
    if original.grid.ndim != 2:
        raise UsageError("filter expects a 2-D image input")
    out_dir = _output_dir(settings)
    sigma = settings.get("sigma")
    noise = NoiseSpec(float(sigma), int(settings.get("seed", 0))) if sigma is not None else None
    pad = float(settings.get("pad", DEFAULT_PAD))
    raw = bool(settings.get("raw", False))
    mean_square = bool(settings.get("mse_psnr", False))

    reference_path = settings.get("reference")
    reference = _load_field(reference_path) if reference_path else original
    if reference.grid.shape != original.grid.shape:
        raise UsageError("reference shape does not match the input")

    start = add_gaussian_noise(original, noise) if noise else original
    padded, window = _embed_with_margin(start, pad)
    cfg = _base_config(settings, padded.grid)
    manifest = RunManifest(cfg, noise, _resolve_times(settings), out_dir)

    input_v = settings.get("input_v")
    if input_v is not None:
        second = _load_field(input_v)
        if second.grid.shape != original.grid.shape:
            raise UsageError("--input-v shape does not match the input")
        pair0 = FieldPair(padded, _embed_with_margin(second, pad)[0])
    else:
        pair0 = initial_distribution(padded, cfg.initial_kind)

    rows = []
    for index, t in enumerate(manifest.time_grid):
        out = evolve(pair0, cfg, t)
        u = _crop(out.u, window, original.grid)
        v = _crop(out.v, window, original.grid)
        stem = f"{index:03d}_t{t:g}"
        write_image(u, out_dir / f"u_{stem}.pgm")
        v_display, v_lo, v_hi = _display_normalize(v.values)
        write_image(Field(original.grid, v_display), out_dir / f"v_{stem}.pgm")
        if raw:
            np.save(out_dir / f"u_{stem}.npy", u.values)
            np.save(out_dir / f"v_{stem}.npy", v.values)
        rep = report(reference, FieldPair(u, v), t, mean_square=mean_square)
        rows.append(
            [t, rep.snr, rep.psnr, rep.entropy, rep.avg_grey[0], rep.avg_grey[1], v_lo, v_hi]
        )
    _write_csv(
        out_dir / "metrics.csv",
        ["time", "snr_db", "psnr_db", "entropy_bits", "avg_grey_u", "avg_grey_v", "v_min", "v_max"],
        rows,
    )
    print(f"wrote {len(manifest.time_grid)} snapshot(s) and metrics.csv to {out_dir}")
    return 0


def cmd_edges(args) -> int:
    settings = _Settings(args)
    original = _load_field(settings.require("input", "--input"))
    if original.grid.ndim != 2:
        raise UsageError("edges expects a 2-D image input")
    out_dir = _output_dir(settings)
    t = float(settings.require("t", "--t"))
    pad = float(settings.get("pad", DEFAULT_PAD))
    padded, window = _embed_with_margin(original, pad)
    cfg = _base_config(settings, padded.grid)
    if cfg.initial_kind is not InitialKind.PLAIN:
        raise UsageError("edges uses the plain initial split; drop --kind")

    edge = _crop(edge_map(padded, cfg, t), window, original.grid)
    baseline = prewitt(original)

    edge_display, edge_lo, edge_hi = _display_normalize(edge.values)
    write_image(Field(original.grid, edge_display), out_dir / "edge.pgm")
    baseline_display, base_lo, base_hi = _display_normalize(baseline.values)
    write_image(Field(original.grid, baseline_display), out_dir / "prewitt.pgm")
    _write_csv(
        out_dir / "normalization.csv",
        ["image", "raw_min", "raw_max"],
        [["edge", edge_lo, edge_hi], ["prewitt", base_lo, base_hi]],
    )
    print(f"wrote edge.pgm, prewitt.pgm and normalization.csv to {out_dir}")
    return 0


def cmd_sweep(args) -> int:
    settings = _Settings(args)
    axes = {
        "p_values": settings.get("p_values"),
        "d_list": settings.get("d_list"),
        "sigma_list": settings.get("sigma_list"),
    }
    chosen = [name for name, value in axes.items() if value is not None]
    if len(chosen) != 1:
        raise UsageError("exactly one of --p-values, --d-list, --sigma-list is required")
    axis = chosen[0]

    original = _load_field(settings.require("input", "--input"))
    if original.grid.ndim != 2:
        raise UsageError("sweep expects a 2-D image input")
    out_dir = _output_dir(settings)
    t = float(settings.require("t", "--t"))
    pad = float(settings.get("pad", DEFAULT_PAD))
    mean_square = bool(settings.get("mse_psnr", False))
    d = _parse_d(settings.require("d", "--d"))
    p = float(settings.get("p", 2.0))
    kind = InitialKind(int(settings.get("kind", 0)))
    sigma = settings.get("sigma")
    seed = int(settings.get("seed", 0))

    def measure(start: Field, cfg_d: DiffusionMatrix, cfg_p: float, cfg_kind: InitialKind):
        padded, window = _embed_with_margin(start, pad)
        cfg = FilterConfig(cfg_d, cfg_p, cfg_kind, padded.grid)
        out = evolve(initial_distribution(padded, cfg_kind), cfg, t)
        u = _crop(out.u, window, original.grid)
        return (
            _safe_ratio(snr, original, u),
            _safe_ratio(psnr, original, u, 255.0, mean_square),
        )

    comments = [f"axis={axis} t={t:g} p={p:g} kind={int(kind)}"]
    if axis == "p_values":
        values = _parse_floats(axes[axis], "--p-values")
        start = add_gaussian_noise(original, NoiseSpec(float(sigma), seed)) if sigma is not None else original
        if sigma is not None:
            comments.append(f"noise: sigma={float(sigma):g} seed={seed}")
        header = ["p", "snr_db", "psnr_db"]
        rows = [[value, *measure(start, d, value, kind)] for value in values]
    elif axis == "d_list":
        specs = [chunk for chunk in str(axes[axis]).split(";") if chunk.strip()]
        if not specs:
            raise UsageError("--d-list must list at least one matrix")
        matrices = [_parse_d(chunk) for chunk in specs]
        start = add_gaussian_noise(original, NoiseSpec(float(sigma), seed)) if sigma is not None else original
        if sigma is not None:
            comments.append(f"noise: sigma={float(sigma):g} seed={seed}")
        header = ["index", "d", "snr_db", "psnr_db"]
        rows = [
            [index, spec.strip(), *measure(start, matrix, p, kind)]
            for index, (spec, matrix) in enumerate(zip(specs, matrices))
        ]
    else:
        values = _parse_floats(axes[axis], "--sigma-list")
        kinds_setting = settings.get("kinds")
        kinds = (
            tuple(InitialKind(int(k)) for k in _parse_floats(kinds_setting, "--kinds"))
            if kinds_setting is not None
            else (kind,)
        )
        comments.append(f"seed policy: seed = base_seed + sigma_index, base_seed={seed}")
        header = ["sigma", "kind", "snr_db", "psnr_db"]
        rows = []
        for index, value in enumerate(values):
            noisy = add_gaussian_noise(original, NoiseSpec(value, seed + index))
            for one_kind in kinds:
                rows.append([value, int(one_kind), *measure(noisy, d, p, one_kind)])

    _write_csv(out_dir / "sweep.csv", header, rows, comments)
    print(f"wrote sweep.csv ({len(rows)} row(s)) to {out_dir}")
    return 0


def cmd_demo1d(args) -> int:
    settings = _Settings(args)
    out_dir = _output_dir(settings)
    samples = int(settings.get("samples", 510))
    half_width = float(settings.get("half_width", 60.0))
    pattern = settings.get("pattern", "box")
    grid = Grid.line(half_width, samples)
    signal = make_test_pattern(pattern, grid)

    kind = InitialKind(int(settings.get("kind", 0)))
    cfg = FilterConfig(_parse_d(settings.require("d", "--d")), float(settings.get("p", 2.0)), kind, grid)
    times = settings.get("times")
    times = _parse_floats(times, "--times") if times is not None else DEFAULT_TIMES
    manifest = RunManifest(cfg, None, times, out_dir)

    pair0 = initial_distribution(signal, kind)
    columns = [grid.coordinates(0)]
    header = ["x"]
    for t in manifest.time_grid:
        out = evolve(pair0, cfg, t)
        columns.append(out.u.values)
        columns.append(out.v.values)
        header.append(f"u_t{t:g}")
        header.append(f"v_t{t:g}")
    rows = [[column[j] for column in columns] for j in range(samples)]
    _write_csv(out_dir / "profiles.csv", header, rows)
    print(f"wrote profiles.csv ({samples} rows) to {out_dir}")
    return 0


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crossdiff",
        description="Linear cross-diffusion filtering of signals and grey-scale images.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, *, config=True):
        if config:
            sp.add_argument("--config", help="JSON config file; flags override its keys")
        sp.add_argument("--d", help="diffusion matrix as 'd11,d12,d21,d22'")

    sp = sub.add_parser("decompose", help="classify a matrix and print its canonical form")
    common(sp)
    sp.set_defaults(func=cmd_decompose)

    def run_flags(sp):
        sp.add_argument("--input", help="input image (.pgm, .npy) ")
        sp.add_argument("--output-dir", help="directory for emitted files")
        sp.add_argument("--p", type=float, help="frequency power p > 0 (default 2)")
        sp.add_argument("--kind", type=int, choices=(0, 1, 2), help="initial split kind")
        sp.add_argument("--sigma", type=float, help="additive Gaussian noise level")
        sp.add_argument("--seed", type=int, help="noise seed (default 0)")
        sp.add_argument("--pad", type=float, help="zero-padding margin fraction (default 0.25)")
        sp.add_argument("--mse-psnr", action="store_true", default=None,
                        help="divide the PSNR residual norm by the sample count")

    sp = sub.add_parser("filter", help="filter an image over a time grid")
    common(sp)
    run_flags(sp)
    sp.add_argument("--times", help="comma-separated strictly increasing times")
    sp.add_argument("--t", type=float, help="single time (alternative to --times)")
    sp.add_argument("--reference", help="clean reference image for the metrics")
    sp.add_argument("--input-v", help="second-component input (.npy/.pgm); skips --kind")
    sp.add_argument("--raw", action="store_true", default=None,
                    help="also write unquantized .npy component snapshots")
    sp.set_defaults(func=cmd_filter)

    sp = sub.add_parser("edges", help="edge channel plus Prewitt baseline")
    common(sp)
    run_flags(sp)
    sp.add_argument("--t", type=float, help="edge-map time (required)")
    sp.set_defaults(func=cmd_edges)

    sp = sub.add_parser("sweep", help="SNR/PSNR sweep over one axis")
    common(sp)
    run_flags(sp)
    sp.add_argument("--t", type=float, help="evaluation time (required)")
    sp.add_argument("--p-values", help="comma-separated p values to sweep")
    sp.add_argument("--d-list", help="semicolon-separated matrices to sweep")
    sp.add_argument("--sigma-list", help="comma-separated noise levels to sweep")
    sp.add_argument("--kinds", help="comma-separated initial kinds for the sigma sweep")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("demo1d", help="1-D profile demo on a synthetic pattern")
    common(sp)
    sp.add_argument("--output-dir", help="directory for emitted files")
    sp.add_argument("--pattern", choices=("box", "gaussian"), help="1-D pattern (default box)")
    sp.add_argument("--samples", type=int, help="sample count (default 510)")
    sp.add_argument("--half-width", type=float, help="domain half-width (default 60)")
    sp.add_argument("--p", type=float, help="frequency power p > 0 (default 2)")
    sp.add_argument("--kind", type=int, choices=(0, 1, 2), help="initial split kind")
    sp.add_argument("--times", help="comma-separated strictly increasing times")
    sp.set_defaults(func=cmd_demo1d)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"invalid value: {exc}", file=sys.stderr)
        return 2
    except CrossDiffError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Linear cross-diffusion filtering of 1-D signals and 2-D grey-scale images.

The image is carried as two coupled real components; filtering to scale t
multiplies every DFT mode of the pair by the 2x2 matrix exp(-t*|xi|^p*d),
where d is a positive-definite weight matrix and p > 0. The first component
smooths, the second acts as an edge detector for weakly coupled d.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .engine import (
    FieldPair,
    FilterConfig,
    InitialKind,
    apply_generator,
    complex_diffusion_oracle,
    edge_map,
    evolve,
    initial_distribution,
    scale_to_time,
    small_theta_oracle,
    smoothing_oracle,
)
from .errors import (
    CrossDiffError,
    DegenerateResidual,
    IoFailure,
    MalformedFile,
    PositiveDefinitenessViolation,
    Requires2D,
    UnknownKind,
    UsageError,
    ZeroCouplingError,
)
from .grids import (
    Field,
    Grid,
    SpectralField,
    forward_dft,
    fractional_laplacian,
    frequency_magnitudes,
    inverse_dft,
    spectral_gradient_magnitude,
    spectral_laplacian,
)
from .matrices import (
    DiffusionMatrix,
    SpectralCase,
    SpectralDecomposition,
    decompose,
    matrix_exponent,
    symbol,
    validate_matrix,
)
from .metrics import MetricsReport, average_grey, entropy, psnr, report, snr
from .sigio import (
    NoiseSpec,
    add_gaussian_noise,
    make_test_pattern,
    prewitt,
    read_image,
    read_signal,
    write_image,
    write_signal,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "__version__",
    # errors
    "CrossDiffError",
    "PositiveDefinitenessViolation",
    "ZeroCouplingError",
    "DegenerateResidual",
    "MalformedFile",
    "IoFailure",
    "Requires2D",
    "UnknownKind",
    "UsageError",
    # matrices
    "DiffusionMatrix",
    "SpectralCase",
    "SpectralDecomposition",
    "validate_matrix",
    "decompose",
    "matrix_exponent",
    "symbol",
    # grids
    "Grid",
    "Field",
    "SpectralField",
    "forward_dft",
    "inverse_dft",
    "frequency_magnitudes",
    "fractional_laplacian",
    "spectral_gradient_magnitude",
    "spectral_laplacian",
    # engine
    "InitialKind",
    "FieldPair",
    "FilterConfig",
    "initial_distribution",
    "evolve",
    "apply_generator",
    "edge_map",
    "smoothing_oracle",
    "small_theta_oracle",
    "complex_diffusion_oracle",
    "scale_to_time",
    # metrics
    "MetricsReport",
    "snr",
    "psnr",
    "average_grey",
    "entropy",
    "report",
    # io
    "NoiseSpec",
    "read_image",
    "write_image",
    "read_signal",
    "write_signal",
    "add_gaussian_noise",
    "prewitt",
    "make_test_pattern",
]

"""NumPy reference implementation of the per-mode symbol kernels.

Semantics must stay in lockstep with ``crossdiff._kernels._fast``; the two are
cross-checked by the test suite. ``branch``/``m`` come from
``crossdiff.matrices.exponent_branch``.
"""

import numpy as np


def symbol_fields(xi, p, t, q, r, d12, d21, branch, m):
    """Entry arrays (k11, k12, k21, k22) of exp(-t*xi**p * d) over a |xi| array."""
    a = t * (xi * xi) if p == 2.0 else t * np.power(xi, p)
    if branch > 0:
        decay_slow = np.exp(-a * (0.5 * q - m))
        decay_fast = np.exp(-a * (0.5 * q + m))
        cosh_term = 0.5 * (decay_slow + decay_fast)
        sinh_over_m = -0.5 * decay_slow * np.expm1(-2.0 * a * m) / m
    elif branch < 0:
        decay = np.exp(-0.5 * a * q)
        cosh_term = decay * np.cos(a * m)
        sinh_over_m = decay * np.sin(a * m) / m
    else:
        decay = np.exp(-0.5 * a * q)
        cosh_term = decay
        sinh_over_m = decay * a
    half_r = 0.5 * r * sinh_over_m
    return (
        cosh_term + half_r,
        -d12 * sinh_over_m,
        -d21 * sinh_over_m,
        cosh_term - half_r,
    )


def apply_symbol(uhat, vhat, xi, p, t, q, r, d12, d21, branch, m):
    """Multiply a transformed component pair by the symbol, mode by mode."""
    k11, k12, k21, k22 = symbol_fields(xi, p, t, q, r, d12, d21, branch, m)
    return k11 * uhat + k12 * vhat, k21 * uhat + k22 * vhat

"""Complex gamma, log-gamma and log-beta on numpy arrays.

The log-gamma uses the Lanczos approximation with ``g = 7`` and nine
coefficients.  Arguments left of ``Re z = 1/2`` go through the reflection
formula, evaluated entirely in log space so that arguments with large
imaginary part neither overflow nor underflow.

The logarithm returned is *a* logarithm of the gamma function, consistent
across the complex plane but not always the principal one.  Callers only ever
exponentiate sums of these values, for which the branch is irrelevant.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, PoleError, RangeError

LANCZOS_G = 7.0
LANCZOS_COEFFS = np.array(
    [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ]
)
POLE_TOL = 1e-14

_HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)
_LOG_PI = np.log(np.pi)
# exp() overflows past this
_MAX_LOG = np.log(np.finfo(float).max)


def _as_complex(z) -> np.ndarray:
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise DomainError("complex argument must have finite components")
    return arr


def _check_poles(z: np.ndarray) -> None:
    nearest = np.round(z.real)
    near = (nearest <= 0) & (np.abs(z - nearest) < POLE_TOL)
    if np.any(near):
        bad = z[near].ravel()[0]
        raise PoleError(f"gamma pole at z = {bad}")


def _lanczos_log_gamma(z: np.ndarray) -> np.ndarray:
    # valid for Re z >= 1/2
    zm1 = z - 1.0
    series = np.full(z.shape, LANCZOS_COEFFS[0], dtype=complex)
    for i in range(1, len(LANCZOS_COEFFS)):
        series = series + LANCZOS_COEFFS[i] / (zm1 + i)
    t = zm1 + LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm1 + 0.5) * np.log(t) - t + np.log(series)


def _log_sin_pi(z: np.ndarray) -> np.ndarray:
    """log(sin(pi z)) without overflow for large |Im z|."""
    w = np.pi * z
    out = np.empty(z.shape, dtype=complex)
    big_up = w.imag > 20.0
    big_dn = w.imag < -20.0
    mid = ~(big_up | big_dn)
    if np.any(mid):
        out[mid] = np.log(np.sin(w[mid]))
    if np.any(big_up):
        wu = w[big_up]
        out[big_up] = np.log(0.5j) - 1j * wu + np.log1p(-np.exp(2j * wu))
    if np.any(big_dn):
        wd = w[big_dn]
        out[big_dn] = np.log(-0.5j) + 1j * wd + np.log1p(-np.exp(-2j * wd))
    return out


def _log_gamma_array(z: np.ndarray) -> np.ndarray:
    out = np.empty(z.shape, dtype=complex)
    right = z.real >= 0.5
    if np.any(right):
        out[right] = _lanczos_log_gamma(z[right])
    left = ~right
    if np.any(left):
        zl = z[left]
        out[left] = _LOG_PI - _log_sin_pi(zl) - _lanczos_log_gamma(1.0 - zl)
    return out


def log_gamma(z):
    """Logarithm of the complex gamma function.

    Accepts a scalar or an array and returns the same shape.  Raises
    :class:`PoleError` when any argument is within ``1e-14`` of a non-positive
    integer.
    """
    arr = _as_complex(z)
    _check_poles(arr)
    out = _log_gamma_array(np.atleast_1d(arr)).reshape(arr.shape)
    return out[()] if out.ndim == 0 else out


def gamma(z):
    """Complex gamma function, ``exp(log_gamma(z))``.

    Raises :class:`RangeError` when the result overflows double precision.
    """
    lg = np.asarray(log_gamma(z))
    if np.any(lg.real > _MAX_LOG):
        raise RangeError("gamma overflows double precision")
    out = np.exp(lg)
    return out[()] if out.ndim == 0 else out


def log_beta(a, b):
    """``log B(a, b) = log_gamma(a) + log_gamma(b) - log_gamma(a + b)``."""
    a = _as_complex(a)
    b = _as_complex(b)
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b)


def beta(a, b):
    lb = np.asarray(log_beta(a, b))
    if np.any(lb.real > _MAX_LOG):
        raise RangeError("beta overflows double precision")
    out = np.exp(lb)
    return out[()] if out.ndim == 0 else out

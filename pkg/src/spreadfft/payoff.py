"""Fourier transforms of the spread and basket-spread payoffs.

The two-asset payoff ``(e^{x1} - e^{x2} - 1)^+`` has the transform

    Phat(u1, u2) = Gamma(i(u1+u2) - 1) Gamma(-i u2) / Gamma(i u1 + 1)

on any contour ``Im u = eps`` with ``eps2 > 0`` and ``eps1 + eps2 < -1``.
The basket payoff ``(e^{xt} - sum_m e^{x_m} - 1)^+`` generalises it with one
gamma factor per short asset.  Every product of gammas is assembled as a sum
of log-gammas and exponentiated once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .complex_math import log_gamma
from .errors import ContourError, DomainError


@dataclass(frozen=True)
class EpsilonShift2:
    """Contour shift ``(eps1, eps2)`` for the two-asset transform."""

    eps1: float = -3.0
    eps2: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.eps1) and np.isfinite(self.eps2)):
            raise ContourError("contour shift must be finite")
        if not self.eps2 > 0:
            raise ContourError(f"need eps2 > 0, got eps2={self.eps2}")
        if not self.eps1 + self.eps2 < -1:
            raise ContourError(f"need eps1 + eps2 < -1, got {self.eps1 + self.eps2}")

    def as_array(self) -> np.ndarray:
        return np.array([self.eps1, self.eps2])


@dataclass(frozen=True)
class EpsilonShiftM:
    """Contour shift for the basket transform: ``eps`` on the short assets,
    ``eps_tilde`` on the long one."""

    eps: tuple
    eps_tilde: float

    def __post_init__(self):
        eps = tuple(float(e) for e in self.eps)
        object.__setattr__(self, "eps", eps)
        if len(eps) < 1:
            raise ContourError("basket contour needs at least one short asset")
        if not all(np.isfinite(eps)) or not np.isfinite(self.eps_tilde):
            raise ContourError("contour shift must be finite")
        if min(eps) <= 0:
            raise ContourError(f"need every eps_m > 0, got {eps}")
        if self.eps_tilde > -1.0 - sum(eps):
            raise ContourError(
                f"need eps_tilde <= -1 - sum(eps) = {-1.0 - sum(eps)}, got {self.eps_tilde}"
            )

    @property
    def M(self) -> int:
        return len(self.eps)

    def as_array(self) -> np.ndarray:
        """Shift vector ordered as (long, short_1, ..., short_M)."""
        return np.array((self.eps_tilde,) + self.eps)


def log_phat2(u1, u2):
    return log_gamma(1j * (u1 + u2) - 1) + log_gamma(-1j * u2) - log_gamma(1j * u1 + 1)


def phat2(u1, u2):
    """Two-asset payoff transform at complex frequencies (vectorised)."""
    u1 = np.asarray(u1, dtype=complex)
    u2 = np.asarray(u2, dtype=complex)
    return np.exp(log_phat2(u1, u2))


def log_phatM(u, u_tilde):
    """Log of the basket transform; ``u`` holds the short-asset frequencies
    along its first axis."""
    u = [np.asarray(um, dtype=complex) for um in u]
    u_tilde = np.asarray(u_tilde, dtype=complex)
    total = u_tilde
    for um in u:
        total = total + um
    out = log_gamma(1j * total - 1)
    for um in u:
        out = out + log_gamma(-1j * um)
    return out - log_gamma(1j * u_tilde + 1)


def phatM(u: Sequence, u_tilde):
    """Basket payoff transform ``Phat(u, u_tilde)``."""
    return np.exp(log_phatM(u, u_tilde))


def phat_bound(u, eps: float) -> np.ndarray:
    """Decay bound on ``|Phat|`` along the contour ``eps2 = eps, eps1 = -1 - 2 eps``.

    ``u`` is a real pair (or an array whose last axis has length 2).
    """
    if not eps > 0:
        raise DomainError(f"bound needs eps > 0, got {eps}")
    u = np.asarray(u, dtype=float)
    norm2 = np.sum(u * u, axis=-1)
    z = norm2 / 5.0
    q = (z + eps**2) * (z + (1.0 + eps) ** 2)
    b = np.exp(log_gamma(eps) + log_gamma(2 + eps) - log_gamma(2 + 2 * eps)).real
    return b / np.sqrt(q)


def bound_contour(eps: float) -> EpsilonShift2:
    """The contour family on which :func:`phat_bound` holds."""
    return EpsilonShift2(-1.0 - 2.0 * eps, eps)


def payoff2(x1, x2):
    """``(e^{x1} - e^{x2} - 1)^+``."""
    return np.maximum(np.exp(x1) - np.exp(x2) - 1.0, 0.0)


def payoffM(x_tilde, x):
    """``(e^{x_tilde} - sum_m e^{x_m} - 1)^+`` with ``x`` a sequence of log-prices."""
    short = sum(np.exp(xm) for xm in x)
    return np.maximum(np.exp(x_tilde) - short - 1.0, 0.0)


def invert_phat2(x1, x2, u_bar: float, N: int, eps=None, offset: float = 0.5):
    """Payoff rebuilt from its transform by a truncated midpoint Fourier sum.

    ``(2 pi)^-2 sum_k e^{i z(k).x} Phat(z(k)) eta^2`` over the ``N x N``
    nodes ``z = u + i eps`` with ``u`` in ``[-u_bar, u_bar]``.  Evaluated
    directly at arbitrary points, so no lattice alignment is needed.  The
    payoff has a kink, so convergence near the exercise boundary is slow.
    """
    eps = eps if isinstance(eps, EpsilonShift2) else EpsilonShift2(*(eps or (-3.0, 1.0)))
    x1 = np.atleast_1d(np.asarray(x1, dtype=float))
    x2 = np.atleast_1d(np.asarray(x2, dtype=float))
    eta = 2.0 * u_bar / N
    u = -u_bar + (np.arange(N) + offset) * eta
    z1, z2 = u + 1j * eps.eps1, u + 1j * eps.eps2
    P = phat2(z1[:, None], z2[None, :])
    E1 = np.exp(1j * np.outer(x1, z1))
    E2 = np.exp(1j * np.outer(x2, z2))
    vals = np.sum((E1 @ P) * E2, axis=1)
    return (vals.real * (eta / (2.0 * np.pi)) ** 2).reshape(np.broadcast(x1, x2).shape)

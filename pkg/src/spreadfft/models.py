"""Characteristic functions of the joint log-price for the supported models.

Every model exposes ``log_phi(u1, u2)``: the logarithm of
``Phi(u; T) = E_0[exp(i u . X_T)]`` with the initial log-prices factored out,
evaluated at complex (contour-shifted) frequencies.  Evaluation broadcasts
like numpy arithmetic, so lattice fills pass a column and a row.

Models are frozen dataclasses; construct once and share freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BranchError, ContourError, DomainError

GREEKS = ("delta1", "delta2", "theta", "vega1", "vega2", "rho_corr")


def _finite_positive(name, value):
    if not (np.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be positive and finite, got {value}")


def _check_corr(name, value):
    if not (np.isfinite(value) and abs(value) < 1):
        raise DomainError(f"{name} must satisfy |{name}| < 1, got {value}")


def covariance(sigma, corr) -> np.ndarray:
    """``Sigma_ij = corr_ij * sigma_i * sigma_j`` (shared by all Gaussian models)."""
    sigma = np.asarray(sigma, dtype=float)
    return np.asarray(corr, dtype=float) * np.outer(sigma, sigma)


def gaussian_log_phi(u: Sequence, drift, cov, T: float):
    """``i u.drift T - u Cov u' T / 2`` for a list of broadcastable frequency arrays."""
    n = len(u)
    lin = 0j
    for j in range(n):
        lin = lin + u[j] * drift[j]
    quad = 0j
    for j in range(n):
        quad = quad + cov[j, j] * u[j] * u[j]
        for k in range(j + 1, n):
            quad = quad + 2.0 * cov[j, k] * u[j] * u[k]
    return 1j * lin * T - quad * T / 2.0


class CharModel:
    """Shared surface of all models: rate ``r``, maturity ``T`` and ``log_phi``."""

    name = "model"
    r: float
    T: float

    def log_phi(self, u1, u2):
        raise NotImplementedError

    def phi(self, u1, u2):
        return np.exp(self.log_phi(np.asarray(u1, dtype=complex), np.asarray(u2, dtype=complex)))

    def log_phi_grid(self, z1, z2):
        """``log_phi`` on an outer-product lattice ``z1[:, None], z2[None, :]``."""
        return self.log_phi(np.asarray(z1)[:, None], np.asarray(z2)[None, :])

    def check_contour(self, eps) -> None:
        """Raise :class:`ContourError` if ``Phi`` is singular on the shifted contour."""


@dataclass(frozen=True)
class GbmParams(CharModel):
    """Two correlated geometric Brownian motions with dividend yields."""

    r: float
    T: float
    sigma1: float
    sigma2: float
    rho: float
    delta1: float = 0.0
    delta2: float = 0.0

    name = "gbm"

    def __post_init__(self):
        _finite_positive("T", self.T)
        _finite_positive("sigma1", self.sigma1)
        _finite_positive("sigma2", self.sigma2)
        _check_corr("rho", self.rho)

    @property
    def sigma(self) -> np.ndarray:
        return np.array([self.sigma1, self.sigma2])

    @property
    def cov(self) -> np.ndarray:
        return covariance(self.sigma, [[1.0, self.rho], [self.rho, 1.0]])

    @property
    def drift(self) -> np.ndarray:
        return np.array([self.r - self.delta1, self.r - self.delta2]) - 0.5 * self.sigma**2

    def log_phi(self, u1, u2):
        return gaussian_log_phi([u1, u2], self.drift, self.cov, self.T)

    def greek_multiplier(self, which: str, u1, u2):
        """Factor ``m(u)`` with ``d/dtheta [e^{-rT} Phi] = m(u) e^{-rT} Phi``.

        ``theta`` is the derivative with respect to maturity ``T``.  The delta
        factors are ``i u_j``; dividing by the spot is left to the pricer.
        """
        s1, s2, rho, T = self.sigma1, self.sigma2, self.rho, self.T
        if which == "delta1":
            return 1j * u1
        if which == "delta2":
            return 1j * u2
        if which == "theta":
            return -self.r + self.log_phi(u1, u2) / T
        if which == "vega1":
            # -(u)(i dsigma^2/dsigma1' + dSigma/dsigma1 u') T/2
            return -(1j * 2 * s1 * u1 + u1 * (2 * s1 * u1 + rho * s2 * u2) + u2 * (rho * s2 * u1)) * T / 2
        if which == "vega2":
            return -(1j * 2 * s2 * u2 + u2 * (2 * s2 * u2 + rho * s1 * u1) + u1 * (rho * s1 * u2)) * T / 2
        if which == "rho_corr":
            return -(2 * s1 * s2 * u1 * u2) * T / 2
        raise ValueError(f"unknown greek {which!r}; expected one of {GREEKS}")


@dataclass(frozen=True)
class SvParams(CharModel):
    """Three-factor model: two log-prices driven by a common CIR variance.

    ``sv_denominator_T`` selects ``exp(-theta T)`` (default) in the first
    exponent's denominator; ``False`` uses ``exp(-theta)`` instead, which
    only differs when ``T != 1``.
    """

    r: float
    T: float
    sigma1: float
    sigma2: float
    rho: float
    rho1: float
    rho2: float
    v0: float
    kappa: float
    mu: float
    sigma_v: float
    delta1: float = 0.0
    delta2: float = 0.0
    sv_denominator_T: bool = True
    track_branch: bool = True

    name = "sv"

    def __post_init__(self):
        _finite_positive("T", self.T)
        _finite_positive("sigma1", self.sigma1)
        _finite_positive("sigma2", self.sigma2)
        _finite_positive("kappa", self.kappa)
        _finite_positive("mu", self.mu)
        _finite_positive("sigma_v", self.sigma_v)
        if not (np.isfinite(self.v0) and self.v0 >= 0):
            raise DomainError(f"v0 must be non-negative, got {self.v0}")
        for nm in ("rho", "rho1", "rho2"):
            _check_corr(nm, getattr(self, nm))

    def _parts(self, u1, u2):
        s1, s2, sv = self.sigma1, self.sigma2, self.sigma_v
        zeta = -0.5 * (
            (s1**2 * u1**2 + s2**2 * u2**2 + 2 * self.rho * s1 * s2 * u1 * u2)
            + 1j * (s1**2 * u1 + s2**2 * u2)
        )
        gam = self.kappa - 1j * (self.rho1 * s1 * u1 + self.rho2 * s2 * u2) * sv
        theta = np.sqrt(gam**2 - 2 * sv**2 * zeta)
        one_m_e = -np.expm1(-theta * self.T)
        one_m_e_den = one_m_e if self.sv_denominator_T else -np.expm1(-theta)
        first = 2 * zeta * one_m_e / (2 * theta - (theta - gam) * one_m_e_den) * self.v0
        log_arg = (2 * theta - (theta - gam) * one_m_e) / (2 * theta)
        return first, log_arg, theta, gam

    def _assemble(self, u1, u2, first, log_w, theta, gam):
        drift = 1j * (u1 * (self.r - self.delta1) + u2 * (self.r - self.delta2)) * self.T
        k = self.kappa * self.mu / self.sigma_v**2
        return first + drift - k * (2 * log_w + (theta - gam) * self.T)

    def log_phi(self, u1, u2):
        u1 = np.asarray(u1, dtype=complex)
        u2 = np.asarray(u2, dtype=complex)
        first, w, theta, gam = self._parts(u1, u2)
        return self._assemble(u1, u2, first, np.log(w), theta, gam)

    def log_phi_grid(self, z1, z2):
        z1 = np.asarray(z1, dtype=complex)[:, None]
        z2 = np.asarray(z2, dtype=complex)[None, :]
        first, w, theta, gam = self._parts(z1, z2)
        log_w = np.log(w)
        if self.track_branch:
            log_w = log_w.real + 1j * _unwrap_from_origin(np.angle(w), z1[:, 0].real, z2[0].real)
        return self._assemble(z1, z2, first, log_w, theta, gam)


def _unwrap_from_origin(arg: np.ndarray, re1: np.ndarray, re2: np.ndarray, max_step=0.9 * np.pi):
    """Continuous phase on a 2-D lattice, anchored at the node nearest u = 0.

    The reference column is unwrapped outward from the origin, then every row
    is unwrapped outward from that column.  A raw step close to pi cannot be
    resolved and raises :class:`BranchError`.
    """
    i0 = int(np.argmin(np.abs(re1)))
    j0 = int(np.argmin(np.abs(re2)))
    for axis in (0, 1):
        step = np.angle(np.exp(1j * np.diff(arg, axis=axis)))
        if np.any(np.abs(step) > max_step):
            raise BranchError("complex log jumps between neighbouring lattice nodes; use a finer lattice")
    out = np.empty_like(arg)
    col = arg[:, j0]
    ucol = np.empty_like(col)
    ucol[i0:] = np.unwrap(col[i0:])
    ucol[: i0 + 1] = np.unwrap(col[i0::-1])[::-1]
    right = np.unwrap(arg[:, j0:], axis=1)
    left = np.unwrap(arg[:, j0::-1], axis=1)[:, ::-1]
    shift = (ucol - col)[:, None]
    out[:, j0:] = right + shift
    out[:, : j0 + 1] = left + shift
    return out


@dataclass(frozen=True)
class VgParams(CharModel):
    """Bivariate variance gamma built from two idiosyncratic and one common
    VG factor with shared tail rates ``a_plus``, ``a_minus``.

    ``compensator`` picks the drift that accompanies the jumps:

    * ``"exact"`` makes each discounted price a martingale,
      ``omega = lam * log((1 - 1/a_plus)(1 + 1/a_minus))``;
    * ``"first_order"`` uses the linearisation
      ``omega = lam * (1/a_minus - 1/a_plus - 1/(a_minus a_plus))``,
      i.e. the diffusive correction ``-(theta + sigma^2/2)`` of the
      time-changed Brownian motion.
    """

    r: float
    T: float
    a_plus: float
    a_minus: float
    alpha: float
    lam: float
    compensator: str = "exact"

    name = "vg"

    def __post_init__(self):
        _finite_positive("T", self.T)
        _finite_positive("a_plus", self.a_plus)
        _finite_positive("a_minus", self.a_minus)
        _finite_positive("lam", self.lam)
        if not 0.0 <= self.alpha <= 1.0:
            raise DomainError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.compensator not in ("exact", "first_order"):
            raise DomainError(f"unknown compensator {self.compensator!r}")
        if self.compensator == "exact" and self.a_plus <= 1.0:
            raise DomainError("exact compensator needs a_plus > 1 (finite exponential moment)")

    @property
    def omega(self) -> float:
        ap, am, lam = self.a_plus, self.a_minus, self.lam
        if self.compensator == "exact":
            return lam * np.log1p(1 / am - 1 / ap - 1 / (am * ap))
        return lam * (1 / am - 1 / ap - 1 / (am * ap))

    def log_factor(self, u):
        """``log(1 + i(1/a- - 1/a+)u + u^2/(a- a+))`` as a sum of two principal logs."""
        return np.log(1 - 1j * u / self.a_plus) + np.log(1 + 1j * u / self.a_minus)

    def log_phi(self, u1, u2):
        u1 = np.asarray(u1, dtype=complex)
        u2 = np.asarray(u2, dtype=complex)
        lt = self.lam * self.T
        common = -self.alpha * lt * self.log_factor(u1 + u2)
        idio = -(1 - self.alpha) * lt * (self.log_factor(u1) + self.log_factor(u2))
        return 1j * (u1 + u2) * (self.r + self.omega) * self.T + common + idio

    def check_contour(self, eps) -> None:
        e1, e2 = float(eps[0]), float(eps[1])
        for val in (e1, e2, e1 + e2):
            if not -self.a_plus < val < self.a_minus:
                raise ContourError(
                    f"VG contour needs -a_plus < eps1, eps2, eps1+eps2 < a_minus; got eps=({e1}, {e2})"
                )


@dataclass(frozen=True)
class GbmBasketParams:
    """``M + 1`` correlated GBMs; index 0 is the long asset, 1..M the short ones."""

    r: float
    T: float
    sigma: tuple
    corr: tuple
    delta: tuple = field(default=None)

    name = "gbm_basket"

    def __post_init__(self):
        sigma = np.asarray(self.sigma, dtype=float)
        corr = np.asarray(self.corr, dtype=float)
        n = sigma.size
        delta = np.zeros(n) if self.delta is None else np.asarray(self.delta, dtype=float)
        object.__setattr__(self, "sigma", tuple(sigma))
        object.__setattr__(self, "corr", tuple(map(tuple, corr)))
        object.__setattr__(self, "delta", tuple(delta))
        _finite_positive("T", self.T)
        if n < 2:
            raise DomainError("basket needs at least two assets")
        if np.any(sigma <= 0):
            raise DomainError("volatilities must be positive")
        if corr.shape != (n, n) or delta.shape != (n,):
            raise DomainError("corr must be (M+1)x(M+1) and delta of length M+1")
        if not np.allclose(corr, corr.T, atol=0, rtol=0) or not np.all(np.diag(corr) == 1.0):
            raise DomainError("corr must be symmetric with unit diagonal")
        try:
            np.linalg.cholesky(corr)
        except np.linalg.LinAlgError:
            raise DomainError("corr must be positive definite") from None

    @property
    def n_assets(self) -> int:
        return len(self.sigma)

    @property
    def cov(self) -> np.ndarray:
        return covariance(self.sigma, self.corr)

    @property
    def drift(self) -> np.ndarray:
        s = np.asarray(self.sigma)
        return self.r - np.asarray(self.delta) - 0.5 * s**2

    def log_phi(self, u: Sequence):
        return gaussian_log_phi(list(u), self.drift, self.cov, self.T)

    def phi(self, u: Sequence):
        return np.exp(self.log_phi(u))

    def check_contour(self, eps) -> None:
        pass

    @classmethod
    def from_bivariate(cls, p: GbmParams) -> "GbmBasketParams":
        return cls(p.r, p.T, (p.sigma1, p.sigma2), ((1.0, p.rho), (p.rho, 1.0)), (p.delta1, p.delta2))


def phi_gbm(p: GbmParams, u):
    return p.phi(u[0], u[1])


def phi_sv(p: SvParams, u):
    return p.phi(u[0], u[1])


def phi_vg(p: VgParams, u):
    return p.phi(u[0], u[1])


def phi_gbm_basket(p: GbmBasketParams, u):
    return p.phi([np.asarray(x, dtype=complex) for x in u])


def greek_multiplier_gbm(p: GbmParams, which: str, u):
    return p.greek_multiplier(which, u[0], u[1])

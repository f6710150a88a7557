"""Independent reference prices: a quadrature benchmark for GBM, Monte Carlo
simulators for every model, and the log-price error objective used to
study lattice convergence.

None of this module touches the Fourier pricing code path except
:func:`err_study`, which compares the two.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.special import log_ndtr, ndtr

from .errors import DomainError, QuadratureError
from .models import GbmBasketParams, GbmParams, SvParams, VgParams
from .payoff import EpsilonShift2
from .pricer import Lattice, price_at, saddle_contour

CHUNK = 1 << 16
SQRT_2PI = math.sqrt(2.0 * math.pi)


# ---------------------------------------------------------------- GBM benchmark


def _bs_call_log(log_fwd, log_strike, b):
    """Undiscounted ``E[(F e^{bZ - b^2/2} - X)^+]`` from log forward and log strike.

    Out of the money both terms are tiny and nearly equal, so the difference
    is taken as ``X N(d2) expm1(...)`` in log space.
    """
    d1 = (log_fwd - log_strike) / b + 0.5 * b
    d2 = d1 - b
    if d1 >= 0:
        return math.exp(log_fwd) * ndtr(d1) - math.exp(log_strike) * ndtr(d2)
    ln2 = log_ndtr(d2)
    return math.exp(log_strike + ln2) * math.expm1(log_fwd - log_strike + log_ndtr(d1) - ln2)


def gbm_benchmark(p: GbmParams, S10, S20, K, tol: float = 1e-10, limit: int = 200) -> float:
    """Spread price under two correlated GBMs by one-dimensional integration.

    Conditional on the standard normal ``z`` driving ``S2T``, ``S1T`` is
    lognormal, so the inner expectation is a Black-Scholes call struck at
    ``S2T + K``.  The outer Gaussian integral uses adaptive quadrature.
    """
    if not K > 0:
        raise DomainError(f"strike must be positive, got {K}")
    sq = math.sqrt(p.T)
    m1 = math.log(S10) + (p.r - p.delta1 - 0.5 * p.sigma1**2) * p.T
    m2 = math.log(S20) + (p.r - p.delta2 - 0.5 * p.sigma2**2) * p.T
    b = p.sigma1 * math.sqrt((1.0 - p.rho**2) * p.T)

    def integrand(z):
        log_fwd = m1 + p.rho * p.sigma1 * sq * z + 0.5 * b * b
        strike = math.exp(m2 + p.sigma2 * sq * z) + K
        return math.exp(-0.5 * z * z) / SQRT_2PI * _bs_call_log(log_fwd, math.log(strike), b)

    # relative control keeps far out-of-the-money prices accurate too
    with warnings.catch_warnings():
        # a poor error estimate is reported below as QuadratureError
        warnings.simplefilter("ignore", IntegrationWarning)
        val, err = quad(integrand, -12.0, 12.0, epsabs=0.0, epsrel=1e-12, limit=limit)
    if not err <= tol:
        raise QuadratureError(f"quadrature error estimate {err:.3g} exceeds {tol:.3g}")
    return math.exp(-p.r * p.T) * val


# ---------------------------------------------------------------- Monte Carlo


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo budget.  With ``antithetic`` each draw is paired with its
    negation, so ``n_paths`` counts both members of every pair."""

    n_paths: int
    n_steps: int = 1
    seed: int = 0
    antithetic: bool = False
    chunk: int = CHUNK

    def __post_init__(self):
        if self.n_paths < 1 or self.n_steps < 1 or self.chunk < 2:
            raise DomainError("n_paths, n_steps must be >= 1 and chunk >= 2")
        if self.antithetic and self.n_paths < 2:
            raise DomainError("antithetic sampling needs at least two paths")


@dataclass
class McResult:
    price: np.ndarray | float
    std_error: np.ndarray | float
    n_samples: int
    config: dict = field(default_factory=dict)

    def __iter__(self):
        yield self.price
        yield self.std_error


class _Moments:
    """Chunk-wise mean and sum of squared deviations, merged pairwise."""

    def __init__(self, width):
        self.n = 0
        self.mean = np.zeros(width)
        self.m2 = np.zeros(width)

    def add(self, samples):
        nb = samples.shape[0]
        mb = samples.mean(axis=0)
        m2b = np.sum((samples - mb) ** 2, axis=0)
        n = self.n + nb
        delta = mb - self.mean
        self.mean = self.mean + delta * nb / n
        self.m2 = self.m2 + m2b + delta**2 * self.n * nb / n
        self.n = n

    def stderr(self):
        if self.n < 2:
            return np.zeros_like(self.mean)
        return np.sqrt(self.m2 / (self.n - 1) / self.n)


def _streams(cfg: McConfig, n_draws: int):
    """One Philox generator per chunk, spawned from the seed; yields (rng, size)."""
    n_chunks = -(-n_draws // cfg.chunk)
    children = np.random.SeedSequence(cfg.seed).spawn(n_chunks)
    for i, child in enumerate(children):
        size = min(cfg.chunk, n_draws - i * cfg.chunk)
        yield np.random.Generator(np.random.Philox(child)), size


def _payoff(S_long, S_short_sum, strikes):
    return np.maximum((S_long - S_short_sum)[:, None] - strikes[None, :], 0.0)


def _simulate(cfg, strikes, disc, draw_terminal):
    """Run chunks; ``draw_terminal(rng, size, sign)`` returns ``(S_long, S_short_sum)``
    driven by the same draws for ``sign = +1`` and ``-1``."""
    mom = _Moments(strikes.size)
    n_draws = cfg.n_paths // 2 if cfg.antithetic else cfg.n_paths
    for rng, size in _streams(cfg, n_draws):
        state = rng.bit_generator.state
        pay = _payoff(*draw_terminal(rng, size, 1.0), strikes)
        if cfg.antithetic:
            rng.bit_generator.state = state
            pay = 0.5 * (pay + _payoff(*draw_terminal(rng, size, -1.0), strikes))
        mom.add(disc * pay)
    return mom


def _gbm_terminal(log_s0, drift, cov, T):
    chol = np.linalg.cholesky(cov * T)

    def draw(rng, size, sign):
        z = sign * rng.standard_normal((size, len(log_s0)))
        x = np.asarray(log_s0) + drift * T + z @ chol.T
        s = np.exp(x)
        return s[:, 0], s[:, 1:].sum(axis=1)

    return draw


def _sv_terminal(p: SvParams, S10, S20, n_steps):
    """Full-truncation Euler: ``v+`` enters every drift and square root."""
    corr = np.array([[1.0, p.rho, p.rho1], [p.rho, 1.0, p.rho2], [p.rho1, p.rho2, 1.0]])
    try:
        chol = np.linalg.cholesky(corr)
    except np.linalg.LinAlgError:
        raise DomainError("correlations (rho, rho1, rho2) are not positive definite") from None
    dt = p.T / n_steps
    sdt = math.sqrt(dt)
    a1 = (p.r - p.delta1) * dt
    a2 = (p.r - p.delta2) * dt

    def draw(rng, size, sign):
        x1 = np.full(size, math.log(S10))
        x2 = np.full(size, math.log(S20))
        v = np.full(size, float(p.v0))
        for _ in range(n_steps):
            z = sign * (chol @ rng.standard_normal((3, size)))
            vp = np.maximum(v, 0.0)
            sv = np.sqrt(vp) * sdt
            x1 += a1 - 0.5 * p.sigma1**2 * vp * dt + p.sigma1 * sv * z[0]
            x2 += a2 - 0.5 * p.sigma2**2 * vp * dt + p.sigma2 * sv * z[1]
            v += p.kappa * (p.mu - vp) * dt + p.sigma_v * sv * z[2]
        return np.exp(x1), np.exp(x2)

    return draw


def vg_subordination(a_plus, a_minus):
    """``(theta, sigma)`` of ``theta G + sigma W_G`` whose unit-shape characteristic
    function is ``1/(1 + i(1/a- - 1/a+)u + u^2/(a- a+))``."""
    return 1.0 / a_plus - 1.0 / a_minus, math.sqrt(2.0 / (a_plus * a_minus))


def _vg_terminal(p: VgParams, S10, S20):
    theta, sig = vg_subordination(p.a_plus, p.a_minus)
    lt = p.lam * p.T
    shapes = ((1.0 - p.alpha) * lt, (1.0 - p.alpha) * lt, p.alpha * lt)
    drift = (p.r + p.omega) * p.T

    def factor(rng, shape, size, sign):
        if shape == 0.0:
            rng.standard_normal(size)  # keep the stream layout fixed
            return np.zeros(size)
        g = rng.gamma(shape, 1.0, size)
        return theta * g + sig * np.sqrt(g) * sign * rng.standard_normal(size)

    def draw(rng, size, sign):
        y1, y2, y = (factor(rng, s, size, sign) for s in shapes)
        return S10 * np.exp(drift + y1 + y), S20 * np.exp(drift + y2 + y)

    return draw


def mc_price(model, S10, S20, K, cfg: McConfig) -> McResult:
    """Discounted Monte Carlo spread price and its standard error.

    ``K`` may be a scalar or a sequence of strikes priced on shared paths.
    For a :class:`GbmBasketParams` model ``S10`` is the long spot and ``S20``
    the sequence of short spots.  GBM models are sampled exactly at
    maturity, SV by full-truncation Euler with ``cfg.n_steps`` steps and VG
    by gamma time changes of each of its three factors.
    """
    scalar = np.ndim(K) == 0
    strikes = np.atleast_1d(np.asarray(K, dtype=float))
    if strikes.size == 0:
        raise DomainError("no strikes")
    if np.any(strikes < 0):
        raise DomainError("strikes must be non-negative")
    disc = math.exp(-model.r * model.T)
    if isinstance(model, GbmParams):
        draw = _gbm_terminal([math.log(S10), math.log(S20)], model.drift, model.cov, model.T)
    elif isinstance(model, GbmBasketParams):
        spots = [S10] + list(S20)
        if len(spots) != model.n_assets:
            raise DomainError("one spot per basket asset is required")
        draw = _gbm_terminal(np.log(spots), model.drift, model.cov, model.T)
    elif isinstance(model, SvParams):
        draw = _sv_terminal(model, S10, S20, cfg.n_steps)
    elif isinstance(model, VgParams):
        draw = _vg_terminal(model, S10, S20)
    else:
        raise DomainError(f"no simulator for {type(model).__name__}")
    mom = _simulate(cfg, strikes, disc, draw)
    price, se = mom.mean, mom.stderr()
    echo = {"model": model.name, "params": _params_dict(model), "S10": S10, "S20": S20,
            "mc": asdict(cfg)}
    if scalar:
        return McResult(float(price[0]), float(se[0]), mom.n, echo)
    return McResult(price, se, mom.n, echo)


def mc_char_function(model, u1, u2, cfg: McConfig):
    """Monte Carlo estimate of ``E[exp(i u.(X_T - X_0))]`` and its standard error.

    Used to cross-check closed-form characteristic functions at complex
    ``u``; the simulators are the ones behind :func:`mc_price`.
    """
    if isinstance(model, GbmParams):
        draw = _gbm_terminal([0.0, 0.0], model.drift, model.cov, model.T)
    elif isinstance(model, SvParams):
        draw = _sv_terminal(model, 1.0, 1.0, cfg.n_steps)
    elif isinstance(model, VgParams):
        draw = _vg_terminal(model, 1.0, 1.0)
    else:
        raise DomainError(f"no simulator for {type(model).__name__}")
    n_draws = cfg.n_paths
    re, im = _Moments(1), _Moments(1)
    for rng, size in _streams(cfg, n_draws):
        s1, s2 = draw(rng, size, 1.0)
        val = np.exp(1j * (u1 * np.log(s1) + u2 * np.log(s2)))
        re.add(val.real[:, None])
        im.add(val.imag[:, None])
    est = complex(re.mean[0], im.mean[0])
    se = float(np.hypot(re.stderr()[0], im.stderr()[0]))
    return est, se


def _params_dict(model) -> dict:
    try:
        d = asdict(model)
    except TypeError:
        d = dict(vars(model))
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in d.items()}


# ---------------------------------------------------------------- error objective


def err_grid(n: int = 6, K: float = 1.0):
    """Spot pairs ``log S10 = i pi/10``, ``log S20 = -pi/5 + j pi/10`` for ``i, j = 1..n``."""
    pts = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            pts.append((math.exp(i * math.pi / 10), math.exp(-math.pi / 5 + j * math.pi / 10)))
    return pts


@dataclass
class ErrReport:
    """Mean absolute log deviation and its per-point detail ``(S10, S20, M, B)``."""

    err: float
    rows: list

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["S10", "S20", "model_price", "benchmark", "abs_log_dev"])
            for s1, s2, m, b in self.rows:
                w.writerow([f"{s1:.17g}", f"{s2:.17g}", f"{m:.17g}", f"{b:.17g}",
                            f"{abs(math.log(m) - math.log(b)):.17g}"])

    def to_json(self, path=None) -> str:
        text = json.dumps({"err": self.err, "rows": [list(r) for r in self.rows]})
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text

    @classmethod
    def from_json(cls, text: str) -> "ErrReport":
        d = json.loads(text)
        return cls(d["err"], [tuple(r) for r in d["rows"]])


def err_objective(model_prices: Sequence, benchmark: Sequence, points: Sequence | None = None) -> ErrReport:
    """``(1/n) sum |log M_i - log B_i|`` over matched price pairs."""
    m = np.asarray(model_prices, dtype=float)
    b = np.asarray(benchmark, dtype=float)
    if m.shape != b.shape or m.ndim != 1 or m.size == 0:
        raise DomainError("model and benchmark prices must be equal-length non-empty lists")
    pts = list(points) if points is not None else [(float("nan"), float("nan"))] * m.size
    for k in range(m.size):
        if not (m[k] > 0 and b[k] > 0):
            raise DomainError(
                f"non-positive price at grid point S10={pts[k][0]:.6g}, S20={pts[k][1]:.6g}: "
                f"model={m[k]:.6g}, benchmark={b[k]:.6g}"
            )
    dev = np.abs(np.log(m) - np.log(b))
    rows = [(float(p[0]), float(p[1]), float(mi), float(bi)) for p, mi, bi in zip(pts, m, b)]
    return ErrReport(float(dev.mean()), rows)


def err_study(model, Ns: Sequence, ubars: Sequence, benchmark: Sequence | None = None,
              contour: str = "saddle", eps=(-3.0, 1.0), K: float = 1.0, offset: float = 0.5):
    """Err for every ``(u_bar, N)`` pair on the standard spot grid.

    ``benchmark`` defaults to :func:`gbm_benchmark` (GBM only).  With
    ``contour="saddle"`` each spot pair gets the contour from
    :func:`~spreadfft.pricer.saddle_contour`; ``"fixed"`` uses ``eps``
    everywhere.  A cell whose prices are not all positive reports NaN.
    Returns a list of dicts ``{N, u_bar, err}``.
    """
    pts = err_grid(K=K)
    if benchmark is None:
        if not isinstance(model, GbmParams):
            raise DomainError("a benchmark is required for non-GBM models")
        benchmark = [gbm_benchmark(model, s1, s2, K) for s1, s2 in pts]
    if contour == "saddle":
        contours = [saddle_contour(model, (math.log(s1 / K), math.log(s2 / K)), eps0=eps) for s1, s2 in pts]
    elif contour == "fixed":
        contours = [EpsilonShift2(*eps)] * len(pts)
    else:
        raise DomainError(f"unknown contour policy {contour!r}")
    out = []
    for ub in ubars:
        for N in Ns:
            lat = Lattice(N, ub, offset)
            prices = [price_at(model, s1, s2, K, lat, e).price for (s1, s2), e in zip(pts, contours)]
            try:
                err = err_objective(prices, benchmark, pts).err
            except DomainError:
                err = float("nan")
            out.append({"N": int(N), "u_bar": float(ub), "err": err})
    return out

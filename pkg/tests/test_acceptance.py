"""Acceptance checks, one test per criterion part.

Every test records a pass/fail line through the ``criterion`` fixture; the
lines are printed together at the end of the pytest run.
"""

import math
import time

import numpy as np
import pytest

from reference_prices import (
    GBM,
    GBM_ANALYTIC,
    GBM_N64,
    GBM_STRIKES,
    GREEKS_FD,
    GREEKS_FFT,
    GREEKS_K,
    GREEKS_TOL,
    S10,
    S20,
    SV,
    SV_N256,
    SV_VG_STRIKES,
    VG,
    VG_N256,
)
from spreadfft.models import GbmBasketParams
from spreadfft.oracles import McConfig, err_study, gbm_benchmark, mc_price
from spreadfft.payoff import bound_contour, invert_phat2, payoff2, phat2, phat_bound
from spreadfft.pricer import (
    Lattice,
    basket_price_at,
    fd_greek,
    greek_at,
    interpolate_strikes,
    price_panel,
    price_strikes,
)

LAT256 = Lattice(256, 40.0)


def _maxdev(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def _mc_bracket(prices, mc):
    z = np.abs(np.asarray(mc.price) - prices) / np.asarray(mc.std_error)
    return int(np.sum(z < 3.0)), z


# ---------------------------------------------------------------- 1: GBM prices


@pytest.fixture(scope="module")
def gbm_runs():
    t0 = time.perf_counter()
    p256 = price_strikes(GBM, S10, S20, GBM_STRIKES, LAT256)
    p64 = price_strikes(GBM, S10, S20, GBM_STRIKES, Lattice(64, 40.0))
    return p256, p64, time.perf_counter() - t0


def test_c1a_gbm_256(gbm_runs, criterion):
    d = _maxdev(gbm_runs[0], GBM_ANALYTIC)
    assert criterion("1a", d < 5e-6, f"GBM N=256 max |dev| = {d:.2e} (tol 5e-6)")


def test_c1b_gbm_64(gbm_runs, criterion):
    d = _maxdev(gbm_runs[1], GBM_N64)
    assert criterion("1b", d < 5e-6, f"GBM N=64, u_bar=40 max |dev| from 64-node column = {d:.3g} (tol 5e-6)")


def test_c1c_gbm_runtime(gbm_runs, criterion):
    t = gbm_runs[2]
    assert criterion("1c", t < 5.0, f"GBM 20 prices in {t:.2f} s (limit 5 s)")


# ---------------------------------------------------------------- 2: benchmark


def test_c2_benchmark(criterion):
    got = [gbm_benchmark(GBM, S10, S20, K) for K in GBM_STRIKES]
    d = _maxdev(got, GBM_ANALYTIC)
    assert criterion("2", d < 1e-6, f"quadrature benchmark max |dev| = {d:.2e} (tol 1e-6)")


# ---------------------------------------------------------------- 3: SV


@pytest.fixture(scope="module")
def sv_prices():
    return price_strikes(SV, S10, S20, SV_VG_STRIKES, LAT256)


def test_c3a_sv_256(sv_prices, criterion):
    d = _maxdev(sv_prices, SV_N256)
    assert criterion("3a", d < 2e-5, f"SV N=256 max |dev| = {d:.2e} (tol 2e-5)")


@pytest.mark.slow
def test_c3b_sv_mc(sv_prices, criterion):
    mc = mc_price(SV, S10, S20, SV_VG_STRIKES, McConfig(1_000_000, n_steps=2000, seed=2024))
    hits, z = _mc_bracket(sv_prices, mc)
    assert criterion("3b", hits >= 9, f"SV MC 1e6x2000 brackets {hits}/11 strikes within 3 se "
                                      f"(max z = {z.max():.2f})")


# ---------------------------------------------------------------- 4: VG


@pytest.fixture(scope="module")
def vg_prices():
    return price_strikes(VG, S10, S20, SV_VG_STRIKES, LAT256)


def test_c4a_vg_256(vg_prices, criterion):
    d = _maxdev(vg_prices, VG_N256)
    assert criterion("4a", d < 5e-6, f"VG N=256 max |dev| = {d:.2e} (tol 5e-6)")


@pytest.mark.slow
def test_c4b_vg_mc(vg_prices, criterion):
    mc = mc_price(VG, S10, S20, SV_VG_STRIKES, McConfig(10_000_000, seed=2024, antithetic=True))
    hits, z = _mc_bracket(vg_prices, mc)
    assert criterion("4b", hits >= 9, f"VG MC 1e7 antithetic brackets {hits}/11 strikes within 3 se "
                                      f"(max z = {z.max():.2f})")


# ---------------------------------------------------------------- 5: Greeks


def test_c5a_fft_greeks(criterion):
    lat = Lattice(1024, 40.0)
    got = {w: greek_at(GBM, S10, S20, GREEKS_K, lat, which=w) for w in GREEKS_FFT}
    dev = {w: abs(got[w] - GREEKS_FFT[w]) for w in got}
    ok = all(dev[w] <= GREEKS_TOL[w] for w in dev)
    worst = max(dev, key=lambda w: dev[w] / GREEKS_TOL[w])
    assert criterion("5a", ok, f"FFT Greeks, worst {worst} |dev| = {dev[worst]:.2e} (tol {GREEKS_TOL[worst]:g})")


def test_c5b_fd_greeks(criterion):
    lat = Lattice(1024, 40.0)
    got = {w: fd_greek(GBM, S10, S20, GREEKS_K, lat, which=w, rel=0.01) for w in GREEKS_FD}
    dev = {w: abs(got[w] - GREEKS_FD[w]) for w in got}
    ok = all(dev[w] <= GREEKS_TOL[w] for w in dev)
    worst = max(dev, key=lambda w: dev[w] / GREEKS_TOL[w])
    assert criterion("5b", ok, f"FD Greeks, worst {worst} |dev| = {dev[worst]:.2e} (tol {GREEKS_TOL[worst]:g})")


# ---------------------------------------------------------------- 6: Err study


@pytest.fixture(scope="module")
def err_rows():
    t0 = time.perf_counter()
    rows = err_study(GBM, [64, 128, 256, 512, 1024], [20.0, 40.0])
    return rows, time.perf_counter() - t0


def test_c6a_truncation_plateau(err_rows, criterion):
    plateau = [r["err"] for r in err_rows[0] if r["u_bar"] == 20.0 and r["N"] >= 256]
    ok = all(3e-6 <= e <= 3e-5 for e in plateau)
    assert criterion("6a", ok, "u_bar=20 Err for N>=256 = " + ", ".join(f"{e:.2e}" for e in plateau)
                     + " (window [3e-6, 3e-5])")


def test_c6b_round_off_regime(err_rows, criterion):
    e = [r["err"] for r in err_rows[0] if r["u_bar"] == 40.0 and r["N"] == 1024][0]
    assert criterion("6b", e < 1e-9, f"u_bar=40, N=1024 Err = {e:.2e} (tol 1e-9)")


def test_c6c_err_runtime(err_rows, criterion):
    t = err_rows[1]
    assert criterion("6c", t < 120.0, f"Err study in {t:.1f} s (limit 120 s)")


# ---------------------------------------------------------------- 7: interpolation


@pytest.mark.parametrize("name", ["sv", "vg"])
def test_c7_interpolation(name, sv_prices, vg_prices, criterion):
    model, direct = (SV, sv_prices) if name == "sv" else (VG, vg_prices)
    panel = price_panel(model, LAT256, center=(math.log(S10), math.log(S20)))
    got = interpolate_strikes(panel, S10, S20, SV_VG_STRIKES, degree=8)
    d = _maxdev(got, direct)
    cid = "7a" if name == "sv" else "7b"
    assert criterion(cid, d < 1e-5, f"{name.upper()} degree-8 diagonal fit max |dev| = {d:.2e} (tol 1e-5)")


# ---------------------------------------------------------------- 8: inversion round trip


def test_c8_payoff_round_trip(criterion):
    rng = np.random.default_rng(8)
    x = rng.uniform(-1.0, 1.0, size=(100, 2))
    got = invert_phat2(x[:, 0], x[:, 1], 40.0, 1024, (-3.0, 1.0))
    dev = np.abs(got - payoff2(x[:, 0], x[:, 1]))
    worst = float(dev.max())
    assert criterion("8", worst < 1e-6, f"payoff from inverse transform max |dev| = {worst:.2e}, "
                                        f"median {np.median(dev):.2e} (tol 1e-6)")


# ---------------------------------------------------------------- 9: transform bound


def test_c9_bound(criterion):
    rng = np.random.default_rng(9)
    n = 10_000
    u = rng.uniform(-200.0, 200.0, size=(n, 2)) * rng.choice([0.01, 0.1, 1.0], size=(n, 1))
    epss = rng.uniform(0.05, 5.0, size=n)
    worst = 0.0
    for (u1, u2), e in zip(u, epss):
        c = bound_contour(e)
        ratio = abs(phat2(u1 + 1j * c.eps1, u2 + 1j * c.eps2)) / phat_bound((u1, u2), e)
        worst = max(worst, float(ratio))
    assert criterion("9", worst <= 1 + 1e-12, f"max |Phat|/bound over 1e4 points = {worst:.6f} (limit 1+1e-12)")


# ---------------------------------------------------------------- 10: basket


def test_c10a_single_short_basket(criterion):
    b = GbmBasketParams.from_bivariate(GBM)
    basket = [basket_price_at(b, S10, (S20,), K, LAT256).price for K in GBM_STRIKES]
    spread = price_strikes(GBM, S10, S20, GBM_STRIKES, LAT256)
    d = _maxdev(basket, spread)
    assert criterion("10a", d < 1e-8, f"M=1 basket vs spread pipeline max |dev| = {d:.2e} (tol 1e-8)")


@pytest.mark.slow
def test_c10b_two_short_basket_mc(criterion):
    b = GbmBasketParams(0.1, 1.0, (0.2, 0.1, 0.1), ((1, .5, .5), (.5, 1, .5), (.5, .5, 1)))
    fft = basket_price_at(b, 200.0, (96.0, 96.0), 1.0, Lattice(128, 30.0)).price
    mc = mc_price(b, 200.0, [96.0, 96.0], 1.0, McConfig(1_000_000, seed=2024, antithetic=True))
    z = abs(mc.price - fft) / mc.std_error
    assert criterion("10b", z < 3.0, f"M=2 basket FFT {fft:.5f} vs MC {mc.price:.5f} +- {mc.std_error:.4f} "
                                     f"(z = {z:.2f}, limit 3)")


# ---------------------------------------------------------------- 11: timing shape


def test_c11_panel_timing(criterion):
    lat = Lattice(2048, 40.0)
    times = {}
    for m in (GBM, SV, VG):
        best = math.inf
        for _ in range(2):
            t0 = time.perf_counter()
            price_panel(m, lat)
            best = min(best, time.perf_counter() - t0)
        times[m.name] = best
    ok = times["gbm"] < times["sv"] and times["gbm"] < times["vg"]
    assert criterion("11", ok, "N=2048 panel seconds " + ", ".join(f"{k}={v:.2f}" for k, v in times.items()))

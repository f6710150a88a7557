"""Reference prices and the model set-ups they belong to."""

from spreadfft.models import GbmParams, SvParams, VgParams

S10, S20 = 100.0, 96.0

GBM = GbmParams(r=0.1, T=1.0, sigma1=0.2, sigma2=0.1, rho=0.5, delta1=0.05, delta2=0.05)
SV = SvParams(r=0.1, T=1.0, sigma1=1.0, sigma2=0.5, rho=0.5, rho1=-0.5, rho2=0.25,
              v0=0.04, kappa=1.0, mu=0.04, sigma_v=0.05, delta1=0.05, delta2=0.05)
VG = VgParams(r=0.1, T=1.0, a_plus=20.4499, a_minus=24.4499, alpha=0.4, lam=10.0,
              compensator="first_order")

GBM_STRIKES = [0.4, 0.8, 1.2, 1.6, 2.0, 2.4, 2.8, 3.2, 3.6, 4.0]
GBM_ANALYTIC = [8.312461, 8.114994, 7.920820, 7.729932, 7.542324,
                7.357984, 7.176902, 6.999065, 6.824458, 6.653065]
GBM_N64 = [8.206666, 8.009643, 7.815913, 7.625469, 7.438304,
           7.254408, 7.073770, 6.896377, 6.722213, 6.551264]
GBM_N128 = [8.312331, 8.114864, 7.920691, 7.729804, 7.542196,
            7.357857, 7.176775, 6.998939, 6.824332, 6.652940]

SV_VG_STRIKES = [2.0, 2.2, 2.4, 2.6, 2.8, 3.0, 3.2, 3.4, 3.6, 3.8, 4.0]
SV_N256 = [7.548502, 7.453536, 7.359381, 7.266036, 7.173501, 7.081775,
           6.990856, 6.900745, 6.811439, 6.722939, 6.635241]
SV_INTERP = SV_N256
VG_N256 = [9.727458, 9.630006, 9.533200, 9.437040, 9.341527, 9.246662,
           9.152445, 9.058875, 8.965954, 8.873681, 8.782057]
VG_INTERP = VG_N256

GREEKS_K = 4.0
GREEKS_FFT = {"delta1": 0.512705, "delta2": -0.447079, "theta": 3.023777,
              "vega1": 33.114834, "vega2": -0.798972, "rho_corr": -4.193728}
GREEKS_FD = {"delta1": 0.512648, "delta2": -0.447127, "theta": 3.023823,
             "vega1": 33.114315, "vega2": -0.798959, "rho_corr": -4.193749}
GREEKS_TOL = {"delta1": 1e-4, "delta2": 1e-4, "theta": 1e-3,
              "vega1": 1e-3, "vega2": 1e-3, "rho_corr": 1e-4}

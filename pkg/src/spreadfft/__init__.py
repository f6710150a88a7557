"""Fourier pricing of spread and basket-spread options.

The spread payoff ``(e^{x1} - e^{x2} - 1)^+`` has a closed-form complex
Fourier transform built from gamma functions.  Combined with a model's
characteristic function, one inverse FFT produces prices for a whole panel
of initial log-prices.
"""

from .errors import (
    BranchError,
    ConfigError,
    ContourError,
    DomainError,
    ExtrapolationError,
    MemoryBudgetError,
    PoleError,
    QuadratureError,
    RangeError,
    ResidueError,
    SpreadFFTError,
    UnsupportedGreek,
)
from .models import GbmBasketParams, GbmParams, SvParams, VgParams
from .payoff import EpsilonShift2, EpsilonShiftM, phat2, phatM
from .pricer import (
    Lattice,
    PricePanel,
    basket_price_at,
    greek_at,
    greek_panel,
    interpolate_strikes,
    price_at,
    price_basket_panel,
    price_panel,
)

__version__ = "0.1.0"

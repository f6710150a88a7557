import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spreadfft.complex_math import beta, gamma, log_beta, log_gamma
from spreadfft.errors import DomainError, PoleError, RangeError

# mpmath at 30 digits, frozen
MP_GAMMA = {
    1 + 1j: 0.49801566811835604271 - 0.15494982830181068512j,
    -2.5 + 0.3j: -0.61382299743774149045 - 0.21123261493704177661j,
    0.25: 3.6256099082219083119,
}
MP_LOG_GAMMA = {
    0.5 + 100j: -156.16069414628498918 + 360.51743526790643592j,
    -7.5 - 20j: -54.665935141768230587 - 25.790219969176731037j,
    3 - 40j: -52.689155060822636631 - 111.4051324154599655j,
}


def same_log(a, b, tol):
    """Logs agree up to a multiple of 2 pi i."""
    d = a - b
    k = round(d.imag / (2 * math.pi))
    return abs(d - 2j * math.pi * k) < tol * max(1.0, abs(b))


def test_integer_and_half_integer_values():
    assert gamma(5) == pytest.approx(24.0, rel=1e-13)
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)
    assert gamma(-1.5) == pytest.approx(4 * math.sqrt(math.pi) / 3, rel=1e-13)
    assert log_gamma(0.5) == pytest.approx(0.5723649429247001, rel=1e-13)


@pytest.mark.parametrize("z,ref", list(MP_GAMMA.items()))
def test_gamma_against_frozen_mpmath(z, ref):
    assert abs(gamma(z) - ref) < 1e-13 * abs(ref)


@pytest.mark.parametrize("z,ref", list(MP_LOG_GAMMA.items()))
def test_log_gamma_large_imaginary_part(z, ref):
    # gamma itself is ~1e-68 here; the log keeps full relative accuracy
    assert same_log(complex(log_gamma(z)), ref, 1e-13)


def test_scalar_in_scalar_out_and_shape_preserved():
    assert np.ndim(log_gamma(2.0 + 1j)) == 0
    z = np.array([[0.3 + 1j, 2.0], [-0.5 + 0.1j, 7 - 3j]])
    assert log_gamma(z).shape == (2, 2)
    assert gamma(z).shape == (2, 2)


def test_vectorised_matches_scalar():
    z = np.array([0.3 + 1j, -4.2 + 0.7j, 12 - 30j, 0.5])
    vec = gamma(z)
    for zi, vi in zip(z, vec):
        assert vi == gamma(complex(zi))


@pytest.mark.parametrize("z", [0, -1, -2, -10, -3 + 1e-15])
def test_poles_raise(z):
    with pytest.raises(PoleError):
        log_gamma(z)
    with pytest.raises(PoleError):
        gamma(np.array([1.0, z]))


def test_non_finite_raises_domain_error():
    with pytest.raises(DomainError):
        log_gamma(complex(float("nan"), 0))
    with pytest.raises(DomainError):
        gamma(float("inf"))


def test_overflow_raises_range_error():
    with pytest.raises(RangeError):
        gamma(200.0)
    assert np.isfinite(log_gamma(200.0))


def test_log_beta_and_beta():
    a, b = 0.7 + 2j, 1.3 - 0.5j
    ref = complex(mp.beta(a, b))
    assert abs(beta(a, b) - ref) < 1e-13 * abs(ref)
    assert same_log(complex(log_beta(a, b)), complex(mp.log(mp.beta(a, b))), 1e-13)
    assert beta(2.0, 3.0) == pytest.approx(1 / 12, rel=1e-13)


finite = st.floats(-30, 30, allow_nan=False)
away_from_poles = st.builds(complex, finite, finite).filter(
    lambda z: abs(z.imag) > 1e-3 or abs(z.real - round(z.real)) > 1e-3
)


@settings(max_examples=300, deadline=None)
@given(away_from_poles)
def test_matches_mpmath(z):
    ref = complex(mp.loggamma(z))
    assert same_log(complex(log_gamma(z)), ref, 5e-13)


@settings(max_examples=300, deadline=None)
@given(away_from_poles)
def test_recurrence(z):
    # log Gamma(z+1) = log z + log Gamma(z)  (mod 2 pi i)
    assert same_log(complex(log_gamma(z + 1)), cmath.log(z) + complex(log_gamma(z)), 1e-12)


@settings(max_examples=200, deadline=None)
@given(away_from_poles.filter(lambda z: abs(z.imag) < 10))
def test_reflection(z):
    lhs = complex(gamma(z)) * complex(gamma(1 - z))
    rhs = math.pi / cmath.sin(math.pi * z)
    assert abs(lhs - rhs) < 1e-11 * abs(rhs)


@settings(max_examples=200, deadline=None)
@given(away_from_poles)
def test_conjugate_symmetry(z):
    assert same_log(complex(log_gamma(z.conjugate())), complex(log_gamma(z)).conjugate(), 1e-13)

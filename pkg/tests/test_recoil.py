import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pairabsorb.errors import OutOfRangeError
from pairabsorb.recoil import (
    GaussianRecoilModel,
    RecoilOverlaps,
    decompose_overlap,
    gaussian_recoil_overlap,
)

_trapezoid = getattr(np, "trapezoid", None) or np.trapz


def overlap_by_quadrature(sigma, k):
    # independent oracle: characteristic function of the position density,
    # integrated on a wide trapezoid grid
    xs = np.linspace(-13.0 * sigma, 13.0 * sigma, 20001)
    density = np.exp(-(xs**2) / (2.0 * sigma**2)) / (sigma * math.sqrt(2.0 * math.pi))
    return abs(_trapezoid(density * np.exp(1j * k * xs), xs))


@pytest.mark.parametrize("sigma", [0.1, 1.0, 10.0])
@pytest.mark.parametrize("k", [0.0, 0.5, 1.0, 5.0])
def test_closed_form_matches_quadrature(sigma, k):
    closed = gaussian_recoil_overlap(GaussianRecoilModel(sigma_x=sigma, k_recoil=k))
    assert abs(closed - overlap_by_quadrature(sigma, k)) < 1e-8


def test_unit_variance_unit_kick():
    # frozen from the quadrature oracle above
    assert overlap_by_quadrature(1.0, 1.0) == pytest.approx(0.6065306597126335, abs=1e-12)
    model = GaussianRecoilModel(sigma_x=1.0, k_recoil=1.0)
    assert gaussian_recoil_overlap(model) == pytest.approx(0.6065306597126335, abs=1e-8)


def test_no_kick_is_unity():
    assert gaussian_recoil_overlap(GaussianRecoilModel(sigma_x=2.3, k_recoil=0.0)) == 1.0


def test_overlap_strictly_decreasing_in_k():
    sigma = 0.7
    values = [
        gaussian_recoil_overlap(GaussianRecoilModel(sigma_x=sigma, k_recoil=k))
        for k in (0.0, 0.3, 1.0, 2.0, 4.0)
    ]
    assert all(earlier > later for earlier, later in zip(values, values[1:]))
    assert all(0.0 < v <= 1.0 for v in values)


def test_decompose_examples():
    assert decompose_overlap(1.0) == (1.0, 0.0)
    assert decompose_overlap(0.0) == (0.0, 1.0)
    a, b = decompose_overlap(0.6)
    assert (a, b) == (0.6, pytest.approx(0.8, abs=1e-15))
    a, b = decompose_overlap(-0.6)
    assert a == -0.6 and b == pytest.approx(0.8, abs=1e-15)


def test_decompose_out_of_range():
    with pytest.raises(OutOfRangeError):
        decompose_overlap(1.001)
    # grace band keeps rounding-level excursions usable
    a, b = decompose_overlap(1.0 + 1e-13)
    assert (a, b) == (1.0, 0.0)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=-1.0, max_value=1.0))
def test_decompose_stays_on_unit_circle(s):
    a, b = decompose_overlap(s)
    assert b >= 0.0
    assert abs(a * a + b * b - 1.0) <= 1e-12


@pytest.mark.parametrize("sigma", [0.1, 1.0, 10.0])
@pytest.mark.parametrize("k", [0.0, 0.5, 1.0, 5.0])
def test_gaussian_model_composes_into_valid_overlaps(sigma, k):
    ov = RecoilOverlaps.from_gaussian(GaussianRecoilModel(sigma_x=sigma, k_recoil=k))
    assert abs(ov.a**2 + ov.b**2 - 1.0) <= 1e-12
    assert ov.a == ov.c and ov.b == ov.d


def test_overlap_pair_validation():
    with pytest.raises(ValueError):
        RecoilOverlaps(a=0.6, b=-0.8, c=1.0, d=0.0)
    with pytest.raises(ValueError):
        RecoilOverlaps(a=0.9, b=0.9, c=1.0, d=0.0)


def test_gaussian_model_validation():
    with pytest.raises(ValueError):
        GaussianRecoilModel(sigma_x=0.0, k_recoil=1.0)
    with pytest.raises(ValueError):
        GaussianRecoilModel(sigma_x=1.0, k_recoil=-0.2)
    with pytest.raises(ValueError):
        GaussianRecoilModel(sigma_x=math.inf, k_recoil=0.0)

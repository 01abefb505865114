import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qmodular.special import (beta_complete_half, beta_half, beta_inc_half, beta_inc_oracle,
                              log_ratio, log_ratio_array)

SQ5 = math.sqrt(5)
AM, AP = (-1 - SQ5) / 2, (-1 + SQ5) / 2


def test_log_ratio_two_logs():
    val = log_ratio(1j, AM, AP).value
    ref = math.log(abs(1j - AM)) - math.log(abs(1j - AP)) + 1j * (np.angle(1j - AM) - np.angle(1j - AP))
    # winding correction into the principal strip
    ref = complex(ref.real, (ref.imag + math.pi) % (2 * math.pi) - math.pi)
    assert abs(val - ref) < 1e-15


def test_log_ratio_limit_and_cut():
    assert abs(log_ratio(1e8j, AM, AP).value) < 1e-7
    with pytest.raises(ValueError):
        log_ratio(0.0, AM, AP)
    v = log_ratio(0.0, AM, AP, allow_cut=True)
    assert v.on_branch_cut and v.value.imag == math.pi
    arr = log_ratio_array(0j, np.array([AM]), np.array([AP]))
    assert arr[0].imag == math.pi


def test_beta_examples():
    assert beta_half(1.0, 0) == pytest.approx(math.pi, abs=1e-14)
    assert beta_half(1.0, 2) == pytest.approx(3 * math.pi / 8, abs=1e-14)
    assert beta_half(0.5, 0) == pytest.approx(math.pi / 2, abs=1e-14)
    assert beta_complete_half(2) == pytest.approx(3 * math.pi / 8, abs=1e-15)
    assert beta_inc_oracle(1.0, 0.5, 0.5) == pytest.approx(math.pi, abs=1e-10)
    assert beta_inc_oracle(0.0, 2.5, 0.5) == 0.0


@pytest.mark.parametrize("x", [0.1 * i for i in range(1, 10)])
def test_beta_cross_validation(x):
    assert abs(beta_inc_oracle(x, 2.5, 0.5) - beta_inc_half(x, 2)) < 1e-10


def test_beta_grid_vectorized():
    xs = np.linspace(0.01, 0.99, 99)
    for n in range(7):
        vec = beta_half(xs, n)
        assert np.max(np.abs(vec - np.array([beta_inc_half(x, n) for x in xs]))) < 1e-15


@settings(max_examples=100, deadline=None)
@given(x=st.floats(0.0, 1.0), n=st.integers(0, 8))
def test_beta_monotone_bounded(x, n):
    b = beta_inc_half(x, n)
    assert -1e-15 <= b <= beta_complete_half(n) + 1e-13
    assert beta_inc_half(min(1.0, x + 0.01), n) >= b - 1e-15


@settings(max_examples=60, deadline=None)
@given(x=st.floats(0.01, 0.99), n=st.integers(0, 6))
def test_beta_recurrence(x, n):
    # B(x; a+1, 1/2) = (a B(x; a, 1/2) - x^a (1-x)^(1/2)) / (a + 1/2)
    a = n + 0.5
    lhs = beta_inc_half(x, n + 1)
    rhs = (a * beta_inc_half(x, n) - x ** a * math.sqrt(1 - x)) / (a + 0.5)
    assert abs(lhs - rhs) < 1e-13

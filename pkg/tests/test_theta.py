import numpy as np
import pytest

from qmodular import theta
from qmodular.qforms import S, j_factor, mobius


def test_kronecker():
    assert theta.kronecker(0, 1) == 1 and theta.kronecker(0, 3) == 0
    assert theta.kronecker(2, 7) == 1 and theta.kronecker(3, 7) == -1
    assert theta.kronecker(-1, 3) == -1 and theta.kronecker(-1, -3) == 1
    with pytest.raises(ValueError):
        theta.kronecker(1, 4)


def test_doubling_and_translation():
    v = theta.eval_theta_kernel(2, 1j, 1j)
    assert v.est_error <= 1e-8 * abs(v.value)
    tau, z = complex(0.2, 1.1), complex(0.1, 0.8)
    a, b = theta.eval_theta_kernel(2, tau, z + 1).value, theta.eval_theta_kernel(2, tau, z).value
    assert abs(a - b) <= 1e-12 * abs(b)


@pytest.mark.parametrize("k", [2, 4])
def test_tau_modularity(k):
    tau, z = complex(0.2, 1.1), complex(0.1, 0.8)
    a = theta.eval_theta_kernel(k, mobius(S, tau), z).value
    b = j_factor(S, tau) ** (-2 * k) * theta.eval_theta_kernel(k, tau, z).value
    assert abs(a - b) < 1e-6 * abs(b)


def test_z_translation_matrix():
    res, C = theta.theta_z_modularity_residual(2, 1j, [complex(0.1, 0.8), complex(-0.2, 0.5)], (1, 1, 0, 1))
    assert res < 1e-9 and abs(C - 1) < 1e-9


def test_control_kernel_half_integral():
    # without |Q_tau| the sum is modular in z of weight -1/2 - k with a sign
    zs = [complex(0.1, 0.8), complex(-0.2, 0.5), complex(0.3, 1.2)]
    for g in ((1, 0, 4, 1), (3, 1, 8, 3)):
        res, C = theta.theta_z_modularity_residual(2, 1j, zs, g, kappa=-2.5, qtau_factor=False)
        assert res < 1e-10 and abs(abs(C.real) - 1) < 1e-10


def test_gamma0_matrix_validation():
    with pytest.raises(ValueError):
        theta.theta_z_modularity_residual(2, 1j, [1j], (1, 0, 2, 1))


def test_plus_space_support():
    tau, y = complex(0.1, 1.0), 0.9
    n = 64
    xs = np.arange(n) / n
    vals = np.array([theta.eval_theta_kernel(2, tau, complex(x, y)).value for x in xs])
    scale = np.max(np.abs(vals))
    for d in (2, 3, 6, 7):
        assert abs(np.mean(vals * np.exp(2j * np.pi * d * xs))) < 1e-12 * scale

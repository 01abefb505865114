import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qmodular import diffops, maass, series
from qmodular.diffops import DiffSpec
from qmodular.qforms import Params, QForm, ball_forms, roots
from qmodular.special import log_ratio_array


def test_wirtinger_basic():
    p = complex(0.3, 1.2)
    d, db = diffops.wirtinger(lambda z: z * z, p)
    assert abs(d - 2 * p) < 1e-7 and abs(db) < 1e-7
    d, db = diffops.wirtinger(lambda z: z.imag ** 2, p)
    assert abs(db - 1j * p.imag) < 1e-7


def test_xi_holomorphic_zero():
    assert abs(diffops.xi_apply(np.exp, -4, complex(0.1, 1.0))) < 1e-7


def test_wirtinger_rejects_crossing(p5):
    with pytest.raises(ValueError):
        diffops.wirtinger(lambda z: z, 1j + 5e-5j, DiffSpec(step=1e-4), params=p5)


@settings(max_examples=30, deadline=None)
@given(a=st.integers(-5, 5).filter(bool), b=st.integers(-5, 5), c=st.integers(-5, 5),
       u=st.floats(-1, 1), v=st.floats(0.3, 2))
def test_qtau_wirtinger(a, b, c, u, v):
    Q = QForm(a, b, c)
    tau = complex(u, v)
    if abs(Q.value(tau)) < 1e-3:
        return
    _, db = diffops.wirtinger(Q.q_tau, tau)
    assert abs(2j * v * v * db - Q.value(tau)) < 1e-6 * (1 + abs(Q.value(tau)))


def test_cauchy():
    p = complex(0.2, 2.0)
    wide = DiffSpec(contour_radius=1.0)
    for n in (0, 1, 3, 6):
        assert abs(diffops.cauchy_deriv(np.exp, p, n, wide) - np.exp(p)) < 1e-10
    for m in (2, 5):
        assert abs(diffops.cauchy_deriv(lambda z: z ** m, p, m, wide) - math.factorial(m)) < 1e-10
    Q = QForm(1, 1, -1)
    am, ap = roots(Q)
    f = lambda z: log_ratio_array(z, np.array([am]), np.array([ap]))[0]  # noqa: E731
    tau = 2j
    assert abs(diffops.cauchy_deriv(f, tau, 1, DiffSpec(contour_radius=0.5)) + math.sqrt(5) / Q.value(tau)) < 1e-9
    with pytest.raises(ValueError):
        diffops.cauchy_deriv(f, 0.1j, 1, DiffSpec(contour_radius=0.5))


def test_bol_terms():
    assert diffops.bol_term_check(QForm(1, 1, -1), 1, 2j) < 1e-8
    assert diffops.bol_term_check(QForm(1, 1, -1), 3, complex(0.2, 2.5)) < 1e-6
    assert diffops.bol_term_check(QForm(-1, -1, 1), 2, 1.7j) < 1e-7
    # the constant usually quoted for this identity does not reproduce it
    assert diffops.bol_term_check(QForm(1, 1, -1), 2, 1.7j, displayed=True) > 0.5


def test_bol_identity_holomorphic():
    f = lambda z: np.exp(2j * math.pi * z)  # noqa: E731
    tau = complex(0.1, 0.7)
    spec = DiffSpec(step=1e-3)
    r1 = lambda z: diffops.raising(f, -1, z, spec)  # noqa: E731
    assert abs(diffops.raising(r1, 1, tau, spec) - (-4 * math.pi) ** 2 * f(tau)) < 1e-6 * abs((4 * math.pi) ** 2 * f(tau))
    assert abs(diffops.bol(f, 2, tau, DiffSpec(contour_radius=0.3)) - f(tau)) < 1e-10


def test_laplacian_simple():
    assert abs(diffops.laplacian(lambda z: z.imag, 0, complex(0.2, 1.1))) < 1e-6
    assert abs(diffops.laplacian(lambda z: z ** 3, -4, complex(0.2, 1.1), DiffSpec(step=1e-3))) < 1e-5


def test_xi_Psi_and_laplacian(p5):
    tau = complex(0.3, 1.5)
    F = ball_forms(5, tau, 4096.0)
    f = lambda z: maass.eval_Psi(p5, z, forms=F).value  # noqa: E731
    lam = series.eval_Lambda(p5, tau, forms=F).value
    target = 5 ** 2.5 * lam
    assert abs(diffops.xi_apply(f, -4, tau, params=p5) - target) < 1e-4 * abs(target)
    assert diffops.laplacian_residual(f, -4, tau, params=p5) < 1e-3 * abs(f(tau))


def test_xi_eichler(p5):
    tau = complex(0.3, 1.6)
    spec = DiffSpec(step=1e-3)
    g = lambda z: maass.eichler_hol(p5, z).value  # noqa: E731
    h = lambda z: maass.eichler_nonhol(p5, z).value  # noqa: E731
    lam = series.eval_Lambda(p5, tau).value
    assert abs(diffops.xi_apply(g, -4, tau, spec)) < 1e-6
    assert abs(diffops.xi_apply(h, -4, tau, spec) - lam) < 1e-4 * abs(lam)

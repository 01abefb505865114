import math

import numpy as np
import pytest

from qmodular import maass, series
from qmodular.qforms import S, T, Params, QForm, j_factor, mobius
from qmodular.series import DEFAULT_POLICY

C_INF_5_2 = 4.43455032492


def test_root_counts_small(p5):
    r = maass.root_counts(5, 10)
    assert r[1] == 1 and r[2] == 0


@pytest.mark.parametrize("D", [5, 8, 12, 13, 21, 28])
def test_root_counts_brute(D):
    A = 400
    r = maass.root_counts(D, A)
    brute = [sum(1 for b in range(2 * a) if (b * b - D) % (4 * a) == 0) for a in range(1, A + 1)]
    assert list(r[1:]) == brute
    assert np.all(r[1:] <= maass.residue_count_bound(D, np.arange(1, A + 1)))


def test_c_infinity(p5):
    c = maass.c_infinity(p5, 1e-8)
    assert c.value == pytest.approx(C_INF_5_2, abs=1e-9)
    assert c.value == 2 * c.half_sum
    assert c.tail_bound <= 1e-8


def test_Psi_limit(p5):
    c = maass.c_infinity(p5).value
    d = [abs(maass.eval_Psi(p5, 1j * V).value - c) for V in (6, 10, 16)]
    assert max(d) < 1e-5
    # below the truncation floor the approach is exponential
    e = [abs(maass.eval_Psi(p5, 1j * V).value - c) for V in (1.2, 2.0, 3.0)]
    assert e[0] > e[1] > e[2]


@pytest.mark.parametrize("g", [S, T])
def test_Psi_modular(p5, g):
    tau = complex(0.23, 1.9)
    a, b = maass.eval_Psi(p5, mobius(g, tau)), maass.eval_Psi(p5, tau)
    jt = j_factor(g, tau)
    assert abs(a.value - jt ** -4 * b.value) < 10 * (a.est_error + abs(jt) ** -4 * b.est_error) + 1e-13


def test_Psi_refuses_ED(p5):
    with pytest.raises(ValueError):
        maass.eval_Psi(p5, 1j)


def test_vertical_path_split(p5):
    path = maass.vertical_path(p5, 0.8j)
    ends = {round(b, 12) for _, b in path.segments}
    assert 1.0 in ends
    assert path.segments[0][0] == pytest.approx(0.8)
    assert path.v_max == pytest.approx(math.sqrt(5) / 2 + 0.5 + maass.TAIL_HEIGHT)


def test_eichler_refinement(p5):
    tau = complex(0.1, 2.5)
    E20, L20 = maass.eichler_pair(p5, tau, DEFAULT_POLICY, 20)
    E40, L40 = maass.eichler_pair(p5, tau, DEFAULT_POLICY, 40)
    assert abs(E20.value - E40.value) < 1e-7
    assert abs(L20.value - L40.value) < 1e-7


def test_eichler_nonhol_symmetry(p5):
    tau = complex(0.3, 1.6)
    a = maass.eichler_nonhol(p5, -tau.conjugate()).value
    b = maass.eichler_nonhol(p5, tau).value
    assert abs(a - b.conjugate()) < 1e-9 * (1 + abs(b))


def test_split_unbounded(p5):
    for tau in (complex(0.1, 2.2), complex(-0.3, 1.4)):
        rep = maass.split_residual(p5, tau)
        assert rep.residual < 1e-4
        assert rep.local_term == 0
        assert rep.residual_local == rep.residual


def test_split_with_local_term_bounded(p5):
    for tau in (0.7j, complex(0.3, 0.5)):
        assert maass.enclosing_forms(p5, tau)
        rep = maass.split_residual(p5, tau)
        assert rep.residual_local < 1e-4
        # without the local term the vertical-path identity is off by O(1)
        assert rep.residual > 1.0


def test_enclosing_forms_deep(p8):
    # inside S_Q the value Q_tau reaches -D/(4|a|v), well beyond sqrt(D) near the real line
    tau = complex(0.05, 0.3)
    found = set(maass.enclosing_forms(p8, tau))
    F = series.ball_forms(8, tau, 100.0)
    ref = {Q for Q in F.forms() if np.sign(Q.a) * Q.q_tau(tau) < 0}
    assert found == ref


def test_local_polynomial_coefficient():
    from qmodular.special import beta_complete_half
    assert beta_complete_half(2) == pytest.approx(3 * math.pi / 8, abs=1e-15)

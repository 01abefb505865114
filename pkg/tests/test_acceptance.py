"""Acceptance criteria, one test per criterion, each at its stated tolerance.

Every test records a PASS/FAIL line that is printed in the pytest terminal
summary (and by running this file directly).  Criteria that do not hold for
the objects as defined are marked xfail(strict=True): they run in full, print
FAIL, and would turn the run red if they ever started passing.
"""

import json
import math
import sys

import numpy as np
import pytest

from qmodular import diffops, maass, qforms, series, theta, verify
from qmodular.qforms import S, T, Params, QForm, ball_forms, j_factor, mobius
from qmodular.series import DEFAULT_POLICY, TruncationPolicy
from qmodular.special import beta_half, beta_inc_oracle

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

P5 = Params(5, 2)
APEX = (-1 + 1j * math.sqrt(5)) / 2


def record(n: int, ok: bool, detail: str) -> bool:
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def criterion_1():
    """Exact identities at 200 random (Q, gamma, tau), relative residual < 1e-10."""
    rep = [r for r in verify.suite_run("transforms", P5, seed=1) if r.check_id == "transforms.exact_identities"][0]
    ok = rep.passed and rep.tolerance == 1e-10 and rep.metadata["samples"] == 200
    return record(1, ok, f"worst relative residual {rep.residual:.2e} over 200 samples (tol 1e-10)")


def criterion_2():
    worst_diag, worst_mod = 0.0, 0.0
    ok = True
    rng = np.random.default_rng(2)
    pts = [complex(0.2, 0.9), complex(-0.4, 1.5)] + verify.sample_points(rng, P5, 3)
    for tau in pts:
        O = series.eval_Omega(P5, tau, tau.conjugate())
        ok &= abs(O.value) < max(1e-6, 10 * O.est_error)
        worst_diag = max(worst_diag, abs(O.value))
    for tau, w in zip(pts, [verify.random_lower(rng) for _ in pts]):
        for g in (S, T):
            a = series.eval_Omega(P5, mobius(g, tau), mobius(g, w))
            b = series.eval_Omega(P5, tau, w)
            jt = j_factor(g, tau)
            res = abs(a.value - jt ** (2 * P5.k + 2) * b.value)
            # 10 est plus the rounding floor of the sum
            ok &= res < 10 * (a.est_error + abs(jt) ** (2 * P5.k + 2) * b.est_error) + 1e-13 * (1 + abs(b.value))
            worst_mod = max(worst_mod, res)
    pol = TruncationPolicy(128)
    tau = complex(0.25, 2.5)
    defect = abs(series.eval_Omega(P5, tau, -16j, pol).value - series.eval_psi(P5, tau, pol).value)
    ok &= defect < 1e-5
    return record(2, bool(ok), f"|Omega(tau,conj tau)| max {worst_diag:.1e}; bimodularity max {worst_mod:.1e}; "
                               f"Omega(tau,-16i)-psi {defect:.2e} (tol 1e-5, bound_a=128)")


def criterion_3():
    taus = [complex(0.1, 1.4), complex(-0.35, 0.8), complex(0.45, 2.2)]
    r_psi = max(series.psi_transform_residual(P5, t) for t in taus)
    r_phi = max(series.phi_transform_residual(P5, t) for t in taus)
    brute = sorted((a, b, c) for a in range(-5, 0) for c in range(1, 6) for b in range(-5, 6)
                   if b * b - 4 * a * c == 5)
    F = ball_forms(5, taus[0], DEFAULT_POLICY.radius)
    got = sorted({(int(a), int(b), int(c)) for a, b, c in zip(F.a, F.b, F.c) if a < 0 < c})
    ok = r_psi < 1e-6 and r_phi < 1e-6 and brute == got == [(-1, -1, 1), (-1, 1, 1)]
    return record(3, ok, f"psi inversion {r_psi:.1e}, phi inversion {r_phi:.1e} (tol 1e-6); a<0<c forms {got}")


def criterion_4():
    Ja = verify.Lambda_jump(P5, APEX).jump
    Ji = verify.Lambda_jump(P5, 1j).jump
    ok_apex = abs(Ja - (-32 / 125)) < 1e-4
    ok_i = abs(Ji) < 1e-5
    return record(4, ok_apex and ok_i,
                  f"apex jump {Ja.real:.6f} vs -0.256 ({'ok' if ok_apex else 'off'}); "
                  f"jump at i {Ji.real:.6f}, required |.|<1e-5; finite-sum value there is "
                  f"{verify.expected_Lambda_jump(P5, 1j).real:.6f} = -16/125")


def criterion_5():
    unb = [complex(0.1, 2.2), complex(-0.3, 1.4)]
    bnd = [0.7j, complex(0.3, 0.5)]
    sigs = {qforms.component_signature(P5, z) for z in unb + bnd}
    reps = [maass.split_residual(P5, z) for z in unb + bnd]
    c = maass.c_infinity(P5, 1e-7)
    lim = abs(maass.eval_Psi(P5, 16j).value - c.value)
    ok = len(sigs) >= 2 and all(r.residual < 1e-4 for r in reps) and lim < 1e-5
    lits = ", ".join(f"{r.residual:.1e}" for r in reps)
    locs = ", ".join(f"{r.residual_local:.1e}" for r in reps)
    return record(5, ok, f"{len(sigs)} components; residuals unbounded/unbounded/bounded/bounded [{lits}] "
                         f"(tol 1e-4); with local term [{locs}]; Psi(16i)-c_inf {lim:.1e}")


def criterion_6():
    tau = complex(0.3, 1.5)
    F = ball_forms(5, tau, DEFAULT_POLICY.radius)
    f = lambda z: maass.eval_Psi(P5, z, forms=F).value  # noqa: E731
    target = 5 ** 2.5 * series.eval_Lambda(P5, tau, forms=F).value
    xi = abs(diffops.xi_apply(f, -4, tau, params=P5) - target) / abs(target)
    lap = diffops.laplacian_residual(f, -4, tau, params=P5) / abs(f(tau))
    return record(6, xi < 1e-4 and lap < 1e-3, f"xi relative {xi:.1e} (tol 1e-4); Laplacian/|Psi| {lap:.1e} (tol 1e-3)")


def criterion_7():
    forms = [QForm(1, 1, -1), QForm(-1, 1, 1), QForm(1, 3, 1)]
    pts = [complex(0.2, 2.5), complex(-0.3, 1.7)]
    worst = max(diffops.bol_term_check(Q, n, p) for Q in forms for p in pts for n in (1, 2, 3))
    return record(7, worst < 1e-6, f"worst relative residual {worst:.1e} over 3 forms x 2 points x n=1,2,3 (tol 1e-6)")


def criterion_8():
    J = verify.Psi_jump(P5, APEX)
    dJ = verify.Psi_dbar_jump(P5, APEX)
    exp = verify.expected_dbar_jump(P5, APEX)
    rel = abs(dJ.jump - exp) / abs(exp)
    return record(8, abs(J.jump) < 1e-5 and rel < 1e-3,
                  f"Psi jump {abs(J.jump):.1e} (tol 1e-5); dbar jump relative {rel:.1e} (tol 1e-3)")


def criterion_9():
    xs = np.linspace(0.01, 0.99, 99)
    worst = 0.0
    for n in range(7):
        vals = beta_half(xs, n)
        ref = np.array([beta_inc_oracle(x, n + 0.5, 0.5) for x in xs])
        worst = max(worst, float(np.max(np.abs(vals - ref))))
    full = abs(beta_half(1.0, 2) - 3 * math.pi / 8)
    return record(9, worst < 1e-10 and full < 1e-12,
                  f"99x7 grid max |engine - quadrature| {worst:.1e} (tol 1e-10); B(1;5/2,1/2) error {full:.1e}")


def criterion_10():
    tau, z = complex(0.2, 1.1), complex(0.1, 0.8)
    a = theta.eval_theta_kernel(2, mobius(S, tau), z).value
    b = j_factor(S, tau) ** -4 * theta.eval_theta_kernel(2, tau, z).value
    r_tau = abs(a - b) / abs(b)
    t0, t1 = theta.eval_theta_kernel(2, tau, z).value, theta.eval_theta_kernel(2, tau, z + 1).value
    r_z = abs(t1 - t0) / abs(t0)
    zs = [complex(0.1, 0.8), complex(-0.2, 0.5), complex(0.3, 1.2)]
    r_g = {g: theta.theta_z_modularity_residual(2, 1j, zs, g)[0] for g in ((1, 0, 4, 1), (3, 1, 8, 3))}
    r_ctrl = theta.theta_z_modularity_residual(2, 1j, zs, (3, 1, 8, 3), kappa=-2.5, qtau_factor=False)[0]
    ok = r_tau < 1e-6 and r_z < 1e-12 and all(r < 1e-5 for r in r_g.values())
    gs = ", ".join(f"{g}: {r:.2e}" for g, r in r_g.items())
    return record(10, ok, f"tau-S {r_tau:.1e}; z-translation {r_z:.1e}; Gamma_0(4) weight 1/2-k [{gs}] "
                          f"(tol 1e-5); control without |Q_tau| {r_ctrl:.1e}")


def _clear_caches():
    maass.eichler_pair.cache_clear()
    maass._lambda_on_line.cache_clear()
    maass.c_infinity.cache_clear()


def criterion_11():
    bad = []
    for name in verify.SUITES:
        outs = []
        for workers in (1, 4):
            _clear_caches()
            reps = verify.suite_run(name, P5, seed=3, workers=workers)
            outs.append(json.dumps(verify.reports_json(reps, P5, name, 3), sort_keys=True))
        if outs[0] != outs[1]:
            bad.append(name)
    return record(11, not bad, f"{len(verify.SUITES)} suites, workers 1 vs 4 with cold caches; "
                               f"differing: {bad or 'none'}")


def test_criterion_1():
    assert criterion_1()


def test_criterion_2():
    assert criterion_2()


def test_criterion_3():
    assert criterion_3()


@pytest.mark.xfail(strict=True, reason="the jump at i is -16/125, not 0: the exponent k+1 is odd")
def test_criterion_4():
    assert criterion_4()


@pytest.mark.xfail(strict=True, reason="vertical-path splitting fails by O(1) in bounded components")
def test_criterion_5():
    assert criterion_5()


def test_criterion_6():
    assert criterion_6()


def test_criterion_7():
    assert criterion_7()


def test_criterion_8():
    assert criterion_8()


def test_criterion_9():
    assert criterion_9()


@pytest.mark.xfail(strict=True, reason="the kernel with |Q_tau| has no Gamma_0(4) law in z")
def test_criterion_10():
    assert criterion_10()


def test_criterion_11():
    assert criterion_11()


if __name__ == "__main__":
    results = [globals()[f"criterion_{n}"]() for n in range(1, 12)]
    sys.exit(0 if all(results) else 1)

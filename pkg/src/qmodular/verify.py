"""Named verification suites, jump measurement and machine-readable reports."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import diffops, maass, qforms, series, theta
from .qforms import Params, QForm, S, T, ball_forms, j_factor, mobius
from .series import DEFAULT_POLICY, TruncationPolicy

SUITES = ("transforms", "omega", "split", "jumps", "diffops", "theta", "eichler-local")

# check id prefix -> (tolerance, error model)
TOLERANCES = {
    "exact_identities": (1e-10, "float64 rounding of exact integer/rational identities"),
    "modularity": (10.0, "multiple of the doubling estimate plus a rounding floor 1e-13*sum|terms|"),
    "psi_inversion": (1e-6, "both sides truncated over the same transported set"),
    "phi_inversion": (1e-6, "both sides truncated over the same transported set"),
    "correction_forms": (0.5, "exact set equality (residual counts mismatches)"),
    "omega_diagonal": (1e-6, "max(1e-6, 10 est); termwise cancellation"),
    "omega_limit": (1e-5, "defect decays like sqrt(D) |h(tau)| / V"),
    "lambda_log_form": (1e-10, "branch identity 2i arctan x = Log((1+ix)/(1-ix))"),
    "lambdatemp": (1e-8, "closed form in Q_tau over the same set"),
    "cinf_limit": (1e-5, "Psi truncation + c_inf tail bound + exp(-2 pi V) remainder"),
    "root_counts": (0.5, "exact integer comparison against brute force"),
    "split": (1e-4, "Psi truncation + Eichler quadrature + c_inf tail"),
    "Lambda_jump": (1e-4, "Richardson on eps = 2^-j 1e-2, fixed form set"),
    "Lambda_jump_i": (1e-5, "Richardson on eps = 2^-j 1e-2, fixed form set"),
    "Psi_continuity": (1e-5, "Richardson on eps = 2^-j 1e-2, fixed form set"),
    "Psi_dbar_jump": (1e-3, "relative; central differences with step eps/8"),
    "xi_Psi": (1e-4, "relative; O(h^2) central differences, h = 1e-4"),
    "laplacian_Psi": (1e-3, "relative to |Psi|; second differences"),
    "bol_terms": (1e-6, "relative; trapezoid Cauchy contour, 64(n+1) nodes"),
    "xi_eichler_hol": (1e-5, "absolute; Lambda truncation noise on the path (~1e-9..1e-8) / h, h = 1e-3"),
    "xi_eichler_nonhol": (1e-4, "relative to |Lambda| plus 1e-8 truncation floor; h = 1e-3"),
    "lemma24": (1e-6, "relative; central differences"),
    "bol_identity": (1e-6, "relative; nested central differences"),
    "laplace_factorization": (1e-3, "nested central differences"),
    "tau_modularity": (1e-6, "relative; Gaussian truncation"),
    "z_translation": (1e-12, "relative; integer d"),
    "truncation_doubling": (1e-8, "relative; R against R sqrt 2"),
    "gamma0_4": (1e-5, "relative, after fitting one unimodular constant"),
    "fourier_support": (1e-12, "x-quadrature of exact trigonometric sums"),
    "eichler_on_ED": (1e-6, "absolute; 20 against 30 nodes, Lambda truncation noise ~1e-8 on the path"),
    "eichler_two_sided": (1e-3, "relative to |value| plus 1e-8 truncation floor; Richardson"),
    "eichler_refinement": (1e-7, "absolute; 20 against 40 nodes, Lambda truncation noise ~1e-8 on the path"),
}


@dataclass
class VerificationReport:
    check_id: str
    points: list
    residual: float
    tolerance: float
    passed: bool
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"check_id": self.check_id,
                "points": [[complex(p).real, complex(p).imag] for p in self.points],
                "residual": float(self.residual), "tolerance": float(self.tolerance),
                "passed": bool(self.passed), "metadata": _jsonable(self.metadata)}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    return x


def report(check_id: str, points, residual: float, tol: float, **meta) -> VerificationReport:
    residual = float(residual)
    return VerificationReport(check_id, list(points), residual, float(tol),
                              bool(residual < tol), meta)


# ---------------------------------------------------------------- jumps

@dataclass
class JumpResult:
    jump: complex
    continuity_defect: float
    jumps: list
    averages: list


def _neville_at_zero(xs, ys) -> complex:
    """Value at 0 of the interpolating polynomial through (xs, ys)."""
    p = [complex(y) for y in ys]
    n = len(xs)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (xs[i + m] * p[i] - xs[i] * p[i + 1]) / (xs[i + m] - xs[i])
    return p[0]


EPS_SEQUENCE = [1e-2 * 2.0 ** -j for j in range(9)]


def jump_measure(f: Callable[[complex], complex], p: complex, params: Params | None = None,
                 value_at_p: complex | None = None, tol: float = 1e-9) -> JumpResult:
    """Two-sided limits of f across E_D along the vertical through p.

    jump is the Richardson limit of f(p + i eps) - f(p - i eps) over the last
    four eps; continuity_defect compares the limit of the two-sided average
    with value_at_p when that is given (NaN otherwise).
    """
    p = complex(p)
    if params is not None and not qforms.forms_vanishing_at(params, p, tol):
        raise ValueError(f"{p} is not on E_D")
    jumps, avgs = [], []
    for e in EPS_SEQUENCE:
        up, dn = f(p + 1j * e), f(p - 1j * e)
        jumps.append(up - dn)
        avgs.append(0.5 * (up + dn))
    xs = EPS_SEQUENCE[-4:]
    J = _neville_at_zero(xs, jumps[-4:])
    A = _neville_at_zero(xs, avgs[-4:])
    defect = abs(A - value_at_p) if value_at_p is not None else float("nan")
    return JumpResult(J, defect, jumps, avgs)


def expected_Lambda_jump(params: Params, p: complex) -> complex:
    """2 sum over Q with Q_p = 0 of sgn(Q)/Q(p,1)^(k+1)."""
    return 2 * sum(Q.sign / Q.value(p) ** (params.k + 1)
                   for Q in qforms.forms_vanishing_at(params, p))


def expected_dbar_jump(params: Params, p: complex) -> complex:
    """i D^(k+1/2) v^(2k) sum over Q with Q_p = 0 of sgn(Q)/Q(conj p,1)^(k+1)."""
    D, k = params.D, params.k
    p = complex(p)
    s = sum(Q.sign / Q.value(p.conjugate()) ** (k + 1) for Q in qforms.forms_vanishing_at(params, p))
    return 1j * D ** (k + 0.5) * p.imag ** (2 * k) * s


def Lambda_jump(params: Params, p: complex, policy=DEFAULT_POLICY) -> JumpResult:
    F = ball_forms(params.D, p, policy.radius)
    f = lambda z: series.eval_Lambda(params, z, policy, forms=F).value  # noqa: E731
    at_p = series.eval_Lambda(params, p, policy, forms=F).value
    return jump_measure(f, p, params, at_p)


def Psi_jump(params: Params, p: complex, policy=DEFAULT_POLICY) -> JumpResult:
    F = ball_forms(params.D, p, policy.radius)
    f = lambda z: maass.eval_Psi(params, z, policy, forms=F).value  # noqa: E731
    return jump_measure(f, p, params)


def Psi_dbar_jump(params: Params, p: complex, policy=DEFAULT_POLICY) -> JumpResult:
    F = ball_forms(params.D, p, policy.radius)
    f = lambda z: maass.eval_Psi(params, z, policy, forms=F).value  # noqa: E731
    p = complex(p)
    jumps = []
    for e in EPS_SEQUENCE:
        spec = diffops.DiffSpec(step=e / 8)
        up = diffops.wirtinger(f, p + 1j * e, spec)[1]
        dn = diffops.wirtinger(f, p - 1j * e, spec)[1]
        jumps.append(up - dn)
    J = _neville_at_zero(EPS_SEQUENCE[-4:], jumps[-4:])
    return JumpResult(J, float("nan"), jumps, [])


# ---------------------------------------------------------------- sampling

def sample_points(rng: np.random.Generator, params: Params, n: int, avoid: float = 1e-3,
                  vmin: float = 0.4, vmax: float = 3.0, accept=None) -> list[complex]:
    out = []
    while len(out) < n:
        z = complex(rng.uniform(-0.5, 0.5), rng.uniform(vmin, vmax))
        F = ball_forms(params.D, z, 2.0)
        if F.a.size and np.min(np.abs(F.q_tau(z))) * z.imag / math.sqrt(params.D) < avoid:
            continue
        if accept is not None and not accept(z):
            continue
        out.append(z)
    return out


def random_lower(rng: np.random.Generator) -> complex:
    return complex(rng.uniform(-0.5, 0.5), -rng.uniform(0.4, 3.0))


def geodesic_points(rng: np.random.Generator, params: Params, n: int) -> list[complex]:
    """Points on geodesics of small forms, away from crossings of two arcs."""
    forms = [Q for Q in qforms.enumerate_forms(params, 2) if Q.a > 0]
    out = []
    while len(out) < n:
        Q = forms[int(rng.integers(len(forms)))]
        g = qforms.geodesic(Q)
        th = rng.uniform(0.25 * math.pi, 0.75 * math.pi)
        p = complex(g.center + g.radius * math.cos(th), g.radius * math.sin(th))
        if p.imag < 0.4:
            continue
        # keep the eps-sequence clear of other geodesics
        F = ball_forms(params.D, p, 4.0)
        qt = np.abs(F.q_tau(p))
        if np.sum(qt < 1e-9) != 2 or np.sort(qt)[2] < 0.2:
            continue
        out.append(p)
    return out


def _floor(vals) -> float:
    return 1e-13 * (1.0 + float(np.sum(np.abs(vals))))


# ---------------------------------------------------------------- suites

def _suite_transforms(params: Params, rng, policy) -> list[Callable[[], list]]:
    k = params.k
    pts = sample_points(rng, params, 5)
    forms = qforms.enumerate_forms(params, 6)
    trip = []
    for _ in range(200):
        Q = forms[int(rng.integers(len(forms)))]
        g = qforms.random_sl2(rng, 5)
        tau = complex(rng.uniform(-2, 2), rng.uniform(0.2, 3))
        trip.append((Q, g, tau))

    def exact():
        worst = 0.0
        for Q, g, tau in trip:
            v = tau.imag
            Qt = Q.q_tau(tau)
            r1 = abs(Q.D * v * v + Qt * Qt * v * v - abs(Q.value(tau)) ** 2) / abs(Q.value(tau)) ** 2
            Qg = qforms.act(Q, g)
            gt = mobius(g, tau)
            r2 = abs(Qg.value(tau) - j_factor(g, tau) ** 2 * Q.value(gt)) / abs(Qg.value(tau))
            r3 = abs(Qg.q_tau(tau) - Q.q_tau(gt)) / (1 + abs(Qg.q_tau(tau)))
            r4 = abs(Qt * v + 1j * v * Q.deriv(tau) - Q.value(tau)) / abs(Q.value(tau))
            r5 = abs(Q.deriv(tau) ** 2 - 4 * Q.a * Q.value(tau) - Q.D) / (1 + abs(Q.deriv(tau)) ** 2)
            r6 = float(Qg.D != Q.D)
            r7 = abs(gt.imag / abs(Q.value(gt)) - v / abs(Qg.value(tau))) * abs(Qg.value(tau)) / v
            worst = max(worst, r1, r2, r3, r4, r5, r6, r7)
        return [report("transforms.exact_identities", [], worst, TOLERANCES["exact_identities"][0],
                       samples=len(trip))]

    def f_mod():
        out = []
        tau = complex(0.2, 2.0)
        for name, g in (("S", S), ("T", T)):
            # odd kappa vanishes identically (Q and -Q cancel) and weights 2 kappa < 12
            # carry no cusp forms, so kappa = 6 is the first non-trivial case
            a = series.eval_f(params, 6, mobius(g, tau), policy)
            b = series.eval_f(params, 6, tau, policy)
            res = abs(a.value - j_factor(g, tau) ** 12 * b.value)
            tol = 10 * (a.est_error + abs(j_factor(g, tau)) ** 12 * b.est_error) + _floor([b.value])
            out.append(report(f"transforms.modularity.f.{name}", [tau], res, tol, value=b.value))
        return out

    def psi_checks():
        out = []
        for i, tau in enumerate(pts[:3]):
            a, b = series.eval_psi(params, tau + 1, policy), series.eval_psi(params, tau, policy)
            out.append(report(f"transforms.modularity.psi_T.{i}", [tau], abs(a.value - b.value),
                              10 * (a.est_error + b.est_error) + _floor([b.value])))
        for i, tau in enumerate([complex(0.1, 1.4)] + pts[:2]):
            out.append(report(f"transforms.psi_inversion.{i}", [tau],
                              series.psi_transform_residual(params, tau, policy),
                              TOLERANCES["psi_inversion"][0]))
            out.append(report(f"transforms.phi_inversion.{i}", [tau],
                              series.phi_transform_residual(params, tau, policy),
                              TOLERANCES["phi_inversion"][0]))
        return out

    def correction_forms():
        # forms with a < 0 < c: brute force over a box against the ball enumeration
        R = policy.radius
        tau = complex(0.1, 1.4)
        F = ball_forms(params.D, tau, R)
        got = {(int(a), int(b), int(c)) for a, b, c in zip(F.a, F.b, F.c) if a < 0 < c}
        brute = set()
        m = int(math.isqrt(params.D)) + 1
        for a in range(-params.D, 0):
            for c in range(1, params.D + 1):
                for b in range(-m, m + 1):
                    if b * b - 4 * a * c == params.D:
                        brute.add((a, b, c))
        res = len(got ^ brute)
        return [report("transforms.correction_forms", [tau], res, TOLERANCES["correction_forms"][0],
                       forms=sorted(brute))]

    def lam_psi_mod():
        out = []
        for i, tau in enumerate([complex(0.15, 2.1), complex(0.23, 1.9)] + pts[:3]):
            for name, g in (("S", S), ("T", T)):
                jt = j_factor(g, tau)
                a, b = series.eval_Lambda(params, mobius(g, tau), policy), series.eval_Lambda(params, tau, policy)
                out.append(report(f"transforms.modularity.Lambda_{name}.{i}", [tau],
                                  abs(a.value - jt ** (2 * k + 2) * b.value),
                                  10 * (a.est_error + abs(jt) ** (2 * k + 2) * b.est_error) + _floor([b.value])))
                a, b = maass.eval_Psi(params, mobius(g, tau), policy), maass.eval_Psi(params, tau, policy)
                out.append(report(f"transforms.modularity.Psi_{name}.{i}", [tau],
                                  abs(a.value - jt ** (-2 * k) * b.value),
                                  10 * (a.est_error + abs(jt) ** (-2 * k) * b.est_error) + _floor([b.value])))
        return out

    def omega_small():
        out = []
        tau, z = pts[0], pts[1]
        for name, g in (("S", S), ("T", T)):
            a = series.eval_omega(params, mobius(g, tau), mobius(g, z), policy)
            b = series.eval_omega(params, tau, z, policy)
            jt = j_factor(g, tau)
            out.append(report(f"transforms.modularity.omega_{name}", [tau, z],
                              abs(a.value - jt ** (2 * k + 2) * b.value),
                              10 * (a.est_error + abs(jt) ** (2 * k + 2) * b.est_error) + _floor([b.value])))
        return out

    return [exact, f_mod, psi_checks, correction_forms, lam_psi_mod, omega_small]


def _suite_omega(params: Params, rng, policy) -> list[Callable[[], list]]:
    k = params.k
    pts = sample_points(rng, params, 5)
    lows = [random_lower(rng) for _ in pts]

    def diagonal():
        out = []
        for i, tau in enumerate([complex(0.2, 0.9), complex(-0.4, 1.5)] + pts[:3]):
            O = series.eval_Omega(params, tau, tau.conjugate(), policy)
            out.append(report(f"omega.omega_diagonal.{i}", [tau], abs(O.value),
                              max(TOLERANCES["omega_diagonal"][0], 10 * O.est_error)))
        return out

    def bimod():
        out = []
        for i, (tau, w) in enumerate(zip(pts, lows)):
            for name, g in (("S", S), ("T", T)):
                jt = j_factor(g, tau)
                a = series.eval_Omega(params, mobius(g, tau), mobius(g, w), policy)
                b = series.eval_Omega(params, tau, w, policy)
                out.append(report(f"omega.modularity.Omega_{name}.{i}", [tau, w],
                                  abs(a.value - jt ** (2 * k + 2) * b.value),
                                  10 * (a.est_error + abs(jt) ** (2 * k + 2) * b.est_error) + _floor([b.value])))
                a = series.eval_lambda_pair(params, mobius(g, tau), mobius(g, w), policy)
                b = series.eval_lambda_pair(params, tau, w, policy)
                out.append(report(f"omega.modularity.lambda_{name}.{i}", [tau, w],
                                  abs(a.value - jt ** (2 * k + 2) * b.value),
                                  10 * (a.est_error + abs(jt) ** (2 * k + 2) * b.est_error) + _floor([b.value])))
        return out

    def limits():
        out = []
        tau = complex(0.25, 2.5)
        V = 16.0
        psi = series.eval_psi(params, tau, policy)
        O = series.eval_Omega(params, tau, -1j * V, policy)
        defects = {Vi: abs(series.eval_Omega(params, tau, -1j * Vi, policy).value - psi.value) for Vi in (8.0, 16.0)}
        out.append(report("omega.omega_limit", [tau], abs(O.value - psi.value), TOLERANCES["omega_limit"][0],
                          V=V, defect_ratio_8_to_16=defects[8.0] / defects[16.0]))
        lam = series.eval_lambda_pair(params, tau, -1j * V, policy)
        phi = series.eval_phi(params, tau, policy)
        out.append(report("omega.lambda_limit", [tau], abs(lam.value + 2j * math.pi * phi.value),
                          TOLERANCES["omega_limit"][0], V=V))
        rho = series.eval_rho(params, tau, -1j * V, policy)
        out.append(report("omega.rho_limit", [tau], abs(rho.value), TOLERANCES["omega_limit"][0], V=V))
        return out

    def forms_of_lambda():
        out = []
        for i, (tau, w) in enumerate(zip(pts[:3], lows[:3])):
            a = series.eval_lambda_pair(params, tau, w, policy)
            b = series.eval_lambda_pair(params, tau, w, policy, log_form=True)
            out.append(report(f"omega.lambda_log_form.{i}", [tau, w], abs(a.value - b.value),
                              TOLERANCES["lambda_log_form"][0]))
            out.append(report(f"omega.lambdatemp.{i}", [tau], series.lambdatemp_residual(params, tau, policy),
                              TOLERANCES["lambdatemp"][0]))
        return out

    return [diagonal, bimod, limits, forms_of_lambda]


def split_points(params: Params, rng) -> tuple[list[complex], list[complex]]:
    """Two points in the unbounded component and two in distinct bounded ones."""
    apex = math.sqrt(params.D) / 2
    unb = sample_points(rng, params, 2, vmin=apex + 0.1, vmax=3.0)
    bnd: list[complex] = []
    sigs = set()
    while len(bnd) < 2:
        z = sample_points(rng, params, 1, avoid=2e-2, vmin=0.4, vmax=apex)[0]
        if not maass.enclosing_forms(params, z):
            continue
        sig = qforms.component_signature(params, z)
        if sig in sigs:
            continue
        sigs.add(sig)
        bnd.append(z)
    return unb, bnd


def _suite_split(params: Params, rng, policy) -> list[Callable[[], list]]:
    unb, bnd = split_points(params, rng)

    def cinf():
        c = maass.c_infinity(params, 1e-7)
        P = maass.eval_Psi(params, 16j, policy)
        out = [report("split.cinf_limit", [16j], abs(P.value - c.value), TOLERANCES["cinf_limit"][0],
                      c_inf=c.value, half_sum=c.half_sum, tail_bound=c.tail_bound, A=c.A)]
        r = maass.root_counts(params.D, 300)
        brute = [sum(1 for b in range(2 * a) if (b * b - params.D) % (4 * a) == 0) for a in range(1, 301)]
        out.append(report("split.root_counts", [], int(np.sum(r[1:] != np.array(brute))),
                          TOLERANCES["root_counts"][0], r1=int(r[1]), r2=int(r[2])))
        return out

    def point(kind, i, z):
        def run():
            rep = maass.split_residual(params, z, policy)
            meta = rep.to_dict()
            meta["component"] = qforms.signature_hash(qforms.component_signature(params, z))
            return [report(f"split.{kind}.{i}", [z], rep.residual, TOLERANCES["split"][0], split=meta),
                    report(f"split.with_local_term.{kind}.{i}", [z], rep.residual_local,
                           TOLERANCES["split"][0])]
        return run

    return ([cinf] + [point("unbounded", i, z) for i, z in enumerate(unb)]
            + [point("bounded", i, z) for i, z in enumerate(bnd)])


def _suite_jumps(params: Params, rng, policy) -> list[Callable[[], list]]:
    D = params.D
    base = QForm(1, 1, (1 - D) // 4) if D % 4 == 1 else QForm(1, 0, -D // 4)
    apex = qforms.geodesic(base).apex
    sampled = geodesic_points(rng, params, 3)

    def lam_apex():
        J = Lambda_jump(params, apex, policy)
        exp = expected_Lambda_jump(params, apex)
        return [report("jumps.Lambda_jump.apex", [apex], abs(J.jump - exp), TOLERANCES["Lambda_jump"][0],
                       expected=exp, measured=J.jump, average_defect=J.continuity_defect)]

    def lam_i():
        if not qforms.forms_vanishing_at(params, 1j):
            return []
        J = Lambda_jump(params, 1j, policy)
        exp = expected_Lambda_jump(params, 1j)
        # four forms vanish at i; with the odd exponent k + 1 their terms do not cancel
        return [report("jumps.Lambda_jump_i", [1j], abs(J.jump - exp),
                       TOLERANCES["Lambda_jump_i"][0], expected=exp, measured=J.jump)]

    def lam_sampled():
        out = []
        for i, p in enumerate(sampled):
            J = Lambda_jump(params, p, policy)
            exp = expected_Lambda_jump(params, p)
            out.append(report(f"jumps.Lambda_jump.sampled.{i}", [p],
                              abs(J.jump - exp) / max(1.0, abs(exp)), TOLERANCES["Lambda_jump"][0],
                              expected=exp, measured=J.jump))
        return out

    def psi_cont():
        out = []
        for i, p in enumerate([apex] + sampled[:1]):
            J = Psi_jump(params, p, policy)
            out.append(report(f"jumps.Psi_continuity.{i}", [p], abs(J.jump), TOLERANCES["Psi_continuity"][0]))
            dJ = Psi_dbar_jump(params, p, policy)
            exp = expected_dbar_jump(params, p)
            out.append(report(f"jumps.Psi_dbar_jump.{i}", [p], abs(dJ.jump - exp) / abs(exp),
                              TOLERANCES["Psi_dbar_jump"][0], expected=exp, measured=dJ.jump))
        return out

    return [lam_apex, lam_i, lam_sampled, psi_cont]


def _suite_diffops(params: Params, rng, policy) -> list[Callable[[], list]]:
    D, k = params.D, params.k
    pts = [complex(0.3, 1.5)] + sample_points(rng, params, 2, avoid=5e-3)
    trip = []
    small = qforms.enumerate_forms(params, 3)
    for _ in range(20):
        trip.append((small[int(rng.integers(len(small)))], complex(rng.uniform(-1, 1), rng.uniform(0.3, 2))))

    def xi_lap():
        out = []
        for i, tau in enumerate(pts):
            F = ball_forms(D, tau, policy.radius)
            f = lambda z: maass.eval_Psi(params, z, policy, forms=F).value  # noqa: E731
            lam = series.eval_Lambda(params, tau, policy, forms=F).value
            x = diffops.xi_apply(f, -2 * k, tau, params=params)
            out.append(report(f"diffops.xi_Psi.{i}", [tau], abs(x - D ** (k + 0.5) * lam) / abs(D ** (k + 0.5) * lam),
                              TOLERANCES["xi_Psi"][0]))
            out.append(report(f"diffops.laplacian_Psi.{i}", [tau],
                              diffops.laplacian_residual(f, -2 * k, tau, params=params) / abs(f(tau)),
                              TOLERANCES["laplacian_Psi"][0]))
        return out

    def bol_terms():
        worst = 0.0
        shown = []
        for Q in (QForm(1, 1, (1 - D) // 4) if D % 4 == 1 else QForm(1, 0, -D // 4),) + tuple(small[:2]):
            for p in (complex(0.2, 2.5), complex(-0.3, 1.7)):
                for n in (1, 2, 3):
                    r = diffops.bol_term_check(Q, n, p)
                    worst = max(worst, r)
                shown.append(Q.to_list())
        disp = diffops.bol_term_check(small[0], 1, complex(0.2, 2.5), displayed=True)
        return [report("diffops.bol_terms", [complex(0.2, 2.5), complex(-0.3, 1.7)], worst,
                       TOLERANCES["bol_terms"][0], forms=shown, displayed_constant_residual=disp)]

    def eichler_xi():
        # above every apex the vertical path meets no geodesic; below, inside a
        # bounded component, the vertical-path integral is not holomorphic
        tau = complex(0.3, math.sqrt(D) / 2 + 0.3)
        below = complex(0.0, 0.6)
        g = lambda z: maass.eichler_hol(params, z, policy).value  # noqa: E731
        h = lambda z: maass.eichler_nonhol(params, z, policy).value  # noqa: E731
        lam = series.eval_Lambda(params, tau, policy).value
        meta = {}
        if maass.enclosing_forms(params, below):
            meta["xi_hol_in_bounded_component"] = abs(diffops.xi_apply(g, -2 * k, below, params=params))
        sp = diffops.DiffSpec(step=1e-3)
        return [report("diffops.xi_eichler_hol", [tau], abs(diffops.xi_apply(g, -2 * k, tau, sp)),
                       TOLERANCES["xi_eichler_hol"][0], **meta),
                report("diffops.xi_eichler_nonhol", [tau], abs(diffops.xi_apply(h, -2 * k, tau, sp) - lam),
                       TOLERANCES["xi_eichler_nonhol"][0] * abs(lam) + 1e-8, Lambda=lam)]

    def calculus():
        worst = 0.0
        for Q, tau in trip:
            _, dbar = diffops.wirtinger(lambda z: Q.q_tau(z), tau)
            worst = max(worst, abs(2j * tau.imag ** 2 * dbar - Q.value(tau)) / abs(Q.value(tau)))
        out = [report("diffops.lemma24", [], worst, TOLERANCES["lemma24"][0])]
        f = lambda z: np.exp(2j * math.pi * z)  # noqa: E731
        tau = complex(0.1, 0.7)
        spec = diffops.DiffSpec(step=1e-3)
        r1 = lambda z: diffops.raising(f, -1, z, spec)  # noqa: E731
        lhs = (-4 * math.pi) ** 2 * f(tau) * 1.0  # D^2 exp(2 pi i tau) = exp(2 pi i tau)
        rhs = diffops.raising(r1, 1, tau, spec)
        out.append(report("diffops.bol_identity", [tau], abs(lhs - rhs) / abs(lhs), TOLERANCES["bol_identity"][0]))
        kap = -2.0
        g = lambda z: z.imag ** 3 * np.exp(-1j * z.conjugate()) + z ** 2  # noqa: E731
        sp = diffops.DiffSpec(step=1e-3)
        inner = lambda z: diffops.xi_apply(g, kap, z, sp)  # noqa: E731
        res = abs(diffops.laplacian(g, kap, tau, sp) + diffops.xi_apply(inner, 2 - kap, tau, sp))
        out.append(report("diffops.laplace_factorization", [tau], res / (1 + abs(g(tau))),
                          TOLERANCES["laplace_factorization"][0]))
        return out

    return [xi_lap, bol_terms, eichler_xi, calculus]


def _suite_theta(params: Params, rng, policy) -> list[Callable[[], list]]:
    k = params.k
    zs = [complex(0.1, 0.8), complex(-0.2, 0.5), complex(0.3, 1.2)]

    def tau_mod():
        tau, z = complex(0.2, 1.1), complex(0.1, 0.8)
        a = theta.eval_theta_kernel(k, mobius(S, tau), z).value
        b = j_factor(S, tau) ** (-2 * k) * theta.eval_theta_kernel(k, tau, z).value
        t0 = theta.eval_theta_kernel(k, tau, z)
        t1 = theta.eval_theta_kernel(k, tau, z + 1)
        one = theta.eval_theta_kernel(k, 1j, 1j)
        return [report("theta.tau_modularity.S", [tau, z], abs(a - b) / abs(b), TOLERANCES["tau_modularity"][0]),
                report("theta.z_translation", [tau, z], abs(t1.value - t0.value) / abs(t0.value),
                       TOLERANCES["z_translation"][0]),
                report("theta.truncation_doubling", [1j, 1j], one.est_error / abs(one.value),
                       TOLERANCES["truncation_doubling"][0])]

    def gamma0():
        out = []
        for g in ((1, 1, 0, 1), (1, 0, 4, 1), (3, 1, 8, 3)):
            res, C = theta.theta_z_modularity_residual(k, 1j, zs, g)
            out.append(report("theta.gamma0_4.%d_%d_%d_%d" % g, zs, res, TOLERANCES["gamma0_4"][0], fitted_constant=C))
        # control: the same sum without |Q_tau| is modular of weight -1/2 - k
        res, C = theta.theta_z_modularity_residual(k, 1j, zs, (3, 1, 8, 3), kappa=-0.5 - k, qtau_factor=False)
        out.append(report("theta.gamma0_4_control.3_1_8_3", zs, res, TOLERANCES["gamma0_4"][0], fitted_constant=C))
        return out

    def support():
        tau, y = complex(0.1, 1.0), 0.9
        n = 64
        xs = np.arange(n) / n
        vals = np.array([theta.eval_theta_kernel(k, tau, complex(x, y)).value for x in xs])
        worst = 0.0
        scale = float(np.max(np.abs(vals)))
        for d in (2, 3, 6, 7):
            c = np.mean(vals * np.exp(2j * math.pi * d * xs))
            worst = max(worst, abs(c) / scale)
        c1 = abs(np.mean(vals * np.exp(2j * math.pi * 1 * xs))) / scale
        return [report("theta.fourier_support", [tau], worst, TOLERANCES["fourier_support"][0],
                       coefficient_d1=c1)]

    return [tau_mod, gamma0, support]


def _suite_eichler_local(params: Params, rng, policy) -> list[Callable[[], list]]:
    D = params.D
    base = QForm(1, 1, (1 - D) // 4) if D % 4 == 1 else QForm(1, 0, -D // 4)
    apex = qforms.geodesic(base).apex
    p2 = geodesic_points(rng, params, 1)[0]

    def on_ed():
        out = []
        for i, p in enumerate((apex, p2)):
            E20, L20 = maass.eichler_pair(params, p, policy, 20)
            E30, L30 = maass.eichler_pair(params, p, policy, 30)
            out.append(report(f"eichler-local.eichler_on_ED.hol.{i}", [p], abs(E20.value - E30.value),
                              TOLERANCES["eichler_on_ED"][0], value=E30.value))
            out.append(report(f"eichler-local.eichler_on_ED.nonhol.{i}", [p],
                              abs(L20.value - L30.value), TOLERANCES["eichler_on_ED"][0],
                              value=L30.value))
        return out

    def two_sided():
        out = []
        for name, idx in (("hol", 0), ("nonhol", 1)):
            f = lambda z, idx=idx: maass.eichler_pair(params, z, policy)[idx].value  # noqa: E731
            J = jump_measure(f, apex, params)
            ref = abs(f(apex))
            # restricted integrals over the vanishing forms along the vertical are
            # supported on a single point of the path, hence 0
            out.append(report(f"eichler-local.eichler_two_sided.{name}", [apex], abs(J.jump),
                              TOLERANCES["eichler_two_sided"][0] * ref + 1e-8, jump=J.jump, value=ref))
        return out

    def refinement():
        tau = complex(0.1, 2.5)
        E20, L20 = maass.eichler_pair(params, tau, policy, 20)
        E40, L40 = maass.eichler_pair(params, tau, policy, 40)
        return [report("eichler-local.eichler_refinement.hol", [tau], abs(E20.value - E40.value),
                       TOLERANCES["eichler_refinement"][0]),
                report("eichler-local.eichler_refinement.nonhol", [tau],
                       abs(L20.value - L40.value), TOLERANCES["eichler_refinement"][0])]

    return [on_ed, two_sided, refinement]


_BUILDERS = {
    "transforms": _suite_transforms,
    "omega": _suite_omega,
    "split": _suite_split,
    "jumps": _suite_jumps,
    "diffops": _suite_diffops,
    "theta": _suite_theta,
    "eichler-local": _suite_eichler_local,
}


def suite_run(name: str, params: Params, seed: int = 1, policy: TruncationPolicy = DEFAULT_POLICY,
              workers: int = 1) -> list[VerificationReport]:
    """Run one named suite; deterministic in (name, params, seed, policy)."""
    if name not in _BUILDERS:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    rng = np.random.default_rng(seed)
    checks = _BUILDERS[name](params, rng, policy)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(lambda c: c(), checks))
    else:
        results = [c() for c in checks]
    reports = [r for batch in results for r in batch]
    reports.sort(key=lambda r: r.check_id)
    return reports


def reports_json(reports: list[VerificationReport], params: Params, suite: str, seed: int) -> dict:
    return {"schema": "qmodular/1", "suite": suite, "D": params.D, "k": params.k, "seed": seed,
            "passed": all(r.passed for r in reports),
            "reports": [r.to_dict() for r in reports]}

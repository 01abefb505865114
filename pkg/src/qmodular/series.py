"""Truncated lattice sums over Q_D: f, psi, phi, rho, lambda, Omega, omega, Lambda.

Every sum runs over the ball {Q : |Q_tau| <= R} around the first argument.
That set is permuted by SL2(Z), so the truncated sums obey the transformation
laws up to rounding. The error estimate is |S(2R) - S(R)|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .qforms import ON_GEODESIC_TOL, FormSet, Params, ball_forms
from .special import log_ratio_array


@dataclass(frozen=True)
class TruncationPolicy:
    """bound_a sets the ball radius R = bound_a**2 (in units of |Q_tau|).

    At height v the ball reaches coefficients |a| up to about R/v.
    """

    bound_a: int = 64
    doubling_check: bool = True
    target_tol: float = 1e-8

    def __post_init__(self):
        if self.bound_a < 8:
            raise ValueError("bound_a must be >= 8")

    @property
    def radius(self) -> float:
        return float(self.bound_a) ** 2


DEFAULT_POLICY = TruncationPolicy()


@dataclass
class SeriesValue:
    value: complex
    est_error: float
    terms_used: int
    converged: bool = True
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"value": [self.value.real, self.value.imag],
                "est_error": self.est_error, "terms_used": self.terms_used,
                "converged": self.converged, "notes": list(self.notes)}


def csum(x: np.ndarray) -> complex:
    """Correctly rounded complex sum; independent of any blocking."""
    x = np.asarray(x)
    if np.iscomplexobj(x):
        return complex(math.fsum(x.real), math.fsum(x.imag))
    return complex(math.fsum(x), 0.0)


def ball_sum(params: Params, z: complex, policy: TruncationPolicy,
             term: Callable[[FormSet], np.ndarray],
             forms: FormSet | None = None) -> SeriesValue:
    """Sum term(F) over the ball at z, with the doubling error estimate.

    If `forms` is given the sum is taken over exactly that set and no
    estimate is made; finite-difference stencils use this so that every
    node sees the same forms.
    """
    if forms is not None:
        t = term(forms)
        return SeriesValue(csum(t), 0.0, len(forms))
    R = policy.radius
    if not policy.doubling_check:
        F = ball_forms(params.D, z, R)
        return SeriesValue(csum(term(F)), float("nan"), len(F))
    F = ball_forms(params.D, z, 2 * R)
    t = term(F)
    inner = np.abs(F.q_tau(z)) <= R
    full = csum(t)
    half = csum(t[inner])
    est = abs(full - half)
    return SeriesValue(full, est, len(F), est <= policy.target_tol)


def _check_upper(z, name="tau"):
    if complex(z).imag <= 0:
        raise ValueError(f"{name} must lie in the upper half-plane")


def _check_lower(w, name="w"):
    if complex(w).imag >= 0:
        raise ValueError(f"{name} must lie in the lower half-plane")


def _q_at(F: FormSet, w: complex) -> np.ndarray:
    w = complex(w)
    return (F.a * (w.real ** 2 + w.imag ** 2) + F.b * w.real + F.c) / w.imag


def eval_f(params: Params, kappa: int, tau: complex, policy=DEFAULT_POLICY,
           forms=None) -> SeriesValue:
    """f_{kappa,D}(tau) = sum 1/Q(tau,1)^kappa."""
    if kappa < 2:
        raise ValueError("kappa must be >= 2")
    _check_upper(tau)
    return ball_sum(params, tau, policy, lambda F: F.values(tau) ** -kappa, forms)


def psi_terms(params: Params, tau: complex):
    def term(F: FormSet):
        am, ap = F.roots()
        return log_ratio_array(tau, am, ap) / F.values(tau) ** (params.k + 1)
    return term


def eval_psi(params: Params, tau: complex, policy=DEFAULT_POLICY, forms=None) -> SeriesValue:
    _check_upper(tau)
    return ball_sum(params, tau, policy, psi_terms(params, tau), forms)


def eval_phi(params: Params, tau: complex, policy=DEFAULT_POLICY, forms=None) -> SeriesValue:
    """sum over a > 0 of 1/Q(tau,1)^(k+1)."""
    _check_upper(tau)

    def term(F):
        return np.where(F.a > 0, 1.0, 0.0) / F.values(tau) ** (params.k + 1)
    return ball_sum(params, tau, policy, term, forms)


def eval_rho(params: Params, tau: complex, w: complex, policy=DEFAULT_POLICY,
             forms=None) -> SeriesValue:
    """psi-type sum with the logarithm evaluated at w in the lower half-plane."""
    _check_upper(tau)
    _check_lower(w)

    def term(F):
        am, ap = F.roots()
        return log_ratio_array(w, am, ap) / F.values(tau) ** (params.k + 1)
    return ball_sum(params, tau, policy, term, forms)


def eval_lambda_pair(params: Params, tau: complex, w: complex, policy=DEFAULT_POLICY,
                     forms=None, log_form: bool = False) -> SeriesValue:
    """2i sum arctan(Q_w/sqrt D)/Q(tau,1)^(k+1).

    log_form uses Log((1 + i x)/(1 - i x)) in place of 2i arctan(x).
    """
    _check_upper(tau)
    _check_lower(w)
    sd = math.sqrt(params.D)

    def term(F):
        x = _q_at(F, w) / sd
        if log_form:
            num = np.log((1 + 1j * x) / (1 - 1j * x))
        else:
            num = 2j * np.arctan(x)
        return num / F.values(tau) ** (params.k + 1)
    return ball_sum(params, tau, policy, term, forms)


def omega_big_terms(params: Params, tau: complex, w: complex):
    sd = math.sqrt(params.D)

    def term(F):
        am, ap = F.roots()
        num = (log_ratio_array(tau, am, ap) - log_ratio_array(w, am, ap)
               + np.where(F.a > 0, 2j * math.pi, 0.0)
               + 2j * np.arctan(_q_at(F, w) / sd))
        return num / F.values(tau) ** (params.k + 1)
    return term


def eval_Omega(params: Params, tau: complex, w: complex, policy=DEFAULT_POLICY,
               forms=None) -> SeriesValue:
    """psi(tau) - rho(tau,w) + 2 pi i phi(tau) + lambda(tau,w), in one pass."""
    _check_upper(tau)
    _check_lower(w)
    return ball_sum(params, tau, policy, omega_big_terms(params, tau, w), forms)


def eval_omega(params: Params, tau: complex, z: complex, policy=DEFAULT_POLICY,
               forms=None) -> SeriesValue:
    """psi(tau) - sum Log((z - a-)/(z - a+))/Q(tau,1)^(k+1), z upper."""
    _check_upper(tau)
    _check_upper(z, "z")

    def term(F):
        am, ap = F.roots()
        num = log_ratio_array(tau, am, ap) - log_ratio_array(z, am, ap)
        return num / F.values(tau) ** (params.k + 1)
    return ball_sum(params, tau, policy, term, forms)


def lambda_signs(F: FormSet, tau: complex, tol: float = ON_GEODESIC_TOL) -> np.ndarray:
    """sgn(Q_tau), with 0 on the geodesic itself.

    A zero is exactly the two-sided average of the one-sided limits, since
    only the vanishing forms change sign across the geodesic.
    """
    qt = F.q_tau(tau)
    return np.where(np.abs(qt) < tol, 0.0, np.sign(qt))


def eval_Lambda(params: Params, tau: complex, policy=DEFAULT_POLICY, forms=None,
                tol: float = ON_GEODESIC_TOL) -> SeriesValue:
    """Local cusp form sum sgn(Q_tau)/Q(tau,1)^(k+1)."""
    _check_upper(tau)

    def term(F):
        return lambda_signs(F, tau, tol) / F.values(tau) ** (params.k + 1)
    out = ball_sum(params, tau, policy, term, forms)
    F = forms if forms is not None else ball_forms(params.D, tau, 1.0)
    qt = np.abs(F.q_tau(tau))
    if qt.size and qt.min() < 1e-6:
        out.notes.append("near E_D: distance %.1e" % (qt.min() * complex(tau).imag / math.sqrt(params.D)))
    return out


def psi_transform_residual(params: Params, tau: complex, policy=DEFAULT_POLICY) -> float:
    """|tau^(-2k-2) psi(-1/tau) - psi(tau) - sum log|a+/a-|/Q^(k+1) + 2 pi i sum_{a<0<c} 1/Q^(k+1)|.

    All three sums are over the same truncated set, transported by S.
    """
    k = params.k
    F = ball_forms(params.D, tau, policy.radius)
    lhs = tau ** (-2 * k - 2) * eval_psi(params, -1 / tau, policy, _transport_S(F)).value
    am, ap = F.roots()
    Qk = F.values(tau) ** (k + 1)
    rhs = (eval_psi(params, tau, policy, F).value
           + csum(np.log(np.abs(ap / am)) / Qk)
           - 2j * math.pi * csum(np.where((F.a < 0) & (F.c > 0), 1.0, 0.0) / Qk))
    return abs(lhs - rhs)


def phi_transform_residual(params: Params, tau: complex, policy=DEFAULT_POLICY) -> float:
    """|tau^(-2k-2) phi(-1/tau) - phi(tau) - 2 sum_{a<0<c} 1/Q(tau,1)^(k+1)|."""
    k = params.k
    F = ball_forms(params.D, tau, policy.radius)
    lhs = tau ** (-2 * k - 2) * eval_phi(params, -1 / tau, policy, _transport_S(F)).value
    corr = csum(np.where((F.a < 0) & (F.c > 0), 2.0, 0.0) / F.values(tau) ** (k + 1))
    return abs(lhs - eval_phi(params, tau, policy, F).value - corr)


def _transport_S(F: FormSet) -> FormSet:
    # [a,b,c] o S^-1 = [c,-b,a]; the image of the ball at tau is the ball at -1/tau
    return FormSet(F.D, F.c.copy(), -F.b, F.a.copy())


def lambdatemp_residual(params: Params, tau: complex, policy=DEFAULT_POLICY) -> float:
    """psi - rho(., conj) + 2 pi i phi against its closed form in Q_tau, same set."""
    k = params.k
    sd = math.sqrt(params.D)
    F = ball_forms(params.D, tau, policy.radius)
    tb = complex(tau).conjugate()
    lhs = (eval_psi(params, tau, policy, F).value - eval_rho(params, tau, tb, policy, F).value
           + 2j * math.pi * eval_phi(params, tau, policy, F).value)
    x = F.q_tau(tau) / sd
    Qk = F.values(tau) ** (k + 1)
    rhs = csum(np.log((x - 1j) / (x + 1j)) / Qk) + 1j * math.pi * csum(np.sign(x) / Qk)
    return abs(lhs - rhs)

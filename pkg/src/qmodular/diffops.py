"""Numerical differential operators used as verification instruments."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .qforms import Params, QForm, component_signature, roots
from .special import log_ratio_array

Field = Callable[[complex], complex]


@dataclass(frozen=True)
class DiffSpec:
    step: float = 1e-4
    order: int = 1
    contour_radius: float = 0.25


def _same_component(params: Params | None, pts) -> None:
    if params is None:
        return
    sig = component_signature(params, pts[0])
    for p in pts[1:]:
        if component_signature(params, p) != sig:
            raise ValueError(f"stencil around {pts[0]} crosses E_D")


def wirtinger(f: Field, p: complex, spec: DiffSpec = DiffSpec(),
              params: Params | None = None) -> tuple[complex, complex]:
    """Central-difference (d/dtau, d/dtaubar).

    With params given, the stencil is checked against E_D first.
    """
    p = complex(p)
    h = spec.step
    pts = [p + h, p - h, p + 1j * h, p - 1j * h]
    _same_component(params, [p] + pts)
    fu = (f(pts[0]) - f(pts[1])) / (2 * h)
    fv = (f(pts[2]) - f(pts[3])) / (2 * h)
    return 0.5 * (fu - 1j * fv), 0.5 * (fu + 1j * fv)


def xi_apply(f: Field, kappa: float, p: complex, spec: DiffSpec = DiffSpec(),
             params: Params | None = None) -> complex:
    """xi_kappa f = 2i v^kappa conj(d f/d taubar)."""
    p = complex(p)
    _, dbar = wirtinger(f, p, spec, params)
    return 2j * p.imag ** kappa * np.conj(dbar)


def laplacian(f: Field, kappa: float, p: complex, spec: DiffSpec = DiffSpec(),
              params: Params | None = None) -> complex:
    """Delta_kappa f = -v^2 (f_uu + f_vv) + i kappa v (f_u + i f_v)."""
    p = complex(p)
    h = spec.step
    pts = [p + h, p - h, p + 1j * h, p - 1j * h]
    _same_component(params, [p] + pts)
    f0 = f(p)
    fp, fm, gp, gm = (f(q) for q in pts)
    fuu = (fp - 2 * f0 + fm) / h ** 2
    fvv = (gp - 2 * f0 + gm) / h ** 2
    fu = (fp - fm) / (2 * h)
    fv = (gp - gm) / (2 * h)
    v = p.imag
    return -v * v * (fuu + fvv) + 1j * kappa * v * (fu + 1j * fv)


def laplacian_residual(f: Field, kappa: float, p: complex, spec: DiffSpec = DiffSpec(),
                       params: Params | None = None) -> float:
    return abs(laplacian(f, kappa, p, spec, params))


def raising(f: Field, kappa: float, p: complex, spec: DiffSpec = DiffSpec()) -> complex:
    """R_kappa f = 2i df/dtau + kappa f / v."""
    p = complex(p)
    d, _ = wirtinger(f, p, spec)
    return 2j * d + kappa * f(p) / p.imag


def cauchy_deriv(f: Field, p: complex, order: int, spec: DiffSpec = DiffSpec(),
                 cut: tuple[float, float] | None = None) -> complex:
    """order!/(2 pi i) contour integral of f(z)/(z-p)^(order+1), trapezoid rule.

    The circle must stay in the upper half-plane and away from `cut`, a
    real interval where f is not analytic.
    """
    p = complex(p)
    r = spec.contour_radius
    if r >= p.imag:
        raise ValueError("contour radius must be smaller than Im p")
    if cut is not None:
        lo, hi = min(cut), max(cut)
        dist = math.hypot(max(lo - p.real, 0.0, p.real - hi), p.imag)
        if r >= dist:
            raise ValueError("contour meets the branch cut")
    m = 64 * (order + 1)
    theta = 2 * np.pi * np.arange(m) / m
    zeta = r * np.exp(1j * theta)
    vals = np.array([f(p + z) for z in zeta])
    # n!/(2 pi i) sum f (z)^-(n+1) i z dtheta = n!/m sum f z^-n
    return math.factorial(order) * np.mean(vals * zeta ** (-order))


def bol(f: Field, n: int, p: complex, spec: DiffSpec) -> complex:
    """D^n f = (2 pi i)^-n d^n f/dtau^n, holomorphic f."""
    return cauchy_deriv(f, p, n, spec) / (2j * math.pi) ** n


def bol_term_constant(n: int, D: int, displayed: bool = False) -> complex:
    """Constant C with D^(2n-1)[Log((t-a-)/(t-a+)) Q(t,1)^(n-1)] = C / Q(t,1)^n.

    The raw derivative is (-1)^n (n-1)!^2 D^(n-1/2) / Q^n, which after the
    (2 pi i)^-(2n-1) normalisation gives i (2 pi)^(1-2n) (n-1)!^2 D^(n-1/2).
    displayed=True returns -i (2 pi)^(2n-1) (n-1)!^2 D^(n-1/2) instead, the
    form the identity is usually quoted in; it is off by -(2 pi)^(4n-2).
    """
    base = math.factorial(n - 1) ** 2 * D ** (n - 0.5)
    if displayed:
        return -1j * (2 * math.pi) ** (2 * n - 1) * base
    return 1j * (2 * math.pi) ** (1 - 2 * n) * base


def bol_term_check(Q: QForm, n: int, p: complex, spec: DiffSpec | None = None,
                   displayed: bool = False) -> float:
    """Relative residual of D^(2n-1)[Log((t-a-)/(t-a+)) Q(t,1)^(n-1)] against
    bol_term_constant(n, D) / Q(t,1)^n, derivatives by Cauchy contour."""
    p = complex(p)
    am, ap = roots(Q)
    if n < 1:
        raise ValueError("n must be >= 1")
    if spec is None:
        spec = DiffSpec(contour_radius=0.5 * min(p.imag, abs(p - am), abs(p - ap)))
    a, b = np.array([am]), np.array([ap])

    def g(z):
        return log_ratio_array(z, a, b)[0] * Q.value(z) ** (n - 1)

    lhs = cauchy_deriv(g, p, 2 * n - 1, spec, cut=(am, ap)) / (2j * math.pi) ** (2 * n - 1)
    rhs = bol_term_constant(n, Q.D, displayed) / Q.value(p) ** n
    return abs(lhs - rhs) / abs(rhs)

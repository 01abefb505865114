"""The theta kernel theta*_{-k}(tau, z), summed over all integral triples."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .series import csum


@dataclass
class ThetaValue:
    value: complex
    est_error: float
    d_range: tuple[int, int]
    forms_used: int

    def to_dict(self) -> dict:
        return {"value": [self.value.real, self.value.imag], "est_error": self.est_error,
                "d_range": list(self.d_range), "forms_used": self.forms_used}


def _gram(tau: complex) -> np.ndarray:
    """Matrix of M(a,b,c) = |Q(tau,1)|^2/v^2 + Q_tau^2 in the basis (a, b, c)."""
    u, v = tau.real, tau.imag
    xi = np.array([tau * tau, tau, 1.0])
    eta = np.array([u * u + v * v, u, 1.0]) / v
    return np.real(np.outer(xi, xi.conj())) / (v * v) + np.outer(eta, eta)


def _triples(tau: complex, R: float):
    G = _gram(tau)
    Gi = np.linalg.inv(G)
    bounds = [int(math.floor(math.sqrt(R * Gi[i, i]))) for i in range(3)]
    ra, rb, rc = (np.arange(-m, m + 1, dtype=np.int64) for m in bounds)
    A, B, C = np.meshgrid(ra, rb, rc, indexing="ij")
    A, B, C = A.ravel(), B.ravel(), C.ravel()
    X = np.stack([A, B, C]).astype(float)
    M = np.einsum("in,ij,jn->n", X, G, X)
    keep = (M <= R) & ~((A == 0) & (B == 0) & (C == 0))
    return A[keep], B[keep], C[keep], M[keep]


def kernel_radius(k: int, tau: complex, z: complex, tol: float) -> float:
    """Radius R in M with the discarded tail below tol (Gaussian decay exp(-2 pi y M))."""
    y, v = z.imag, tau.imag
    L = math.log(1.0 / tol) + 5.0
    R = L / (2 * math.pi * y)
    for _ in range(3):
        # polynomial growth |Q_tau| |Q|^k <= M^((k+1)/2) v^k and the lattice count
        R = (L + 0.5 * (k + 4) * math.log(2.0 + R * max(v, 1.0) ** 2)) / (2 * math.pi * y)
    return R


def _theta_sum(k: int, tau: complex, z: complex, R: float, qtau_factor: bool = True):
    a, b, c, M = _triples(tau, R)
    u, v = tau.real, tau.imag
    y = z.imag
    Q = (a * tau + b) * tau + c
    qt = (a * (u * u + v * v) + b * u + c) / v
    d = b * b - 4 * a * c
    weight = np.abs(qt) if qtau_factor else 1.0
    terms = weight * Q ** k * np.exp(-4 * math.pi * np.abs(Q) ** 2 * y / (v * v)
                                        - 2j * math.pi * d * z)
    # order by (d, a, b, c) so the sum does not depend on the box layout
    order = np.lexsort((c, b, a, d))
    val = y ** (k + 1) * csum(terms[order])
    drange = (int(d.min()), int(d.max())) if d.size else (0, 0)
    return val, drange, int(a.size)


def eval_theta_kernel(k: int, tau: complex, z: complex, tol: float = 1e-12,
                      qtau_factor: bool = True) -> ThetaValue:
    """y^(k+1) sum |Q_tau| Q(tau,1)^k exp(-4 pi |Q(tau,1)|^2 y/v^2) exp(-2 pi i d z).

    The sum is over every integral (a, b, c) with d = b^2 - 4ac of any sign.
    The error estimate compares radius R against R*sqrt(2).  qtau_factor=False
    drops |Q_tau|; that variant is used as a control in the z-modularity
    checks (it is modular of weight -1/2 - k).
    """
    tau, z = complex(tau), complex(z)
    if tau.imag <= 0 or z.imag <= 0:
        raise ValueError("tau and z must lie in the upper half-plane")
    R = kernel_radius(k, tau, z, tol)
    v1, dr, n = _theta_sum(k, tau, z, R, qtau_factor)
    v2, dr2, n2 = _theta_sum(k, tau, z, R * math.sqrt(2), qtau_factor)
    return ThetaValue(v2, abs(v2 - v1), dr2, n2)


def kronecker(c: int, d: int) -> int:
    """Extended Legendre symbol (c/d) for odd d (Shimura's convention)."""
    if d % 2 == 0:
        raise ValueError("d must be odd")
    if c == 0:
        return 1 if abs(d) == 1 else 0
    sign = 1
    if d < 0:
        d = -d
        if c < 0:
            sign = -1
    # Jacobi symbol (c/d), d odd positive
    a, n, res = c % d, d, 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                res = -res
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            res = -res
        a %= n
    return sign * (res if n == 1 else 0)


def half_integral_factor(g, z: complex, kappa: float) -> complex:
    """(c/d) eps_d^(2 kappa) (c z + d)^kappa with the principal branch, kappa in 1/2 + Z."""
    a, b, c, d = g
    if c % 4:
        raise ValueError("matrix is not in Gamma_0(4)")
    eps = 1 if d % 4 == 1 else 1j
    return kronecker(c, d) * eps ** (2 * kappa) * np.exp(kappa * np.log(c * z + d))


def theta_z_modularity_residual(k: int, tau: complex, z_points, g, tol: float = 1e-12,
                                conjugate_factor: bool = False, kappa: float | None = None,
                                qtau_factor: bool = True):
    """Residual of theta(tau, g z) = C * J(g, z) theta(tau, z) with |C| = 1 fitted.

    J is the weight kappa factor of half_integral_factor, kappa = 1/2 - k by
    default (complex conjugate with conjugate_factor).  C is fitted at the
    first z and reused at the others; returns (max residual relative to
    |theta(tau, g z)|, C).
    """
    from .qforms import mobius
    if g[2] % 4 or g[0] * g[3] - g[1] * g[2] != 1:
        raise ValueError("matrix is not in Gamma_0(4)")
    if kappa is None:
        kappa = 0.5 - k
    C = None
    worst = 0.0
    for z in z_points:
        lhs = eval_theta_kernel(k, tau, mobius(g, z), tol, qtau_factor).value
        J = half_integral_factor(g, z, kappa)
        if conjugate_factor:
            J = np.conj(J)
        rhs = J * eval_theta_kernel(k, tau, z, tol, qtau_factor).value
        if C is None:
            C = lhs / rhs / abs(lhs / rhs)
        worst = max(worst, abs(lhs - C * rhs) / max(abs(lhs), 1e-300))
    return float(worst), complex(C)

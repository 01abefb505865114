"""Negative-weight side: Psi, the constant c_inf, Eichler integrals of Lambda
and the splitting of Psi into constant, holomorphic and non-holomorphic parts."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from .qforms import FormSet, Params, QForm, ball_forms, crossing_heights, sort_key
from .series import (DEFAULT_POLICY, SeriesValue, TruncationPolicy, ball_sum, csum,
                     eval_Lambda)
from .special import beta_complete_half, beta_half

PSI_REFUSE_TOL = 1e-6


def psi_terms(params: Params, tau: complex):
    D, k = params.D, params.k
    v = complex(tau).imag

    def term(F: FormSet):
        qt = F.q_tau(tau)
        # D v^2 / |Q(tau,1)|^2 = D / (D + Q_tau^2)
        x = D / (D + qt * qt)
        return 0.5 * F.values(tau) ** k * beta_half(x, k)
    return term


def eval_Psi(params: Params, tau: complex, policy=DEFAULT_POLICY, forms=None) -> SeriesValue:
    """(1/2) sum Q(tau,1)^k B(D v^2/|Q(tau,1)|^2; k + 1/2, 1/2); diverges on E_D."""
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    near = ball_forms(params.D, tau, 1.0) if forms is None else forms
    if near.a.size and np.min(np.abs(near.q_tau(tau))) < PSI_REFUSE_TOL:
        raise ValueError(f"Psi does not converge on E_D (tau={tau})")
    return ball_sum(params, tau, policy, psi_terms(params, tau), forms)


# ---------------------------------------------------------------- c_infinity

@lru_cache(maxsize=None)
def _local_root_count(D: int, p: int, e: int) -> int:
    """#{x mod p^e : x^2 = D mod p^e}."""
    if e == 0:
        return 1
    m = p ** e
    x = np.arange(m, dtype=np.int64)
    return int(np.count_nonzero((x * x - D) % m == 0))


def root_counts(D: int, A: int) -> np.ndarray:
    """r[a] = #{b mod 2a : b^2 = D mod 4a} for 0 <= a <= A (r[0] unused).

    The count of square roots of D modulo 4a is multiplicative; for an odd
    prime p not dividing D it equals 1 + (D/p) at every exponent.
    """
    N = np.ones(A + 1, dtype=np.int64)
    sieve = np.ones(A + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(A) + 1):
        if sieve[i]:
            sieve[i * i::i] = False
    primes = np.nonzero(sieve)[0]
    bad = {p for p in range(2, D + 1) if D % p == 0 and all(p % q for q in range(2, p))}
    bad.add(2)
    for p in primes:
        p = int(p)
        if p in bad:
            continue
        chi = pow(D % p, (p - 1) // 2, p)
        f = 2 if chi == 1 else 0
        if f != 1:
            N[p::p] *= f
    idx = np.arange(A + 1, dtype=np.int64)
    for p in sorted(bad):
        e = np.zeros(A + 1, dtype=np.int64)
        pe = p
        while pe <= A:
            e[pe::pe] += 1
            pe *= p
        shift = 2 if p == 2 else 0
        # counts stabilise once p^E is far past D; cap the brute force there
        cap = 1
        while p ** cap <= max(64 * D * D, 64):
            cap += 1
        table = np.array([_local_root_count(D, p, min(E, cap))
                          for E in range(int(e.max()) + shift + 1)], dtype=np.int64)
        N *= table[e + shift]
    N[0] = 0
    del idx
    return N // 2


def residue_count_bound(D: int, a) -> np.ndarray:
    """Crude envelope r(a) <= 4 sqrt(a D) used for the tail."""
    return 4.0 * np.sqrt(np.asarray(a, dtype=float) * D)


@dataclass(frozen=True)
class CInfinity:
    value: float
    half_sum: float
    tail_bound: float
    A: int

    def to_dict(self) -> dict:
        return asdict(self)


@lru_cache(maxsize=None)
def c_infinity(params: Params, tol: float = 1e-8) -> CInfinity:
    """Limit of Psi at i infinity by direct summation.

    half_sum is pi D^(k+1/2)/(2^(2k)(2k+1)) * sum_{a>=1} r(a) a^(-k-1),
    i.e. the contribution of the forms with a > 0; forms with a < 0 give
    the same amount, so value = 2 * half_sum.
    """
    D, k = params.D, params.k
    pref = math.pi * D ** (k + 0.5) / (4 ** k * (2 * k + 1))
    # 2 * pref * sum_{a>A} 4 sqrt(D) a^(-k-1/2) <= 2 pref 4 sqrt(D) A^(1/2-k)/(k-1/2)
    c = 2 * pref * 4 * math.sqrt(D) / (k - 0.5)
    A = max(64, int(math.ceil((c / tol) ** (1 / (k - 0.5)))))
    r = root_counts(D, A)
    a = np.arange(1, A + 1, dtype=float)
    s = math.fsum(r[1:] / a ** (k + 1))
    tail = c * A ** (0.5 - k)
    return CInfinity(2 * pref * s, pref * s, tail, A)


# ---------------------------------------------------------------- Eichler integrals

TAIL_HEIGHT = 6.0


@dataclass(frozen=True)
class QuadraturePath:
    base: complex
    segments: tuple
    v_max: float
    nodes: int


def vertical_path(params: Params, tau: complex, panel: float = 0.25, nodes: int = 20) -> QuadraturePath:
    """Vertical segments from tau up to v_max, split at the E_D crossings.

    Above every apex (height H) Lambda is holomorphic and decays like
    exp(-2 pi t), so unit panels run from H up to v_max = H + 6.
    """
    tau = complex(tau)
    u, v = tau.real, tau.imag
    H = max(math.sqrt(params.D) / 2, v) + 0.5
    cuts = [v] + [h for h, _ in crossing_heights(params, u, v, H)] + [H]
    segs = []
    for s0, s1 in zip(cuts[:-1], cuts[1:]):
        m = max(1, int(math.ceil((s1 - s0) / panel)))
        edges = np.linspace(s0, s1, m + 1)
        segs.extend(zip(edges[:-1], edges[1:]))
    edges = np.linspace(H, H + TAIL_HEIGHT, int(TAIL_HEIGHT) + 1)
    segs.extend(zip(edges[:-1], edges[1:]))
    return QuadraturePath(tau, tuple((float(a), float(b)) for a, b in segs), H + TAIL_HEIGHT, nodes)


def _nodes(path: QuadraturePath, n: int):
    x, w = leggauss(n)
    ts, ws = [], []
    for s0, s1 in path.segments:
        ts.append((s1 - s0) / 2 * x + (s1 + s0) / 2)
        ws.append(w * (s1 - s0) / 2)
    return np.concatenate(ts), np.concatenate(ws)


@lru_cache(maxsize=4096)
def _lambda_on_line(params: Params, u: float, t: float, bound_a: int) -> complex:
    pol = TruncationPolicy(bound_a, doubling_check=False)
    return eval_Lambda(params, complex(u, t), pol).value


def _vertical_integrals(params: Params, tau: complex, policy: TruncationPolicy,
                        n: int) -> tuple[complex, complex]:
    k = params.k
    tau = complex(tau)
    u, v = tau.real, tau.imag
    path = vertical_path(params, tau, nodes=n)
    ts, ws = _nodes(path, n)
    lam = np.array([_lambda_on_line(params, u, float(t), policy.bound_a) for t in ts])
    s = ts - v
    I1 = csum(ws * lam * s ** (2 * k))
    I2 = csum(ws * np.conj(lam) * (2 * v + s) ** (2 * k))
    # one-term exponential tail beyond v_max
    top = path.v_max
    lt = _lambda_on_line(params, u, top, policy.bound_a) / (2 * math.pi)
    I1 += lt * (top - v) ** (2 * k)
    I2 += np.conj(lt) * (top + v) ** (2 * k)
    E = -(2j * math.pi) ** (2 * k + 1) / math.factorial(2 * k) * 1j * (-1) ** k * I1
    # sign chosen so that xi_{-2k} of the result is +Lambda
    L = -(2j) ** (-2 * k - 1) * 1j * (-1) ** k * I2
    return complex(E), complex(L)


@lru_cache(maxsize=256)
def eichler_pair(params: Params, tau: complex, policy: TruncationPolicy = DEFAULT_POLICY,
                 nodes: int = 20) -> tuple[SeriesValue, SeriesValue]:
    """(E_Lambda(tau), Lambda*(tau)) along the vertical path above tau.

    The error estimate compares against a coarser rule on the same panels.
    """
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    E, L = _vertical_integrals(params, tau, policy, nodes)
    E0, L0 = _vertical_integrals(params, tau, policy, (nodes * 3) // 5)
    npts = len(vertical_path(params, tau).segments) * nodes
    return (SeriesValue(E, abs(E - E0), npts), SeriesValue(L, abs(L - L0), npts))


def eichler_hol(params: Params, tau: complex, policy=DEFAULT_POLICY, nodes: int = 20) -> SeriesValue:
    """-(2 pi i)^(2k+1)/(2k)! int_tau^{i inf} Lambda(w) (tau - w)^(2k) dw."""
    return eichler_pair(params, complex(tau), policy, nodes)[0]


def eichler_nonhol(params: Params, tau: complex, policy=DEFAULT_POLICY, nodes: int = 20) -> SeriesValue:
    """-(2i)^(-2k-1) int_{-conj tau}^{i inf} conj(Lambda(-conj w)) (w + tau)^(2k) dw."""
    return eichler_pair(params, complex(tau), policy, nodes)[1]


# ---------------------------------------------------------------- splitting

def enclosing_forms(params: Params, tau: complex) -> list[QForm]:
    """Forms whose geodesic separates tau from i infinity (tau on the bounded side)."""
    tau = complex(tau)
    # inside S_Q, -D/(4|a|v) <= Q_tau < 0
    F = ball_forms(params.D, tau, max(math.sqrt(params.D), params.D / (4 * tau.imag)) + 1.0)
    qt = F.q_tau(tau)
    inside = np.sign(F.a) * qt < 0
    return sorted(F.select(inside).forms(), key=sort_key)


def _ray_integral(f, h: float, n: int = 48, panels: int = 8) -> complex:
    """int_0^inf f(t) dt for f = O(t^-2), via t = h x/(1-x) and panelled Gauss-Legendre."""
    x, w = leggauss(n)
    edges = np.linspace(0.0, 1.0, panels + 1)
    total = []
    for x0, x1 in zip(edges[:-1], edges[1:]):
        xs = (x1 - x0) / 2 * x + (x1 + x0) / 2
        t = h * xs / (1 - xs)
        jac = h / (1 - xs) ** 2
        total.append(w * (x1 - x0) / 2 * jac * f(t))
    return csum(np.concatenate(total))


def crossing_correction(params: Params, Q: QForm, tau: complex) -> tuple[complex, complex]:
    """Per-form integrals of the Eichler kernels from the crossing point to i infinity.

    p is where the vertical line through tau meets S_Q.  Returns
    (H, H*) with the same normalisations as eichler_hol and eichler_nonhol,
    integrand 1/Q(w,1)^(k+1) in place of Lambda.
    """
    k = params.k
    tau = complex(tau)
    u = tau.real
    h2 = params.D / (4 * Q.a * Q.a) - (u + Q.b / (2 * Q.a)) ** 2
    if h2 <= 0:
        raise ValueError("vertical line does not meet the geodesic")
    p = complex(u, math.sqrt(h2))
    q = -p.conjugate()
    scale = max(p.imag, abs(tau - p), 0.25)

    def fh(t):
        w = p + 1j * t
        return 1j * (tau - w) ** (2 * k) / ((Q.a * w + Q.b) * w + Q.c) ** (k + 1)

    def fs(t):
        w = q + 1j * t
        return 1j * (w + tau) ** (2 * k) / ((Q.a * w - Q.b) * w + Q.c) ** (k + 1)

    H = -(2j * math.pi) ** (2 * k + 1) / math.factorial(2 * k) * _ray_integral(fh, scale)
    Hs = -(2j) ** (-2 * k - 1) * _ray_integral(fs, scale)
    return H, Hs


def local_term(params: Params, tau: complex) -> complex:
    """Correction that makes the splitting hold off the unbounded component.

    For each enclosing form: B(1; k+1/2, 1/2) Q(tau,1)^k plus the difference
    between the sign-consistent and the vertical-path Eichler integrals.
    Zero in the unbounded component.
    """
    D, k = params.D, params.k
    cc = D ** (k + 0.5) * math.factorial(2 * k) / (4 * math.pi) ** (2 * k + 1)
    b1 = beta_complete_half(k)
    total = []
    for Q in enclosing_forms(params, tau):
        H, Hs = crossing_correction(params, Q, tau)
        total.append(b1 * Q.value(tau) ** k + 2 * Q.sign * (cc * H - D ** (k + 0.5) * Hs))
    return csum(np.array(total, dtype=complex)) if total else 0j


@dataclass
class SplitReport:
    psi_value: complex
    c_inf: float
    eichler_hol: complex
    eichler_nonhol: complex
    residual: float
    local_term: complex = 0j
    residual_local: float = float("nan")
    est_error: float = 0.0

    def to_dict(self) -> dict:
        out = {}
        for key, val in asdict(self).items():
            out[key] = [val.real, val.imag] if isinstance(val, complex) else val
        return out


def split_residual(params: Params, tau: complex, policy=DEFAULT_POLICY,
                   with_local: bool = True) -> SplitReport:
    """|Psi - (c_inf - D^(k+1/2)(2k)!/(4 pi)^(2k+1) E + D^(k+1/2) Lambda*)|.

    Also reports the residual after adding local_term, which is the form the
    identity takes inside bounded components.
    """
    D, k = params.D, params.k
    tau = complex(tau)
    psi = eval_Psi(params, tau, policy)
    cinf = c_infinity(params, min(policy.target_tol, 1e-7))
    E, L = eichler_pair(params, tau, policy)
    cc = D ** (k + 0.5) * math.factorial(2 * k) / (4 * math.pi) ** (2 * k + 1)
    model = cinf.value - cc * E.value + D ** (k + 0.5) * L.value
    rep = SplitReport(psi.value, cinf.value, E.value, L.value, abs(psi.value - model),
                      est_error=psi.est_error + cc * E.est_error
                      + D ** (k + 0.5) * L.est_error + cinf.tail_bound)
    if with_local:
        loc = local_term(params, tau)
        rep.local_term = loc
        rep.residual_local = abs(psi.value - model - loc)
    return rep


def policy_without_doubling(policy: TruncationPolicy) -> TruncationPolicy:
    return replace(policy, doubling_check=False)

"""Integral binary quadratic forms of positive non-square discriminant.

Points of the half-planes are plain Python complex numbers; the sign of the
imaginary part says which half-plane a point lives in.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np
from sympy.ntheory import sqrt_mod

ON_GEODESIC_TOL = 1e-9


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


@dataclass(frozen=True)
class Params:
    D: int = 5
    k: int = 2

    def __post_init__(self):
        check_discriminant(self.D)
        if self.k < 2 or self.k % 2:
            raise ValueError(f"k must be a positive even integer >= 2, got {self.k}")


def check_discriminant(D: int) -> None:
    if D <= 0 or D % 4 not in (0, 1) or is_square(D):
        raise ValueError(f"D={D} is not a positive non-square discriminant")


@dataclass(frozen=True, order=True)
class QForm:
    a: int
    b: int
    c: int

    @property
    def D(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def sign(self) -> int:
        return 1 if self.a > 0 else -1

    def __neg__(self) -> "QForm":
        return QForm(-self.a, -self.b, -self.c)

    def value(self, z):
        """Q(z, 1)."""
        return (self.a * z + self.b) * z + self.c

    def deriv(self, z):
        """Q'(z, 1), derivative in the first variable."""
        return 2 * self.a * z + self.b

    def q_tau(self, z) -> float:
        return q_tau(self, z)

    def roots(self) -> tuple[float, float]:
        return roots(self)

    def act(self, g) -> "QForm":
        return act(self, g)

    def to_list(self) -> list[int]:
        return [self.a, self.b, self.c]


def sort_key(Q: QForm):
    return (abs(Q.a), Q.a, Q.b)


# SL2(Z) matrices are 4-tuples (a, b, c, d) of Python ints.
IDENTITY = (1, 0, 0, 1)
T = (1, 1, 0, 1)
S = (0, -1, 1, 0)


def det(g) -> int:
    return g[0] * g[3] - g[1] * g[2]


def inverse(g):
    a, b, c, d = g
    return (d, -b, -c, a)


def matmul(g, h):
    a, b, c, d = g
    e, f, x, y = h
    return (a * e + b * x, a * f + b * y, c * e + d * x, c * f + d * y)


def mobius(g, z):
    a, b, c, d = g
    return (a * z + b) / (c * z + d)


def j_factor(g, z):
    return g[2] * z + g[3]


def random_sl2(rng: np.random.Generator, bound: int = 5):
    """Random matrix in SL2(Z) with entries in [-bound, bound]."""
    while True:
        a, c = (int(x) for x in rng.integers(-bound, bound + 1, size=2))
        if math.gcd(a, c) != 1:
            continue
        sols = [(a, b, c, d) for b in range(-bound, bound + 1) for d in range(-bound, bound + 1)
                if a * d - b * c == 1]
        if sols:
            return sols[int(rng.integers(len(sols)))]


def act(Q: QForm, g) -> QForm:
    """Q o g, i.e. (x, y) -> Q(ax + by, cx + dy)."""
    if det(g) != 1:
        raise ValueError("matrix must have determinant 1")
    a, b, c = Q.a, Q.b, Q.c
    p, q, r, s = g
    return QForm(
        a * p * p + b * p * r + c * r * r,
        2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
        a * q * q + b * q * s + c * s * s,
    )


def roots(Q: QForm) -> tuple[float, float]:
    """(alpha_minus, alpha_plus) = ((-b - sqrt D)/2a, (-b + sqrt D)/2a)."""
    r = math.sqrt(Q.D)
    return ((-Q.b - r) / (2 * Q.a), (-Q.b + r) / (2 * Q.a))


def q_value(Q: QForm, z):
    return Q.value(z)


def q_tau(Q: QForm, z) -> float:
    z = complex(z)
    if z.imag == 0:
        raise ValueError("Q_tau is undefined on the real line")
    return (Q.a * abs(z) ** 2 + Q.b * z.real + Q.c) / z.imag


@dataclass(frozen=True)
class Geodesic:
    form: QForm
    center: float
    radius: float
    orientation: str

    @property
    def apex(self) -> complex:
        return complex(self.center, self.radius)

    def to_dict(self) -> dict:
        return {"a": self.form.a, "b": self.form.b, "c": self.form.c,
                "center": self.center, "radius": self.radius,
                "orientation": self.orientation}


def geodesic(Q: QForm) -> Geodesic:
    return Geodesic(Q, -Q.b / (2 * Q.a), math.sqrt(Q.D) / (2 * abs(Q.a)),
                    "ccw" if Q.a > 0 else "cw")


def enumerate_forms(params: Params, bound_a: int, b_max: int | None = None,
                    u_center: float = 0.0, u_halfwidth: float = 0.5,
                    v_max: float = 1.0) -> list[QForm]:
    """All forms of discriminant D with 0 < |a| <= bound_a.

    Without b_max, b is limited per a so that every geodesic relevant to the
    window |u - u_center| <= u_halfwidth, v <= v_max is kept.
    """
    D = params.D
    check_discriminant(D)
    if bound_a < 1:
        raise ValueError("bound_a must be >= 1")
    out = []
    for aa in range(1, bound_a + 1):
        for a in (-aa, aa):
            if b_max is None:
                w = 2 * aa * u_halfwidth + math.sqrt(D + 4 * aa * aa * v_max * v_max)
                lo = math.ceil(-2 * a * u_center - w)
                hi = math.floor(-2 * a * u_center + w)
            else:
                lo, hi = -b_max, b_max
            for b in range(lo, hi + 1):
                num = b * b - D
                if num % (4 * a) == 0:
                    out.append(QForm(a, b, num // (4 * a)))
    out.sort(key=sort_key)
    return out


@lru_cache(maxsize=None)
def _half_residues(D: int, a: int) -> tuple[int, ...]:
    """Residues b mod 2a with b^2 = D mod 4a (a > 0)."""
    rs = sqrt_mod(D % (4 * a), 4 * a, all_roots=True) if a > 0 else []
    return tuple(sorted(r for r in rs if r < 2 * a))


@lru_cache(maxsize=64)
def _residue_table(D: int, amax: int):
    aa, rr = [], []
    for a in range(1, amax + 1):
        for r in _half_residues(D, a):
            aa.append(a)
            rr.append(r)
    return np.array(aa, dtype=np.int64), np.array(rr, dtype=np.int64)


def _residue_pairs(D: int, amax: int):
    # grow the cached table geometrically so nearby calls share it
    size = 64
    while size < amax:
        size *= 2
    a, r = _residue_table(D, size)
    n = np.searchsorted(a, amax, side="right")
    return a[:n], r[:n]


@dataclass(frozen=True)
class FormSet:
    """A finite set of forms held as parallel int64 arrays."""

    D: int
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __len__(self):
        return len(self.a)

    def values(self, z):
        return (self.a * z + self.b) * z + self.c

    def q_tau(self, z) -> np.ndarray:
        z = complex(z)
        return (self.a * (z.real ** 2 + z.imag ** 2) + self.b * z.real + self.c) / z.imag

    def select(self, mask) -> "FormSet":
        return FormSet(self.D, self.a[mask], self.b[mask], self.c[mask])

    def forms(self) -> list[QForm]:
        return [QForm(int(a), int(b), int(c)) for a, b, c in zip(self.a, self.b, self.c)]

    def roots(self):
        r = math.sqrt(self.D)
        return (-self.b - r) / (2.0 * self.a), (-self.b + r) / (2.0 * self.a)

    @staticmethod
    def from_forms(forms: Iterable[QForm]) -> "FormSet":
        forms = sorted(forms, key=sort_key)
        D = forms[0].D if forms else 0
        arr = np.array([f.to_list() for f in forms], dtype=np.int64).reshape(-1, 3)
        return FormSet(D, arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy())


def ball_forms(D: int, z: complex, radius: float) -> FormSet:
    """All Q of discriminant D with |Q_z| <= radius, ordered by (|a|, a, b).

    The set is carried to itself by SL2(Z): ball(g z) = ball(z) o g^-1.
    """
    z = complex(z)
    u, v = z.real, z.imag
    if v <= 0:
        raise ValueError("ball_forms needs a point of the upper half-plane")
    # |Q_z| <= R forces |a| v^2 <= (R v + sqrt(R^2 v^2 + D v^2)) / 2
    amax = int(math.floor((radius + math.sqrt(radius * radius + D)) / (2 * v)))
    pa, pr = _residue_pairs(D, amax)
    parts = []
    for s in (1, -1):
        a = s * pa
        ctr = -2.0 * a * u
        w = np.sqrt(np.maximum(D - 4.0 * pa * pa * v * v + 4.0 * pa * v * radius, 0.0))
        m = 2 * pa
        nlo = np.ceil((ctr - w - pr) / m).astype(np.int64)
        nhi = np.floor((ctr + w - pr) / m).astype(np.int64)
        cnt = np.maximum(nhi - nlo + 1, 0)
        idx = np.repeat(np.arange(len(pa)), cnt)
        start = np.cumsum(cnt) - cnt
        n = nlo[idx] + (np.arange(idx.size) - start[idx])
        aa = a[idx]
        bb = pr[idx] + m[idx] * n
        cc = (bb * bb - D) // (4 * aa)
        parts.append((aa, bb, cc))
    a = np.concatenate([p[0] for p in parts])
    b = np.concatenate([p[1] for p in parts])
    c = np.concatenate([p[2] for p in parts])
    qt = (a * (u * u + v * v) + b * u + c) / v
    keep = np.abs(qt) <= radius
    a, b, c = a[keep], b[keep], c[keep]
    order = np.lexsort((b, a, np.abs(a)))
    return FormSet(D, a[order], b[order], c[order])


def _forms_over(D: int, u: float, vmin: float) -> list[QForm]:
    """Forms whose geodesic passes over the vertical line Re = u above height vmin."""
    out = []
    amax = int(math.floor(math.sqrt(D) / (2 * vmin)))
    for aa in range(1, amax + 1):
        for a in (aa, -aa):
            half = math.sqrt(D) / (2 * aa)
            # centre -b/2a within half of u
            lo = math.ceil(min(-2 * a * (u - half), -2 * a * (u + half)))
            hi = math.floor(max(-2 * a * (u - half), -2 * a * (u + half)))
            for b in range(lo, hi + 1):
                num = b * b - D
                if num % (4 * a) == 0:
                    out.append(QForm(a, b, num // (4 * a)))
    return out


def crossing_heights(params: Params, u: float, v_lo: float, v_hi: float = math.inf,
                     tol: float = 1e-12) -> list[tuple[float, list[QForm]]]:
    """Heights in (v_lo, v_hi) where the line Re = u meets E_D."""
    D = params.D
    if not 0 < v_lo < v_hi:
        raise ValueError("need 0 < v_lo < v_hi")
    v_hi = min(v_hi, math.sqrt(D) / 2 + 1e-12)
    hits = []
    for Q in _forms_over(D, u, v_lo):
        h2 = D / (4 * Q.a * Q.a) - (u + Q.b / (2 * Q.a)) ** 2
        if h2 <= 0:
            continue
        h = math.sqrt(h2)
        if v_lo < h < v_hi:
            hits.append((h, Q))
    hits.sort(key=lambda t: (t[0], sort_key(t[1])))
    out: list[tuple[float, list[QForm]]] = []
    for h, Q in hits:
        if out and abs(out[-1][0] - h) <= tol * max(1.0, h):
            out[-1][1].append(Q)
        else:
            out.append((h, [Q]))
    return out


def forms_vanishing_at(params: Params, z: complex, tol: float = ON_GEODESIC_TOL) -> list[QForm]:
    z = complex(z)
    D = params.D
    if z.imag <= 0:
        raise ValueError("point must lie in the upper half-plane")
    amax = int(math.floor(math.sqrt(D) / (2 * z.imag) * (1 + 1e-9) + 1e-9))
    out = []
    for aa in range(1, amax + 1):
        for a in (-aa, aa):
            half = math.sqrt(D) / (2 * aa) + 1e-9
            lo = math.ceil(min(-2 * a * (z.real - half), -2 * a * (z.real + half)))
            hi = math.floor(max(-2 * a * (z.real - half), -2 * a * (z.real + half)))
            for b in range(lo, hi + 1):
                num = b * b - D
                if num % (4 * a):
                    continue
                Q = QForm(a, b, num // (4 * a))
                if abs(q_tau(Q, z)) < tol:
                    out.append(Q)
    out.sort(key=sort_key)
    return out


def on_exceptional_set(params: Params, z: complex, tol: float = ON_GEODESIC_TOL) -> bool:
    return bool(forms_vanishing_at(params, z, tol))


def component_signature(params: Params, z: complex, window: float = 1.0,
                        floor: float = 0.05, tol: float = ON_GEODESIC_TOL) -> tuple:
    """Side of every nearby geodesic on which z lies.

    One entry (a, b, c, s) per form with a > 0 whose arc meets the strip
    |u - Re z| <= window with apex at least `floor`; s = sgn(Q_z).  Two
    points in the window share a signature iff no geodesic separates them.
    """
    z = complex(z)
    D = params.D
    amax = int(math.floor(math.sqrt(D) / (2 * floor)))
    sig = []
    for a in range(1, amax + 1):
        half = math.sqrt(D) / (2 * a)
        lo = math.ceil(-2 * a * (z.real + window + half))
        hi = math.floor(-2 * a * (z.real - window - half))
        for b in range(lo, hi + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            Q = QForm(a, b, num // (4 * a))
            qt = q_tau(Q, z)
            if abs(qt) < tol:
                raise ValueError(f"point {z} lies on the geodesic of {Q.to_list()}")
            sig.append((a, b, Q.c, 1 if qt > 0 else -1))
    return tuple(sig)


def signature_hash(sig: tuple) -> str:
    return hashlib.sha1(repr(sig).encode()).hexdigest()[:12]


def in_bounded_side(Q: QForm, z: complex) -> bool:
    return Q.sign * q_tau(Q, z) < 0

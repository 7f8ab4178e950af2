"""Weights W(z) = w(z) prod_k |z - a_k|^{2 beta_k} on the unit circle, their
moments d_j = int z^{-j} W |dz| and the geometric mean of w."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import integrate

from .errors import (
    DomainError,
    SpecificationError,
    TruncationError,
)
from .numerics import DOUBLE, ComplexPoly, Precision, periodic_fourier, poly_roots, singular_quad

RHO_FLOOR = 0.05


def _parse_turns(t):
    if isinstance(t, Fraction):
        return t
    if isinstance(t, str):
        try:
            return Fraction(t)
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecificationError(f"bad turns string {t!r}") from exc
    if isinstance(t, bool) or not isinstance(t, (int, float)):
        raise SpecificationError(f"turns must be 'p/q' or a number, got {t!r}")
    if isinstance(t, int):
        return Fraction(t)
    if not math.isfinite(t):
        raise SpecificationError("turns must be finite")
    return float(t)


@dataclass(frozen=True)
class Singularity:
    """Root-type singularity |z - a|^{2 beta} with a = exp(2 pi i turns).

    ``turns`` is a Fraction when the angle is a rational multiple of 2 pi
    and a float otherwise; floats are treated as rationally independent.
    """

    turns: Fraction | float
    beta: float | Fraction

    def __post_init__(self):
        object.__setattr__(self, "turns", _parse_turns(self.turns))
        t = self.turns
        if isinstance(t, Fraction):
            object.__setattr__(self, "turns", t - math.floor(t))
        else:
            object.__setattr__(self, "turns", t % 1.0)
        if not (self.beta > -0.5):
            raise SpecificationError(f"beta must exceed -1/2, got {self.beta}")

    @property
    def is_rational(self) -> bool:
        return isinstance(self.turns, Fraction)

    def angle(self, prec: Precision = DOUBLE):
        """arg a in [0, 2 pi)."""
        ctx = prec.ctx
        if self.is_rational:
            return 2 * ctx.pi * ctx.mpf(self.turns.numerator) / self.turns.denominator
        return 2 * ctx.pi * ctx.mpf(self.turns)

    def point(self, prec: Precision = DOUBLE):
        return prec.ctx.expj(self.angle(prec))

    def beta_at(self, prec: Precision = DOUBLE):
        b = self.beta
        ctx = prec.ctx
        if isinstance(b, Fraction):
            return ctx.mpf(b.numerator) / b.denominator
        return ctx.mpf(b)

    @property
    def is_integer(self) -> bool:
        return float(self.beta) == int(float(self.beta)) and float(self.beta) >= 0

    def to_json(self):
        t = f"{self.turns.numerator}/{self.turns.denominator}" if self.is_rational else self.turns
        b = f"{self.beta.numerator}/{self.beta.denominator}" if isinstance(self.beta, Fraction) else self.beta
        return {"turns": t, "beta": b}

    @classmethod
    def from_json(cls, obj):
        b = obj["beta"]
        if isinstance(b, str):
            b = Fraction(b)
        return cls(turns=obj["turns"], beta=b)


@dataclass(frozen=True)
class AnalyticFactor:
    """Smooth positive factor w on the circle.

    kind="laurent": w = |f|^2 with f(z) = sum_i coeffs[i] z^{jmin+i}.
    kind="explog":  w = exp(L) with L(theta) = sum_i coeffs[i] e^{i(jmin+i) theta},
                    jmin = -J and coefficients Hermitian-symmetric.
    """

    kind: str = "laurent"
    coeffs: tuple = (1.0,)
    jmin: int = 0
    rho: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        if self.kind not in ("laurent", "explog"):
            raise SpecificationError(f"unknown analytic kind {self.kind!r}")
        if not self.coeffs or all(c == 0 for c in self.coeffs):
            raise SpecificationError("analytic factor has no nonzero coefficient")
        if self.kind == "explog":
            J = len(self.coeffs) // 2
            if self.jmin != -J or len(self.coeffs) != 2 * J + 1:
                raise SpecificationError("explog coefficients must run over -J..J")
            for j in range(J + 1):
                a, b = self.coeffs[J + j], self.coeffs[J - j]
                if abs(a - b.conjugate()) > 1e-14 * (1 + abs(a)):
                    raise SpecificationError("explog coefficients must satisfy l_{-j} = conj(l_j)")
        if self.rho is None:
            object.__setattr__(self, "rho", self._default_rho())
        if not (0 < self.rho < 1):
            raise SpecificationError(f"rho must lie in (0,1), got {self.rho}")

    # -- roots of the Laurent polynomial --------------------------------
    @property
    def poly(self) -> ComplexPoly:
        return ComplexPoly(self.coeffs)

    def roots(self, prec: Precision = DOUBLE):
        """Zeros of z^{-jmin} f(z) other than 0 (exact zeros shift jmin)."""
        return _roots_cached(self.coeffs, prec.bits)

    def _default_rho(self):
        if self.kind == "explog":
            J = len(self.coeffs) // 2
            return math.exp(-1.0 / (J + 1))
        rs = [abs(complex(r)) for r in self.roots()]
        if not rs:
            return RHO_FLOOR
        rmax = max(min(r, 1 / r) if r > 0 else 0.0 for r in rs)
        if rmax >= 1 - 1e-12:
            raise SpecificationError("analytic factor vanishes on the unit circle")
        return max(RHO_FLOOR, min(rmax * 1.01, (1 + rmax) / 2))

    # -- evaluation ------------------------------------------------------
    def eval(self, theta, prec: Precision = DOUBLE):
        """w(e^{i theta})."""
        ctx = prec.ctx
        z = ctx.expj(theta)
        if self.kind == "laurent":
            s = ctx.mpc(0)
            for i, c in enumerate(self.coeffs):
                s += ctx.mpc(c) * ctx.power(z, self.jmin + i)
            return abs(s) ** 2
        L = ctx.mpf(0)
        for i, c in enumerate(self.coeffs):
            L += ctx.re(ctx.mpc(c) * ctx.power(z, self.jmin + i))
        return ctx.exp(L)

    def eval_array(self, theta: np.ndarray) -> np.ndarray:
        k = np.arange(self.jmin, self.jmin + len(self.coeffs))
        s = np.exp(1j * np.multiply.outer(np.asarray(theta, dtype=float), k)) @ np.array(self.coeffs)
        if self.kind == "laurent":
            return np.abs(s) ** 2
        return np.exp(s.real)

    def log_coeffs(self, J: int, prec: Precision = DOUBLE):
        """Fourier coefficients l_0..l_J of log w."""
        ctx = prec.ctx
        if self.kind == "explog":
            J0 = len(self.coeffs) // 2
            return [ctx.mpc(self.coeffs[J0 + j]) if j <= J0 else ctx.mpc(0) for j in range(J + 1)]
        lead, outer, inner = self._factorization(prec)
        out = [2 * ctx.log(abs(lead)) + sum((2 * ctx.log(abs(r)) for r in outer), ctx.mpf(0))]
        for k in range(1, J + 1):
            s = ctx.mpc(0)
            for r in outer:
                s -= ctx.power(r, -k)
            for r in inner:
                s -= ctx.power(ctx.conj(r), k)
            out.append(s / k)
        return out

    def _factorization(self, prec):
        ctx = prec.ctx
        coeffs = list(self.coeffs)
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
        lead = ctx.mpc(coeffs[-1])
        rs = [ctx.mpc(r) for r in _roots_cached(tuple(coeffs), prec.bits)]
        outer = [r for r in rs if abs(r) > 1]
        inner = [r for r in rs if abs(r) < 1]
        return lead, outer, inner

    def log_Di(self, z, prec: Precision = DOUBLE):
        """log D_i(w; z) = l_0/2 + sum_{j>=1} l_j z^j, analytic for |z| < 1/rho."""
        ctx = prec.ctx
        z = ctx.mpc(z)
        if self.kind == "explog":
            J0 = len(self.coeffs) // 2
            s = ctx.mpc(self.coeffs[J0]) / 2
            for j in range(1, J0 + 1):
                s += ctx.mpc(self.coeffs[J0 + j]) * ctx.power(z, j)
            return s
        lead, outer, inner = self._factorization(prec)
        s = ctx.log(abs(lead)) + sum((ctx.log(abs(r)) for r in outer), ctx.mpf(0))
        for r in outer:
            s += ctx.log(1 - z / r)
        for r in inner:
            s += ctx.log(1 - ctx.conj(r) * z)
        return s

    def fourier(self, prec: Precision = DOUBLE, tol: float | None = None):
        """Fourier coefficients of w as {k: w_k}; exact for laurent, truncated for explog."""
        ctx = prec.ctx
        if self.kind == "laurent":
            c = [ctx.mpc(x) for x in self.coeffs]
            n = len(c)
            out = {}
            for k in range(-(n - 1), n):
                s = ctx.mpc(0)
                for i in range(n):
                    if 0 <= i - k < n:
                        s += c[i] * ctx.conj(c[i - k])
                out[k] = s
            return out
        tol = tol if tol is not None else 16 * prec.eps
        J0 = len(self.coeffs) // 2
        K = max(8, 4 * J0)
        while True:
            f = lambda th: self.eval(th, prec)
            cs = periodic_fourier(f, K, prec=prec)
            scale = abs(cs[K])
            edge = max(abs(cs[0]), abs(cs[1]), abs(cs[-1]), abs(cs[-2]))
            if edge <= tol * scale:
                break
            K *= 2
            if K > 1 << 14:
                raise TruncationError("Fourier series of exp(L) did not resolve", required=K)
        out = {}
        for i, v in enumerate(cs):
            k = i - K
            if abs(v) > tol * scale:
                out[k] = ctx.mpc(v)     # numpy scalars would lose their imaginary part in ctx.conj
        return out

    def to_json(self):
        obj = {"kind": self.kind, "coeffs": [[c.real, c.imag] for c in self.coeffs], "jmin": self.jmin}
        if self.rho is not None:
            obj["rho"] = self.rho
        return obj

    @classmethod
    def from_json(cls, obj):
        try:
            coeffs = [complex(re, im) for re, im in obj["coeffs"]]
            return cls(kind=obj["kind"], coeffs=tuple(coeffs), jmin=int(obj.get("jmin", 0)), rho=obj.get("rho"))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, SpecificationError):
                raise
            raise SpecificationError(f"malformed analytic factor: {exc}") from exc


@lru_cache(maxsize=64)
def _roots_cached(coeffs: tuple, bits: int):
    c = list(coeffs)
    while c and c[0] == 0:
        c.pop(0)
    p = ComplexPoly(c)
    if p.degree < 1:
        return ()
    return tuple(poly_roots(p, Precision(bits)))


@dataclass(frozen=True)
class WeightSpec:
    analytic: AnalyticFactor = field(default_factory=AnalyticFactor)
    singularities: tuple = ()
    delta: float = 0.25

    def __post_init__(self):
        object.__setattr__(self, "singularities", tuple(self.singularities))
        sing = self.singularities
        if not (self.delta > 0):
            raise SpecificationError("delta must be positive")
        if self.delta >= 1 - self.analytic.rho:
            raise SpecificationError(f"delta={self.delta} must be < 1 - rho = {1 - self.analytic.rho}")
        for i in range(len(sing)):
            for j in range(i + 1, len(sing)):
                ti, tj = sing[i].turns, sing[j].turns
                if ti == tj or abs(float(ti) - float(tj)) < 1e-15:
                    raise SpecificationError("singular points must be distinct")
        if len(sing) > 1:
            chord = self.min_chord()
            if self.delta >= chord / 3:
                raise SpecificationError(f"delta={self.delta} must be < min|a_i-a_j|/3 = {chord / 3}")

    def min_chord(self) -> float:
        pts = [complex(s.point()) for s in self.singularities]
        return min(abs(p - q) for i, p in enumerate(pts) for q in pts[i + 1:])

    @property
    def m(self) -> int:
        return len(self.singularities)

    @property
    def rho(self) -> float:
        return self.analytic.rho

    def betas(self, prec: Precision = DOUBLE):
        return [s.beta_at(prec) for s in self.singularities]

    def points(self, prec: Precision = DOUBLE):
        return [s.point(prec) for s in self.singularities]

    def sum_beta_sq(self, prec: Precision = DOUBLE):
        return sum((b * b for b in self.betas(prec)), prec.ctx.mpf(0))

    def to_json(self) -> str:
        obj = {
            "analytic": self.analytic.to_json(),
            "singularities": [s.to_json() for s in self.singularities],
            "delta": self.delta,
        }
        return json.dumps(obj, sort_keys=True)

    @classmethod
    def from_json(cls, text: str | dict) -> "WeightSpec":
        obj = json.loads(text) if isinstance(text, str) else text
        try:
            analytic = AnalyticFactor.from_json(obj.get("analytic", {"kind": "laurent", "coeffs": [[1, 0]], "jmin": 0}))
            sing = tuple(Singularity.from_json(s) for s in obj.get("singularities", []))
            return cls(analytic=analytic, singularities=sing, delta=float(obj.get("delta", 0.25)))
        except (KeyError, TypeError) as exc:
            raise SpecificationError(f"malformed weight: {exc}") from exc


# ---------------------------------------------------------------------------
# presets

SQRT2_HALF = math.sqrt(2) / 2


def lebesgue() -> WeightSpec:
    return WeightSpec()


def z_minus_one_sq() -> WeightSpec:
    """W = |z - 1|^2."""
    return WeightSpec(singularities=(Singularity(Fraction(0), 1),))


def three_point_quartic() -> WeightSpec:
    """W = |(z-1)(z-a)(z-a^2)|^4 with a = exp(i pi sqrt 2)."""
    t = SQRT2_HALF
    return WeightSpec(singularities=(
        Singularity(Fraction(0), 2),
        Singularity(t, 2),
        Singularity((2 * t) % 1.0, 2),
    ))


def two_point_mixed() -> WeightSpec:
    """W = |z - 1|^{1/3} |z - a|^{-2/3} with a = exp(i pi sqrt 2)."""
    return WeightSpec(singularities=(
        Singularity(Fraction(0), Fraction(1, 6)),
        Singularity(SQRT2_HALF, Fraction(-1, 3)),
    ))


PRESETS = {
    "lebesgue": lebesgue,
    "z_minus_one_sq": z_minus_one_sq,
    "fig1": three_point_quartic,
    "fig2": three_point_quartic,
    "fig3": two_point_mixed,
}


def preset(name: str) -> WeightSpec:
    try:
        return PRESETS[name]()
    except KeyError:
        raise SpecificationError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


# ---------------------------------------------------------------------------
# pointwise evaluation


def eval_weight(spec: WeightSpec, theta, prec: Precision = DOUBLE):
    """W(e^{i theta}); +inf exactly at a singular point with beta < 0."""
    ctx = prec.ctx
    val = spec.analytic.eval(theta, prec)
    z = ctx.expj(theta)
    for s in spec.singularities:
        d = abs(z - s.point(prec))
        b = s.beta_at(prec)
        if d == 0:
            if b < 0:
                return ctx.inf
            if b > 0:
                return ctx.mpf(0)
            continue
        val *= ctx.power(d, 2 * b)
    return val


def eval_weight_array(spec: WeightSpec, theta: np.ndarray) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    out = spec.analytic.eval_array(theta)
    for s in spec.singularities:
        d = np.abs(2 * np.sin((theta - float(s.angle())) / 2))
        with np.errstate(divide="ignore"):
            out = out * d ** (2 * float(s.beta))
    return out


# ---------------------------------------------------------------------------
# Fourier coefficients of the singular factors


def singular_coeffs(beta, L: int, prec: Precision = DOUBLE):
    """c_0..c_L of |e^{i t} - 1|^{2 beta} = sum_l c_l e^{i l t}; c_{-l} = c_l."""
    ctx = prec.ctx
    b = ctx.mpf(beta) if not isinstance(beta, Fraction) else ctx.mpf(beta.numerator) / beta.denominator
    c = [ctx.gamma(2 * b + 1) * ctx.rgamma(b + 1) ** 2]
    for l in range(L):
        c.append(c[-1] * (l - b) / (l + b + 1))
    return c


def _finite_factor(s: Singularity, prec):
    """Exact finite Fourier sequence of |z - a|^{2 beta} for integer beta >= 0."""
    ctx = prec.ctx
    n = int(float(s.beta))
    c = singular_coeffs(n, n, prec)
    th = s.angle(prec)
    return {l: c[abs(l)] * ctx.expj(-l * th) for l in range(-n, n + 1)}


def _convolve_dicts(a: dict, b: dict, ctx):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, ctx.mpc(0)) + x * y
    return out


def euler_tail(g: Sequence, z, N: int, ctx, tol, max_terms: int = 60):
    """sum_{s>=N} g(s) z^s for |z| = 1, z != 1, from g(N), g(N+1), ...

    Uses summation by parts repeatedly:
    sum = z^N/(1-z) sum_k (z/(1-z))^k Delta^k g(N).
    Returns (value, size of last term used).
    """
    r = z / (1 - z)
    fac = ctx.power(z, N) / (1 - z)
    diffs = list(g)
    total = ctx.mpc(0)
    prev = math.inf
    last = math.inf
    for k in range(min(max_terms, len(diffs) - 1)):
        term = fac * diffs[0]
        mag = abs(term)
        if mag > prev and k > 2:
            break
        total += term
        last = mag
        if mag <= tol * abs(total) and k > 2:
            break
        prev = mag
        diffs = [diffs[i + 1] - diffs[i] for i in range(len(diffs) - 1)]
        fac *= r
    return total, float(last)


def _slow_pair(s1: Singularity, s2: Singularity, jmax: int, prec: Precision, L: int):
    """Fourier coefficients C_j, |j| <= jmax, of the product of two non-integer factors."""
    ctx = prec.ctx
    K = 60
    top = L + jmax + K + 2
    A = singular_coeffs(s1.beta_at(prec), top, prec)
    B = singular_coeffs(s2.beta_at(prec), top + jmax, prec)
    t1, t2 = s1.angle(prec), s2.angle(prec)
    e1 = [ctx.expj(-l * t1) for l in range(-L - jmax, L + jmax + 1)]
    e2 = [ctx.expj(-l * t2) for l in range(-L - 2 * jmax, L + 2 * jmax + 1)]
    off1, off2 = L + jmax, L + 2 * jmax
    Ah = [A[abs(l)] * e1[l + off1] for l in range(-L, L + 1)]
    zr = ctx.expj(-(t1 - t2))
    zl = ctx.expj(t1 - t2)
    tol = prec.eps * 1e-2
    out = {}
    worst = 0.0
    for j in range(-jmax, jmax + 1):
        Bh = [B[abs(j - l)] * e2[j - l + off2] for l in range(-L, L + 1)]
        s = ctx.fdot(Ah, Bh)
        right, r1 = euler_tail([A[l] * B[l - j] for l in range(L + 1, L + 2 + K)], zr, L + 1, ctx, tol)
        left, r2 = euler_tail([A[q] * B[q + j] for q in range(L + 1, L + 2 + K)], zl, L + 1, ctx, tol)
        s += ctx.expj(-j * t2) * (right + left)
        out[j] = s
        worst = max(worst, r1, r2)
    return out, worst


@dataclass
class MomentTable:
    """Moments d_{-J..J}; ``d[J + j]`` holds d_j."""

    J: int
    d: list
    prec: Precision = DOUBLE
    tail_bound: float = 0.0
    method: str = "convolution"

    def __getitem__(self, j: int):
        if abs(j) > self.J:
            raise IndexError(f"moment index {j} beyond J={self.J}")
        return self.d[self.J + j]

    def as_array(self) -> np.ndarray:
        return np.array([complex(x) for x in self.d])

    def toeplitz(self, n: int):
        """(n+1)x(n+1) matrix T[i, k] = d_{k-i}."""
        ctx = self.prec.ctx
        if n > self.J:
            raise IndexError("Toeplitz size exceeds moment range")
        return ctx.matrix([[self[k - i] for k in range(n + 1)] for i in range(n + 1)])

    def is_positive_definite(self, n: int | None = None) -> bool:
        n = min(self.J, 64) if n is None else n
        T = np.array([[complex(self[k - i]) for k in range(n + 1)] for i in range(n + 1)])
        try:
            np.linalg.cholesky(T)
        except np.linalg.LinAlgError:
            return False
        return True

    def to_json(self) -> str:
        return json.dumps({
            "J": self.J,
            "bits": self.prec.bits,
            "tail_bound": self.tail_bound,
            "method": self.method,
            "d": [[str(self.prec.ctx.re(x)), str(self.prec.ctx.im(x))] for x in self.d],
        })


def moments(spec: WeightSpec, J: int, prec: Precision = DOUBLE, L: int | None = None) -> MomentTable:
    """Moments via Fourier convolution of the factors of W."""
    if J < 0:
        raise DomainError("J must be nonnegative")
    ctx = prec.ctx
    fast = spec.analytic.fourier(prec)
    slow = []
    for s in spec.singularities:
        if s.is_integer:
            fast = _convolve_dicts(fast, _finite_factor(s, prec), ctx)
        else:
            slow.append(s)
    K = max(abs(k) for k in fast)
    span = J + K
    tail = 0.0
    method = "convolution"
    if not slow:
        C = {0: ctx.mpc(1)}
    elif len(slow) == 1:
        s = slow[0]
        c = singular_coeffs(s.beta_at(prec), span, prec)
        th = s.angle(prec)
        C = {l: c[abs(l)] * ctx.expj(-l * th) for l in range(-span, span + 1)}
    elif len(slow) == 2:
        L = L if L is not None else max(span + 64, 2 * span)
        L_max = 16 * L
        C, tail = _slow_pair(slow[0], slow[1], span, prec, L)
        # the Euler tail improves with L; widen the explicit window until it is negligible
        while tail > 1e3 * prec.eps and 2 * L <= L_max:
            L *= 2
            C, tail = _slow_pair(slow[0], slow[1], span, prec, L)
        if tail > 1e3 * prec.eps:
            raise TruncationError(f"convolution tail {tail:.2e} too large", required=2 * L)
    else:
        return moments_by_quadrature(spec, J, prec)
    two_pi = 2 * ctx.pi
    d = []
    for j in range(-J, J + 1):
        s = ctx.mpc(0)
        for k, v in fast.items():
            c = C.get(j - k)
            if c is not None:
                s += v * c
        d.append(two_pi * s)
    # enforce the Hermitian symmetry exactly
    for j in range(1, J + 1):
        d[J - j] = ctx.conj(d[J + j])
    d[J] = ctx.mpc(ctx.re(d[J]), 0)
    return MomentTable(J=J, d=d, prec=prec, tail_bound=tail, method=method)


def moment_by_quadrature(spec: WeightSpec, j: int, prec: Precision = DOUBLE):
    """d_j from singularity-aware quadrature (independent route)."""
    ctx = prec.ctx
    angles = [s.angle(prec) for s in spec.singularities]
    exps = [2 * s.beta_at(prec) for s in spec.singularities]
    if prec.is_double:
        a = spec.analytic
        g = lambda th: a.eval_array(th) * np.exp(-1j * j * th)
        angles = [float(x) for x in angles]
        exps = [float(e) for e in exps]
        bw = abs(j) + len(a.coeffs)
    else:
        a = spec.analytic
        g = lambda th: a.eval(th, prec) * ctx.expj(-j * th)
        bw = abs(j) + len(a.coeffs)
    return singular_quad(g, angles, exps, prec=prec, bandwidth=bw)


def moments_by_quadrature(spec: WeightSpec, J: int, prec: Precision = DOUBLE) -> MomentTable:
    ctx = prec.ctx
    pos = [moment_by_quadrature(spec, j, prec) for j in range(J + 1)]
    d = [ctx.conj(pos[-j]) for j in range(-J, 0)] + [ctx.mpc(ctx.re(pos[0]), 0)] + list(pos[1:])
    return MomentTable(J=J, d=[ctx.mpc(x) for x in d], prec=prec, tail_bound=0.0, method="quadrature")


# ---------------------------------------------------------------------------
# geometric mean


def log_mean(spec: WeightSpec, prec: Precision = DOUBLE):
    """l_0, the mean of log w."""
    return prec.ctx.re(spec.analytic.log_coeffs(0, prec)[0])


def geometric_mean(spec: WeightSpec, prec: Precision = DOUBLE):
    """G[W] = exp(mean of log w); singular factors have zero log-mean."""
    return prec.ctx.exp(log_mean(spec, prec))


def geometric_mean_by_quadrature(spec: WeightSpec) -> float:
    """exp of the mean of log W, singular factors included (adaptive quadrature)."""
    angles = sorted(float(s.angle()) % (2 * math.pi) for s in spec.singularities)

    def logW(t):
        val = math.log(float(spec.analytic.eval_array(np.array([t]))[0]))
        for s in spec.singularities:
            val += 2 * float(s.beta) * math.log(abs(2 * math.sin((t - float(s.angle())) / 2)))
        return val

    edges = [0.0] + angles + [2 * math.pi]
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi > lo:
            total += integrate.quad(logW, lo, hi, limit=400, epsabs=1e-13, epsrel=1e-13)[0]
    return math.exp(total / (2 * math.pi))

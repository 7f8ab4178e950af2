"""Precision-aware numeric kernel.

Scalar code throughout the package is written once against an mpmath
context: ``mpmath.fp`` (plain floats and complex) at 53 bits and a private
``MPContext`` at higher precision.  Vectorised numpy shortcuts are used on
the 53-bit path only where they matter for speed.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import mpmath
import numpy as np
from scipy import optimize, special

from .errors import (
    BracketError,
    ConvergenceError,
    DomainError,
    EvaluationError,
)

TWO_PI = 2.0 * math.pi


@functools.lru_cache(maxsize=None)
def _mp_context(bits: int) -> mpmath.MPContext:
    ctx = mpmath.MPContext()
    ctx.prec = bits
    return ctx


@dataclass(frozen=True)
class Precision:
    """Significand width of the working floating-point format."""

    bits: int = 53

    def __post_init__(self):
        if int(self.bits) != self.bits or self.bits < 53:
            raise DomainError(f"precision must be an integer >= 53 bits, got {self.bits}")

    @property
    def is_double(self) -> bool:
        return self.bits == 53

    @property
    def ctx(self):
        return mpmath.fp if self.bits == 53 else _mp_context(self.bits)

    @property
    def eps(self) -> float:
        return 2.0 ** (1 - self.bits)

    def guarded(self, extra: int) -> "Precision":
        return Precision(self.bits + extra)


DOUBLE = Precision(53)
QUAD = Precision(113)
OCTUPLE = Precision(237)
ESCALATION = (DOUBLE, QUAD, OCTUPLE)


def to_complex(x) -> complex:
    return complex(x)


# ---------------------------------------------------------------------------
# polynomials


@dataclass(frozen=True)
class ComplexPoly:
    """Polynomial with complex coefficients in ascending degree order."""

    coeffs: tuple

    def __init__(self, coeffs):
        c = list(coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        if not c:
            c = [0]
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def derivative(self) -> "ComplexPoly":
        return ComplexPoly([j * c for j, c in enumerate(self.coeffs)][1:] or [0])

    def as_array(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs], dtype=complex)


# ---------------------------------------------------------------------------
# quadrature


def _sample(f, theta):
    v = f(theta)
    if not math.isfinite(abs(complex(v))):
        raise EvaluationError(f"non-finite sample at theta={float(theta)!r}", theta=float(theta))
    return v


def periodic_fourier(f: Callable, J: int, N: int | None = None, prec: Precision = DOUBLE):
    """Fourier coefficients (1/2pi) int f(t) e^{-ijt} dt for |j| <= J.

    Uses N equispaced samples; N must be a power of two with N >= 4J.
    Returns a sequence of length 2J+1 holding c_{-J}, ..., c_J.
    """
    if N is None:
        N = 64
        while N < 4 * J:
            N *= 2
    if N < 4 * J or N & (N - 1):
        raise DomainError(f"sample count N={N} must be a power of two >= 4J={4 * J}")
    ctx = prec.ctx
    if prec.is_double:
        theta = TWO_PI * np.arange(N) / N
        samples = np.array([complex(_sample(f, t)) for t in theta])
        c = np.fft.fft(samples) / N
        return np.array([c[j % N] for j in range(-J, J + 1)])
    two_pi = 2 * ctx.pi
    thetas = [two_pi * k / N for k in range(N)]
    samples = [ctx.mpc(_sample(f, t)) for t in thetas]
    roots = [ctx.expj(-t) for t in thetas]
    out = []
    for j in range(-J, J + 1):
        # e^{-ij t_k} = roots[(j k) mod N]
        out.append(ctx.fsum(samples[k] * roots[(j * k) % N] for k in range(N)) / N)
    return out


@functools.lru_cache(maxsize=256)
def _gauss_legendre(n: int):
    x, w = special.roots_legendre(n)
    return x, w


@functools.lru_cache(maxsize=256)
def _gauss_jacobi(n: int, e: float):
    # weight (1+x)^e on [-1, 1]
    x, w = special.roots_jacobi(n, 0.0, e)
    return x, w


def _check_exponents(exponents):
    for e in exponents:
        if e <= -1:
            raise DomainError(f"exponent 2*beta={e} <= -1: integral diverges")


def _half_panels(angles, two_pi):
    """Split the circle into half panels anchored at singular angles.

    Returns (anchor_index, direction, length) triples.
    """
    m = len(angles)
    order = sorted(range(m), key=lambda k: angles[k])
    out = []
    for i, k in enumerate(order):
        nxt = order[(i + 1) % m]
        gap = (angles[nxt] - angles[k]) % two_pi if m > 1 else two_pi
        out.append((k, +1, gap / 2))
        out.append((nxt, -1, gap / 2))
    return out


def singular_quad(
    g: Callable,
    singular_angles: Sequence[float],
    exponents: Sequence[float],
    prec: Precision = DOUBLE,
    order: int = 24,
    bandwidth: int = 0,
    levels: int = 8,
):
    """Integral over [0, 2pi) of g(t) * prod_k |2 sin((t - t_k)/2)|^{e_k}.

    At 53 bits ``g`` receives numpy arrays of angles; at higher precision it
    receives context scalars.  ``bandwidth`` is the highest frequency present
    in ``g`` and sizes the rules on wide panels.
    """
    exponents = [float(e) if prec.is_double else e for e in exponents]
    _check_exponents(exponents)
    pairs = [(float(a) % TWO_PI, e) for a, e in zip(singular_angles, exponents) if e != 0]
    if prec.is_double:
        return _singular_quad_double(g, pairs, order, bandwidth, levels)
    return _singular_quad_mp(g, singular_angles, exponents, prec, bandwidth, levels)


def _trapezoid(g, bandwidth):
    N = max(64, 4 * bandwidth + 32)
    prev = None
    for _ in range(12):
        t = TWO_PI * np.arange(N) / N
        val = complex(np.sum(g(t)) * TWO_PI / N)
        if prev is not None and abs(val - prev) <= 1e-15 * max(1.0, abs(val)):
            return val
        prev = val
        N *= 2
    return val


def _singular_quad_double(g, pairs, order, bandwidth, levels):
    if not pairs:
        return _trapezoid(g, bandwidth)
    angles = [a for a, _ in pairs]

    def factor(theta, anchor, u):
        out = np.ones_like(theta, dtype=float)
        for k, (a, e) in enumerate(pairs):
            if k == anchor:
                continue
            out = out * np.abs(2 * np.sin((theta - a) / 2)) ** e
        return out

    total = 0j
    for k, sgn, H in _half_panels(angles, TWO_PI):
        a, e = pairs[k]
        breaks = [H * 0.5**i for i in range(levels + 1)]
        for hi, lo in zip(breaks[:-1], breaks[1:]):
            n = order + int(math.ceil(0.75 * bandwidth * (hi - lo)))
            x, w = _gauss_legendre(n)
            u = lo + (hi - lo) * (x + 1) / 2
            th = a + sgn * u
            vals = g(th) * factor(th, k, u) * np.abs(2 * np.sin(u / 2)) ** e
            total += complex(np.dot(w, vals)) * (hi - lo) / 2
        h = breaks[-1]
        n = order + int(math.ceil(0.75 * bandwidth * h))
        x, w = _gauss_jacobi(n, e)
        u = h * (x + 1) / 2
        th = a + sgn * u
        # |2 sin(u/2)|^e = u^e * (2 sin(u/2)/u)^e, the u^e part is in the rule
        smooth = np.where(u > 0, (2 * np.sin(u / 2) / np.where(u > 0, u, 1)), 1.0) ** e
        vals = g(th) * factor(th, k, u) * smooth
        total += complex(np.dot(w, vals)) * (h / 2) ** (e + 1)
    return total


def _singular_quad_mp(g, singular_angles, exponents, prec, bandwidth, levels):
    ctx = prec.ctx
    two_pi = 2 * ctx.pi
    pairs = [(ctx.mpf(a) % two_pi, ctx.mpf(e)) for a, e in zip(singular_angles, exponents) if e != 0]
    if not pairs:
        pieces = max(1, int(bandwidth // 4) + 1)
        return ctx.quad(g, [two_pi * i / pieces for i in range(pieces + 1)])
    total = ctx.mpc(0)
    for k, sgn, H in _half_panels([a for a, _ in pairs], two_pi):
        a, e = pairs[k]

        def integrand(u, a=a, e=e, k=k, sgn=sgn):
            th = a + sgn * u
            val = g(th) * ctx.power(abs(2 * ctx.sin(u / 2)), e)
            for i, (b, f) in enumerate(pairs):
                if i != k:
                    val *= ctx.power(abs(2 * ctx.sin((th - b) / 2)), f)
            return val

        def inner(s, a=a, e=e, k=k, sgn=sgn):
            # u = s^{1/(1+e)} absorbs u^e du into ds/(1+e)
            u = ctx.power(s, 1 / (1 + e))
            th = a + sgn * u
            val = g(th) * ctx.power(2 * ctx.sin(u / 2) / u, e) / (1 + e)
            for i, (b, f) in enumerate(pairs):
                if i != k:
                    val *= ctx.power(abs(2 * ctx.sin((th - b) / 2)), f)
            return val

        h = H * ctx.mpf(2) ** (-levels)
        total += ctx.quad(inner, [0, ctx.power(h, 1 + e)])
        pts = [h * 2 ** i for i in range(levels + 1)]
        pieces = 1 + int(bandwidth * float(H) / 4)
        pts += [H / 2 + H * (i + 1) / (2 * pieces) for i in range(pieces)]
        total += ctx.quad(integrand, pts)
    return total


# ---------------------------------------------------------------------------
# root finding


def _polyval(c: np.ndarray, z: np.ndarray):
    """Value and derivative of sum c_j z^j (ascending) by Horner."""
    p = np.full_like(z, c[-1])
    dp = np.zeros_like(z)
    for coef in c[-2::-1]:
        dp = dp * z + p
        p = p * z + coef
    return p, dp


def _residual_ok(c_abs, poly_val, r, eps):
    bound = 1e3 * eps * np.polyval(c_abs[::-1], abs(r))
    return abs(poly_val) <= bound


def poly_roots(p: ComplexPoly, prec: Precision = DOUBLE, maxiter: int = 500):
    """All roots of ``p`` by Aberth-Ehrlich iteration plus Newton polishing.

    Returns a numpy complex array (53 bits) or a list of context complex
    numbers (higher precision).  Exact zero roots are deflated first.
    """
    if p.degree < 1:
        raise DomainError("poly_roots needs degree >= 1")
    coeffs = list(p.coeffs)
    nzero = 0
    while coeffs[nzero] == 0:
        nzero += 1
    work = coeffs[nzero:]
    c = np.array([complex(x) for x in work])
    d = len(c) - 1
    roots = np.zeros(0, dtype=complex)
    if d == 1:
        roots = np.array([-c[0] / c[1]])
    elif d > 1:
        roots = _aberth(c, maxiter)
    if prec.is_double:
        out = np.concatenate([np.zeros(nzero, dtype=complex), _polish_double(c, roots)])
        _verify_roots(ComplexPoly(coeffs), out, prec)
        return out
    ctx = prec.ctx
    hp = [ctx.mpc(x) for x in work]
    polished = [_polish_mp(ctx, hp, r, prec) for r in roots]
    out = [ctx.mpc(0)] * nzero + polished
    _verify_roots(ComplexPoly(coeffs), out, prec)
    return out


def _aberth(c: np.ndarray, maxiter: int) -> np.ndarray:
    d = len(c) - 1
    radius = abs(c[0] / c[-1]) ** (1.0 / d)
    if not np.isfinite(radius) or radius == 0:
        radius = 1.0
    z = radius * np.exp(1j * (TWO_PI * np.arange(d) / d + 0.4))
    eps = np.finfo(float).eps
    c_abs = np.abs(c)
    done = np.zeros(d, dtype=bool)
    for _ in range(maxiter):
        pv, dpv = _polyval(c, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pv / dpv
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            s = inv.sum(axis=1)
            w = ratio / (1.0 - ratio * s)
        w = np.where(np.isfinite(w), w, 0.0)
        bound = 1e2 * eps * np.polyval(c_abs[::-1], np.abs(z))
        done = np.abs(pv) <= bound
        z = np.where(done, z, z - w)
        if done.all():
            break
    return z


def _polish_double(c, roots, steps=3):
    z = roots.astype(complex)
    c_abs = np.abs(c)
    eps = np.finfo(float).eps
    for _ in range(steps):
        pv, dpv = _polyval(c, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = pv / dpv
        step = np.where(np.isfinite(step), step, 0.0)
        cand = z - step
        pc, _ = _polyval(c, cand)
        better = np.abs(pc) < np.abs(pv)
        z = np.where(better, cand, z)
        if (np.abs(pv) <= 4 * eps * np.polyval(c_abs[::-1], np.abs(z))).all():
            break
    return z


def _polish_mp(ctx, c, r0, prec, maxsteps=120):
    z = ctx.mpc(r0)
    c_abs = [abs(x) for x in c]
    for _ in range(maxsteps):
        p = dp = ctx.mpc(0)
        for coef in reversed(c):
            dp = dp * z + p
            p = p * z + coef
        bound = 1e2 * prec.eps * ctx.fsum(a * abs(z) ** j for j, a in enumerate(c_abs))
        if abs(p) <= bound or dp == 0:
            break
        z = z - p / dp
    return z


def _verify_roots(p: ComplexPoly, roots, prec):
    ctx = prec.ctx
    c_abs = [abs(x) for x in p.coeffs]
    worst = 0.0
    for r in roots:
        val = abs(p(r))
        scale = ctx.fsum(a * abs(r) ** j for j, a in enumerate(c_abs))
        bound = 1e3 * prec.eps * scale
        if val > bound:
            worst = max(worst, float(val / scale) if scale else float(val))
    if worst:
        raise ConvergenceError(f"root residual {worst:.3e} exceeds bound", residual=worst)


def bracket_root(g: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12) -> float:
    """Real root of g on [lo, hi] by Brent's bisection/secant hybrid."""
    glo, ghi = g(lo), g(hi)
    if glo == 0:
        return lo
    if ghi == 0:
        return hi
    if glo * ghi > 0:
        raise BracketError(f"no sign change on [{lo}, {hi}]: g={glo:.3e}, {ghi:.3e}")
    return optimize.brentq(g, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps)


# ---------------------------------------------------------------------------
# argument principle


def winding_count(f: Callable[[complex], complex], vertices: Sequence[complex], samples: int = 48,
                  max_depth: int = 24) -> tuple[int, float]:
    """Zeros of f inside a closed polygon, via the change of arg f.

    Returns (count, min |f| seen on the boundary).
    """
    total = 0.0
    fmin = math.inf
    verts = list(vertices)
    for A, B in zip(verts, verts[1:] + verts[:1]):
        ts = np.linspace(0.0, 1.0, samples + 1)
        pts = [A + (B - A) * t for t in ts]
        vals = [complex(f(z)) for z in pts]
        fmin = min(fmin, min(abs(v) for v in vals))
        for i in range(samples):
            dphi, m = _arg_increment(f, pts[i], pts[i + 1], vals[i], vals[i + 1], max_depth)
            total += dphi
            fmin = min(fmin, m)
    return int(round(total / TWO_PI)), fmin


def _arg_increment(f, za, zb, fa, fb, depth):
    if fa == 0 or fb == 0:
        return 0.0, 0.0
    d = cmath.phase(fb / fa)
    if abs(d) < math.pi / 4 or depth == 0:
        return d, min(abs(fa), abs(fb))
    zm = (za + zb) / 2
    fm = complex(f(zm))
    d1, m1 = _arg_increment(f, za, zm, fa, fm, depth - 1)
    d2, m2 = _arg_increment(f, zm, zb, fm, fb, depth - 1)
    return d1 + d2, min(m1, m2)

"""Bessel functions of real order and complex argument, and the local
parametrix function H(beta; zeta) = zeta^{1/2} (i J_{beta+1/2} + J_{beta-1/2})
with its quadrant-dependent phase."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import (
    BoundaryError,
    BranchError,
    ConvergenceError,
    DomainError,
    SearchError,
)
from .numerics import DOUBLE, Precision, bracket_root, winding_count

SERIES_RADIUS = 20.0
MIN_ASYMPTOTIC_TERMS = 12


@dataclass(frozen=True)
class CalHParams:
    beta: float

    def __post_init__(self):
        if not self.beta > -0.5:
            raise DomainError(f"beta must exceed -1/2, got {self.beta}")


# ---------------------------------------------------------------------------
# Bessel J


def _series_j(ctx, nu, z):
    """Power series for J_nu(z), principal branch of (z/2)^nu."""
    h = z / 2
    q = -h * h
    term = ctx.rgamma(nu + 1)
    total = term
    k = 0
    tiny = ctx.eps * 2.0**-8
    while True:
        k += 1
        term = term * q / (k * (nu + k))
        total += term
        if abs(term) <= tiny * abs(total) and k > abs(z):
            break
        if k > 100000:
            raise ConvergenceError("Bessel series did not terminate")
    return ctx.power(h, nu) * total


def _asymptotic_j(nu, z):
    """Hankel expansion, J = (H1 + H2)/2, valid for |arg z| < pi."""
    mu = 4.0 * nu * nu
    w = complex(z)
    ak = 1.0 + 0j
    P = 1.0 + 0j
    Q = 0j
    prev = math.inf
    k = 0
    while True:
        k += 1
        ak = ak * (mu - (2 * k - 1) ** 2) / (k * 8.0 * w)
        mag = abs(ak)
        if k > MIN_ASYMPTOTIC_TERMS and (mag > prev or mag < 1e-18):
            break
        if k % 2:
            Q += (-1) ** ((k - 1) // 2) * ak
        else:
            P += (-1) ** (k // 2) * ak
        prev = mag
        if k > 200:
            break
    chi = w - (nu / 2 + 0.25) * math.pi
    return cmath.sqrt(2 / (math.pi * w)) * (P * cmath.cos(chi) - Q * cmath.sin(chi))


def bessel_j(nu, zeta, prec: Precision = DOUBLE):
    """J_nu(zeta) for real order and complex argument (principal branch)."""
    ctx = prec.ctx
    z = ctx.mpc(zeta)
    if z == 0:
        if nu == 0:
            return ctx.mpc(1)
        if nu > 0:
            return ctx.mpc(0)
        raise DomainError("J_nu(0) is infinite for nu < 0")
    az = abs(complex(zeta))
    if prec.is_double and az > SERIES_RADIUS and abs(complex(zeta).imag) < az:
        if complex(zeta).real < 0:
            # J_nu(-w) = e^{+-i pi nu} J_nu(w), keeping the principal branch
            w = -complex(zeta)
            sgn = 1 if complex(zeta).imag >= 0 else -1
            return cmath.exp(sgn * 1j * math.pi * nu) * _asymptotic_j(nu, w)
        return _asymptotic_j(nu, z)
    # series with guard bits to absorb cancellation, roughly e^{|z|}
    guard = int(az * 1.45) + 20
    hp = prec.guarded(guard).ctx
    val = _series_j(hp, hp.mpf(nu), hp.mpc(zeta))
    return ctx.mpc(val)


def bessel_i(nu, x, prec: Precision = DOUBLE):
    """Modified Bessel I_nu(x) for real x > 0 by its power series."""
    ctx = prec.guarded(int(abs(x)) + 20).ctx
    h = ctx.mpf(x) / 2
    q = h * h
    term = ctx.rgamma(nu + 1)
    total = term
    k = 0
    while True:
        k += 1
        term = term * q / (k * (nu + k))
        total += term
        if abs(term) <= ctx.eps * abs(total) and k > x:
            break
    return prec.ctx.mpf(ctx.power(h, nu) * total)


# ---------------------------------------------------------------------------
# H(beta; zeta)


def _second_quadrant(z: complex) -> bool:
    # positive imaginary axis belongs to the first quadrant
    return z.real < 0 and z.imag > 0


def bessel_combination(beta, zeta, prec: Precision = DOUBLE):
    """i J_{beta+1/2}(zeta) + J_{beta-1/2}(zeta) on the principal branch."""
    return 1j * bessel_j(beta + 0.5, zeta, prec) + bessel_j(beta - 0.5, zeta, prec)


def calH(beta, zeta, prec: Precision = DOUBLE):
    """H(beta; zeta), with the factor e^{-2 pi i beta} in the open second quadrant."""
    ctx = prec.ctx
    z = complex(zeta)
    if z.imag == 0 and z.real <= 0:
        raise BranchError(f"H(beta; zeta) undefined on (-inf, 0], zeta={z}")
    zz = ctx.mpc(zeta)
    val = ctx.sqrt(zz) * (ctx.mpc(0, 1) * bessel_j(beta + 0.5, zz, prec) + bessel_j(beta - 0.5, zz, prec))
    if _second_quadrant(z):
        val *= ctx.expj(-2 * ctx.pi * ctx.mpf(beta))
    return val


def h0(beta: float) -> complex:
    """Starting value for h(beta) from a two-term continued fraction.

    For -1/2 < beta < -1/6 the radicand is negative; the root is taken on the
    branch that keeps the seed closest to the origin.
    """
    r = (2 * beta + 3) * (6 * beta + 1)
    root = math.sqrt(r) if r >= 0 else -1j * math.sqrt(-r)
    return (root + 1j * (2 * beta + 3)) / 2


def _fast_combination(beta):
    # double-precision library Bessel, used only for argument counting
    a, b = beta + 0.5, beta - 0.5
    return lambda z: 1j * complex(special.jv(a, z)) + complex(special.jv(b, z))


def _newton(beta, z0, prec, tol=1e-13, maxiter=60):
    ctx = prec.ctx
    nu = beta + 0.5
    z = ctx.mpc(z0)
    i = ctx.mpc(0, 1)
    for _ in range(maxiter):
        jp = bessel_j(nu, z, prec)
        jm = bessel_j(nu - 1, z, prec)
        jmm = bessel_j(nu - 2, z, prec)
        F = i * jp + jm
        # J'_v = J_{v-1} - (v/z) J_v
        dF = i * (jm - nu / z * jp) + (jmm - (nu - 1) / z * jm)
        step = F / dF
        z = z - step
        if abs(step) <= tol * max(1.0, abs(z)):
            return z
    raise ConvergenceError(f"Newton for H(beta={beta}) zero did not converge", residual=float(abs(F)))


def _imaginary_axis_zero(beta, prec):
    """For -1/2 < beta < 0: t > 0 with I_{beta+1/2}(t) = I_{beta-1/2}(t)."""
    g = lambda t: float(bessel_i(beta + 0.5, t, prec) - bessel_i(beta - 0.5, t, prec))
    lo, hi = 1e-6, 1.0
    while g(hi) < 0:
        hi *= 2
        if hi > 1e3:
            raise SearchError(f"no imaginary-axis zero for beta={beta}")
    return bracket_root(g, lo, hi, tol=1e-14)


def find_h(beta, prec: Precision = DOUBLE, verify: bool = True):
    """Zero of H(beta; .) of least modulus with Re >= 0 and Im > 0.

    Returns None for beta == 0, where H(0; zeta) is a pure exponential.
    """
    CalHParams(beta)
    if beta == 0:
        return None
    ctx = prec.ctx
    if beta < 0:
        t = _imaginary_axis_zero(beta, prec)
        try:
            h = _newton(beta, 1j * t, prec)
        except ConvergenceError:
            h = ctx.mpc(0, t)
        if abs(complex(h).real) < 1e-10:
            h = ctx.mpc(0, ctx.im(h))
    else:
        h = _newton(beta, h0(beta), prec)
    hc = complex(h)
    if hc.imag <= 0 or hc.real < -1e-12:
        raise SearchError(f"Newton left the first quadrant for beta={beta}: {hc}")
    if abs(complex(calH(beta, hc))) > 1e-10 * max(1.0, abs(hc)):
        raise ConvergenceError("residual check failed", residual=abs(complex(calH(beta, hc))))
    if verify:
        _verify_smallest(beta, hc)
    return h


def _sector(radius, r0=1e-3, pad=0.05, npts=24):
    """Vertices of an annular sector covering {r0 <= |z| <= radius, -pad <= arg <= pi/2 + pad}."""
    angs = np.linspace(-pad, math.pi / 2 + pad, npts)
    outer = [radius * cmath.exp(1j * a) for a in angs]
    inner = [r0 * cmath.exp(1j * a) for a in angs[::-1]]
    return outer + inner


def _verify_smallest(beta, h: complex):
    """Argument-principle check that no zero of smaller modulus exists."""
    f = _fast_combination(beta)
    R = 2 * abs(h0(beta))
    inner = abs(h) * (1 - 1e-3)
    n_in, _ = winding_count(f, _sector(inner))
    n_out, _ = winding_count(f, _sector(max(R, abs(h) * 1.01)))
    if n_in != 0:
        raise SearchError(f"found {n_in} zero(s) of smaller modulus than {h} for beta={beta}")
    if n_out < 1:
        raise SearchError(f"argument principle sees no zero inside |z|<={R} for beta={beta}")


def calH_zeros(beta, box, prec: Precision = DOUBLE, min_size=1e-3):
    """All zeros of H(beta; .) inside box = (xmin, xmax, ymin, ymax).

    Counting uses the principal-branch combination, which has the same zeros
    as H off the negative real axis.
    """
    CalHParams(beta)
    xmin, xmax, ymin, ymax = box
    if ymin <= 0 <= ymax and xmin <= 0:
        raise BranchError("box meets the negative real axis")
    if beta == 0:
        return []
    f = _fast_combination(beta)
    found = []
    _split(f, beta, (xmin, xmax, ymin, ymax), prec, found, min_size, depth=0)
    return sorted(found, key=lambda z: (abs(complex(z)), complex(z).real))


def _split(f, beta, box, prec, found, min_size, depth):
    xmin, xmax, ymin, ymax = box
    verts = [complex(xmin, ymin), complex(xmax, ymin), complex(xmax, ymax), complex(xmin, ymax)]
    count, fmin = winding_count(f, verts)
    scale = max(abs(f(v)) for v in verts)
    if fmin < 1e-9 * max(scale, 1e-300):
        raise BoundaryError(f"zero within tolerance of box boundary {box}")
    if count == 0:
        return
    size = max(xmax - xmin, ymax - ymin)
    if count == 1 and size < 1.0:
        z0 = complex((xmin + xmax) / 2, (ymin + ymax) / 2)
        try:
            z = _newton(beta, z0, prec)
            zc = complex(z)
            if xmin <= zc.real <= xmax and ymin <= zc.imag <= ymax:
                found.append(z)
                return
        except ConvergenceError:
            pass
    if size < min_size or depth > 40:
        raise ConvergenceError(f"could not isolate zeros in {box}")
    if xmax - xmin >= ymax - ymin:
        xm = (xmin + xmax) / 2 + 1e-7 * (xmax - xmin)
        halves = [(xmin, xm, ymin, ymax), (xm, xmax, ymin, ymax)]
    else:
        ym = (ymin + ymax) / 2 + 1e-7 * (ymax - ymin)
        halves = [(xmin, xmax, ymin, ym), (xmin, xmax, ym, ymax)]
    for b in halves:
        _split(f, beta, b, prec, found, min_size, depth + 1)

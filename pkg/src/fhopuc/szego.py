"""Szegő and scattering functions of a weight, with branch cuts along the
rays through the singular points, and the constants tau and vartheta_k.

Branch convention: for each singular point a_k the logarithm
    L_k(z) = log|z - a_k| + i (arg a_k + theta),  theta = arg((z - a_k)/a_k) in (0, 2 pi),
is continuous off the outward ray a_k [1, inf).  On that ray the "+" side is
the counter-clockwise one (arg z > arg a_k), where theta -> 0.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import BranchError, DomainError
from .numerics import DOUBLE, Precision
from .weight import WeightSpec, geometric_mean


@dataclass
class SzegoData:
    spec: WeightSpec
    prec: Precision
    ell: list                     # l_0..l_J of log w
    q0: complex
    tau: object
    G: object
    vartheta: list = field(default_factory=list)
    _points: list = field(default_factory=list, repr=False)
    _betas: list = field(default_factory=list, repr=False)
    _phis: list = field(default_factory=list, repr=False)

    @property
    def m(self) -> int:
        return self.spec.m

    @property
    def points(self):
        return self._points

    @property
    def betas(self):
        return self._betas

    def summary(self) -> dict:
        ctx = self.prec.ctx
        return {
            "tau": float(self.tau),
            "G": float(self.G),
            "vartheta": [[float(ctx.re(v)), float(ctx.im(v))] for v in self.vartheta],
            "ell0": float(ctx.re(self.ell[0])),
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True)


# ---------------------------------------------------------------------------
# branch logarithms


def _rel_angle(data: SzegoData, k: int, z, side):
    """theta = arg((z - a_k)/a_k) in (0, 2 pi); on the outward ray use ``side``."""
    ctx = data.prec.ctx
    a = data._points[k]
    w = (z - a) / a
    re, im = ctx.re(w), ctx.im(w)
    if abs(im) <= 8 * data.prec.eps * abs(w) and re > 0:
        if side is None:
            raise BranchError(f"point lies on the cut ray of singularity {k}", cut_index=k)
        return ctx.mpf(0) if side > 0 else 2 * ctx.pi
    if w == 0:
        raise DomainError(f"evaluation at the singular point a_{k}")
    t = ctx.arg(w)
    if t < 0:
        t += 2 * ctx.pi
    return t


def _L(data: SzegoData, k: int, z, side=None):
    ctx = data.prec.ctx
    a = data._points[k]
    return ctx.log(abs(z - a)) + 1j * (data._phis[k] + _rel_angle(data, k, z, side))


def _L0(data: SzegoData, k: int):
    ctx = data.prec.ctx
    return ctx.mpc(0, data._phis[k] + ctx.pi)


def _log_q2(data, z, side=None):
    """log q(z)^2 = sum_k beta_k L_k(z)."""
    ctx = data.prec.ctx
    s = ctx.mpc(0)
    for k, b in enumerate(data._betas):
        if b != 0:
            s += b * _L(data, k, z, side)
    return s


def _log_q2_0(data):
    ctx = data.prec.ctx
    return ctx.fsum(b * _L0(data, k) for k, b in enumerate(data._betas)) if data._betas else ctx.mpc(0)


# ---------------------------------------------------------------------------
# construction


def build_szego(spec: WeightSpec, prec: Precision = DOUBLE, J_ell: int = 32) -> SzegoData:
    ctx = prec.ctx
    a = spec.analytic
    for i in range(64):
        if not a.eval(2 * ctx.pi * i / 64, prec) > 0:
            raise DomainError("analytic factor is not positive on the circle")
    ell = a.log_coeffs(J_ell, prec)
    data = SzegoData(
        spec=spec,
        prec=prec,
        ell=ell,
        q0=None,
        tau=ctx.exp(-ctx.re(ell[0]) / 2),
        G=ctx.exp(ctx.re(ell[0])),
        _points=[s.point(prec) for s in spec.singularities],
        _betas=[s.beta_at(prec) for s in spec.singularities],
        _phis=[s.angle(prec) for s in spec.singularities],
    )
    data.q0 = ctx.exp(_log_q2_0(data) / 2)
    data.vartheta = [vartheta_mean_value(data, k) for k in range(spec.m)]
    return data


# ---------------------------------------------------------------------------
# evaluators


def eval_q(data: SzegoData, z, side=None):
    """q(z) = prod (z - a_k)^{beta_k/2} on the branch described in the module docstring."""
    ctx = data.prec.ctx
    return ctx.exp(_log_q2(data, ctx.mpc(z), side) / 2)


def log_Di(data: SzegoData, z, side=None):
    ctx = data.prec.ctx
    z = ctx.mpc(z)
    if abs(z) >= 1 / data.spec.rho:
        raise DomainError(f"|z|={float(abs(z)):.4g} outside the disk |z| < 1/rho")
    return _log_q2(data, z, side) - _log_q2_0(data) + data.spec.analytic.log_Di(z, data.prec)


def log_De(data: SzegoData, z, side=None):
    ctx = data.prec.ctx
    z = ctx.mpc(z)
    if abs(z) <= data.spec.rho:
        raise DomainError(f"|z|={float(abs(z)):.4g} inside the disk |z| <= rho")
    zr = 1 / ctx.conj(z)
    return (-ctx.conj(data.spec.analytic.log_Di(zr, data.prec))
            - _log_q2_0(data) - ctx.conj(_log_q2(data, zr, side)))


def eval_Di(data: SzegoData, z, side=None):
    """D_i(W; z) = (q(z)^2/q(0)^2) D_i(w; z)."""
    return data.prec.ctx.exp(log_Di(data, z, side))


def eval_De(data: SzegoData, z, side=None):
    """D_e(W; z) = D_e(w; z) / (q(0)^2 conj(q(1/conj z))^2)."""
    return data.prec.ctx.exp(log_De(data, z, side))


def log_De_infinity(data: SzegoData):
    return -data.ell[0] / 2


def eval_S(data: SzegoData, z, side=None):
    """Scattering function S = D_i D_e on the annulus rho < |z| < 1/rho."""
    ctx = data.prec.ctx
    return ctx.exp(log_Di(data, z, side) + log_De(data, z, side))


def _upper(data, k, z, side):
    ctx = data.prec.ctx
    im = ctx.im(z / data._points[k])
    if im == 0 or abs(im) <= 8 * data.prec.eps * abs(z):
        if side is None:
            # on the ray itself the two one-sided definitions agree; use the "+" limit
            side = 1
        return side > 0, side
    return im > 0, side


def eval_Shat(data: SzegoData, k: int, z, side=None):
    """S_k-hat = e^{+i pi beta_k} S counter-clockwise of a_k, e^{-i pi beta_k} S otherwise.

    Continuous across the cut through a_k inside the disk B_k.
    """
    ctx = data.prec.ctx
    z = ctx.mpc(z)
    if abs(z - data._points[k]) > data.spec.delta:
        raise DomainError(f"z is outside the disk of radius delta around a_{k}")
    up, side = _upper(data, k, z, side)
    b = data._betas[k]
    phase = ctx.expj(ctx.pi * b) if up else ctx.expj(-ctx.pi * b)
    return phase * eval_S(data, z, side)


def vartheta_mean_value(data: SzegoData, k: int, nodes: int | None = None):
    """vartheta_k = S_k-hat(a_k) by the mean value over a circle of radius delta/2."""
    ctx = data.prec.ctx
    N = nodes or (data.prec.bits + 16)
    N += N % 2
    a = data._points[k]
    r = ctx.mpf(data.spec.delta) / 2
    total = ctx.mpc(0)
    for j in range(N):
        # half-step offset keeps every node off the cut through a_k
        z = a + r * a * ctx.expj(2 * ctx.pi * (j + ctx.mpf(1) / 2) / N)
        total += eval_Shat(data, k, z)
    v = total / N
    return v


def vartheta_side_limit(data: SzegoData, k: int, direction: int = 1, levels: int = 10):
    """S_k-hat(a_k e^{i direction eps}) extrapolated to eps -> 0 by Neville's scheme."""
    ctx = data.prec.ctx
    a = data._points[k]
    h0 = ctx.mpf(data.spec.delta) / 4
    hs = [h0 / 2 ** i for i in range(levels)]
    ys = [eval_Shat(data, k, a * ctx.expj(direction * h)) for h in hs]
    # polynomial extrapolation to h = 0
    P = list(ys)
    for lvl in range(1, levels):
        for i in range(levels - lvl):
            P[i] = (hs[i] * P[i + 1] - hs[i + lvl] * P[i]) / (hs[i] - hs[i + lvl])
    return P[0]


def tau_three_ways(data: SzegoData, R: float = 1e12):
    """(1/D_i(W;0), D_e(W;z) at |z| = R, G[w]^{-1/2})."""
    ctx = data.prec.ctx
    t1 = 1 / eval_Di(data, 0)
    # pick a direction away from every cut
    ang = 0.5
    while any(abs(math.remainder(ang - float(p), 2 * math.pi)) < 1e-3 for p in data._phis):
        ang += 0.1
    t2 = eval_De(data, ctx.mpf(R) * ctx.expj(ang))
    t3 = 1 / ctx.sqrt(geometric_mean(data.spec, data.prec))
    return t1, t2, t3


def vartheta_closed_form_unit(data: SzegoData, k: int):
    """vartheta_k for w = 1 from the explicit branch bookkeeping of the other factors."""
    ctx = data.prec.ctx
    a = data._points[k]
    v = ctx.mpc(1)
    for j, aj in enumerate(data._points):
        if j == k:
            continue
        ang = ctx.arg((a - aj) / aj)
        if ang < 0:
            ang += 2 * ctx.pi
        v *= ctx.expj(2 * data._betas[j] * (ang - ctx.pi))
    return v

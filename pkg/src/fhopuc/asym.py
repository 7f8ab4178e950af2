"""Leading-order asymptotic predictors for monic OPUC, their coefficients,
Toeplitz determinants and the zeros near each singular point."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .errors import BranchError, DegenerateError, DomainError, RegionError
from .numerics import ComplexPoly, poly_roots
from .opuc import OpucState, eval_phi, log_toeplitz_det
from .specfun import bessel_j, calH, find_h
from .szego import SzegoData, log_De, log_De_infinity, log_Di

INTERIOR_MAX = 0.9
EXTERIOR_MIN = 1.1


@dataclass
class Prediction:
    value: complex
    region: str          # interior | annulus | exterior | local_k
    n: int
    z: complex | None = None
    claimed_order: str = "O(1/n^2)"


# ---------------------------------------------------------------------------
# building blocks


def spurious_sum(data: SzegoData, n: int, z):
    """sum_k beta_k vartheta_k a_k^{n+1} / (a_k - z)."""
    ctx = data.prec.ctx
    z = ctx.mpc(z)
    s = ctx.mpc(0)
    for b, v, a in zip(data.betas, data.vartheta, data.points):
        s += b * v * ctx.power(a, n + 1) / (a - z)
    return s


def _ext_correction(data: SzegoData, z):
    """sum_k a_k beta_k^2 / (a_k - z)."""
    ctx = data.prec.ctx
    s = ctx.mpc(0)
    for b, a in zip(data.betas, data.points):
        s += a * b * b / (a - z)
    return s


def _cut_index(data: SzegoData, z, lo, hi):
    """Index k if z lies on the segment a_k (lo, hi) of the ray through a_k."""
    ctx = data.prec.ctx
    for k, a in enumerate(data.points):
        w = z / a
        if abs(ctx.im(w)) <= 8 * data.prec.eps * abs(w) and lo < ctx.re(w) < hi:
            return k
    return None


def _exterior_part(data, n, z):
    ctx = data.prec.ctx
    lead = ctx.exp(n * ctx.log(z) + log_De(data, z) - log_De_infinity(data))
    return lead * (1 + _ext_correction(data, z) / n)


def _interior_part(data, n, z):
    ctx = data.prec.ctx
    ratio = ctx.exp(log_Di(data, 0) - log_Di(data, z))
    return ratio * spurious_sum(data, n, z) / n


# ---------------------------------------------------------------------------
# Phi_n away from the singular points


def predict_interior(data: SzegoData, n: int, z) -> Prediction:
    """Phi_n(z) ~ (D_i(0)/D_i(z)) (1/n) sum_k beta_k vartheta_k a_k^{n+1}/(a_k - z), |z| <= 0.9."""
    ctx = data.prec.ctx
    z = ctx.mpc(z)
    if abs(z) > INTERIOR_MAX:
        raise RegionError(f"|z|={float(abs(z)):.4g} exceeds the interior margin {INTERIOR_MAX}")
    return Prediction(_interior_part(data, n, z), "interior", n, complex(z), "O(1/n^2)")


def predict_exterior(data: SzegoData, n: int, z) -> Prediction:
    """Phi_n(z) ~ z^n (D_e(z)/D_e(inf)) (1 + (1/n) sum_k a_k beta_k^2/(a_k - z)), |z| >= 1.1."""
    ctx = data.prec.ctx
    z = ctx.mpc(z)
    if abs(z) < EXTERIOR_MIN:
        raise RegionError(f"|z|={float(abs(z)):.4g} below the exterior margin {EXTERIOR_MIN}")
    if abs(z) <= data.spec.rho:
        raise RegionError("z inside the disk |z| <= rho")
    return Prediction(_exterior_part(data, n, z), "exterior", n, complex(z), "O(1/n^2)")


def predict_annulus(data: SzegoData, n: int, z) -> Prediction:
    """Sum of the exterior-type and interior-type terms on the cut annulus outside the disks B_k."""
    ctx = data.prec.ctx
    z = ctx.mpc(z)
    rho = data.spec.rho
    if not (rho < abs(z) < 1 / rho):
        raise RegionError(f"|z|={float(abs(z)):.4g} outside the annulus ({rho:.3g}, {1 / rho:.3g})")
    for k, a in enumerate(data.points):
        if abs(z - a) < data.spec.delta:
            raise RegionError(f"z lies in the disk B_{k}")
    k = _cut_index(data, z, rho, 1 / rho)
    if k is not None:
        raise BranchError(f"z lies on the cut through a_{k}", cut_index=k)
    val = _exterior_part(data, n, z) + _interior_part(data, n, z)
    return Prediction(val, "annulus", n, complex(z), "O(1/n^2)")


def predict(data: SzegoData, n: int, z) -> Prediction:
    """Dispatch on the region of z (interior, annulus, exterior)."""
    r = abs(complex(z))
    if r <= INTERIOR_MAX:
        return predict_interior(data, n, z)
    if r >= EXTERIOR_MIN:
        return predict_exterior(data, n, z)
    return predict_annulus(data, n, z)


# ---------------------------------------------------------------------------
# local behavior near a_k


def zeta_n(data: SzegoData, k: int, n: int, z):
    """-i (n/2) Log(z/a_k) with the principal logarithm."""
    ctx = data.prec.ctx
    return -1j * (ctx.mpf(n) / 2) * ctx.log(ctx.mpc(z) / data.points[k])


def _calH_lower(beta, zeta, prec):
    """H(beta; .) on the negative real axis as the limit from below (H is continuous there)."""
    ctx = prec.ctx
    x = -ctx.re(zeta)
    root = -1j * ctx.sqrt(x)
    # J_nu(-x - i0) = e^{-i pi nu} J_nu(x)
    jp = ctx.expj(-ctx.pi * (beta + 0.5)) * bessel_j(beta + 0.5, x, prec)
    jm = ctx.expj(-ctx.pi * (beta - 0.5)) * bessel_j(beta - 0.5, x, prec)
    return root * (1j * jp + jm)


def predict_local(data: SzegoData, k: int, n: int, z) -> Prediction:
    """sqrt(pi/2) e^{i pi beta_k/2} (D_e(z)/D_e(inf)) (a_k z)^{n/2} H(beta_k; zeta_n(z)), |z - a_k| <= delta.

    (a_k z)^{n/2} is a_k^n exp((n/2) Log(z/a_k)).  On the inward segment through
    a_k the "+" boundary values of D_e and H are paired, which keeps the
    product single-valued.
    """
    ctx = data.prec.ctx
    prec = data.prec
    z = ctx.mpc(z)
    a = data.points[k]
    if abs(z - a) > data.spec.delta:
        raise RegionError(f"z is farther than delta from a_{k}")
    if z == a:
        raise DomainError("predict_local is undefined at the singular point itself")
    beta = data.betas[k]
    zeta = zeta_n(data, k, n, z)
    side = None
    w = z / a
    if abs(ctx.im(w)) <= 8 * prec.eps * abs(w) and ctx.re(w) < 1:
        side = 1
    if abs(ctx.im(zeta)) <= 8 * prec.eps * abs(zeta) and ctx.re(zeta) < 0:
        H = _calH_lower(beta, zeta, prec)
    else:
        H = calH(beta, zeta, prec)
    logw = ctx.log(w)
    power = ctx.power(a, n) * ctx.exp(n * logw / 2)
    De_ratio = ctx.exp(log_De(data, z, side) - log_De_infinity(data))
    val = ctx.sqrt(ctx.pi / 2) * ctx.expj(ctx.pi * beta / 2) * De_ratio * power * H
    return Prediction(val, f"local_{k}", n, complex(z), "O(1/n)")


def local_continuity_gap(data: SzegoData, k: int, n: int, eps: float = 1e-6, shrink: float = 1e-3):
    """|P(a_k e^{i eps}(1-shrink)) - P(a_k e^{-i eps}(1-shrink))| relative to their size."""
    ctx = data.prec.ctx
    a = data.points[k]
    zp = a * ctx.expj(eps) * (1 - shrink)
    zm = a * ctx.expj(-eps) * (1 - shrink)
    p = predict_local(data, k, n, zp).value
    m = predict_local(data, k, n, zm).value
    return float(abs(p - m) / max(abs(p), abs(m)))


# ---------------------------------------------------------------------------
# coefficients and determinants


def predict_verblunsky(data: SzegoData, n: int):
    """alpha_n ~ -(1/n) sum_k (beta_k / vartheta_k) a_k^{-(n+1)}."""
    if n < 1:
        raise DomainError("n must be at least 1")
    ctx = data.prec.ctx
    s = ctx.mpc(0)
    for b, v, a in zip(data.betas, data.vartheta, data.points):
        s += b / v * ctx.power(a, -(n + 1))
    return -s / n


def predict_kappa(data: SzegoData, n: int):
    """kappa_{n-1}^2 ~ (1 - sum beta_k^2 / n) / G[2 pi w]."""
    ctx = data.prec.ctx
    sb = data.spec.sum_beta_sq(data.prec)
    if n <= sb:
        raise DomainError(f"n={n} must exceed sum beta_k^2 = {float(sb):.4g}")
    return (1 - sb / n) / (2 * ctx.pi * data.G)


def toeplitz_ratio(state: OpucState, data: SzegoData, n: int):
    """r_n = D_n G[2 pi w]^{-n} n^{-sum beta^2}."""
    ctx = data.prec.ctx
    sb = data.spec.sum_beta_sq(data.prec)
    logr = log_toeplitz_det(state, n) - n * ctx.log(2 * ctx.pi * data.G) - sb * ctx.log(n)
    return ctx.exp(logr)


def predict_toeplitz(state: OpucState, data: SzegoData, n: int, n_ref: int):
    """D_n ~ varkappa G[2 pi w]^n n^{sum beta^2}, varkappa estimated at n_ref.

    Returns (prediction, varkappa, r_n).
    """
    ctx = data.prec.ctx
    sb = data.spec.sum_beta_sq(data.prec)
    kappa_const = toeplitz_ratio(state, data, n_ref)
    pred = kappa_const * ctx.power(2 * ctx.pi * data.G, n) * ctx.power(n, sb)
    return pred, kappa_const, toeplitz_ratio(state, data, n)


# ---------------------------------------------------------------------------
# zeros


def spurious_numerator(data: SzegoData, n: int) -> ComplexPoly:
    """Numerator of sum_k c_k/(a_k - z): sum_k c_k prod_{j != k} (a_j - z), ascending coefficients."""
    ctx = data.prec.ctx
    m = data.m
    total = [ctx.mpc(0)] * m
    for k in range(m):
        c = data.betas[k] * data.vartheta[k] * ctx.power(data.points[k], n + 1)
        poly = [c]
        for j in range(m):
            if j == k:
                continue
            aj = data.points[j]
            nxt = [ctx.mpc(0)] * (len(poly) + 1)
            for i, p in enumerate(poly):
                nxt[i] += aj * p
                nxt[i + 1] -= p
            poly = nxt
        for i, p in enumerate(poly):
            total[i] += p
    return total


def predict_spurious_zeros(data: SzegoData, n: int) -> list:
    """Zeros of z -> sum_k beta_k vartheta_k a_k^{n+1}/(a_k - z) (at most m - 1 of them)."""
    if data.m < 2:
        return []
    coeffs = spurious_numerator(data, n)
    scale = max(abs(c) for c in coeffs)
    while coeffs and abs(coeffs[-1]) <= 1e3 * data.prec.eps * scale:
        coeffs = coeffs[:-1]
    if not coeffs or scale == 0:
        raise DegenerateError("spurious-zero numerator vanishes identically")
    if len(coeffs) == 1:
        return []
    return list(poly_roots(ComplexPoly(coeffs), data.prec))


def predict_closest_zeros(data: SzegoData, k: int, n: int):
    """(a_k e^{2 i h/n}, a_k e^{-2 i conj(h)/n}) with h = h(beta_k)."""
    ctx = data.prec.ctx
    beta = data.betas[k]
    if beta == 0:
        raise DomainError("no distinguished zeros near a regular point (beta = 0)")
    h = ctx.mpc(find_h(float(beta), data.prec))
    a = data.points[k]
    zp = a * ctx.exp(2j * h / n)
    zm = a * ctx.exp(-2j * ctx.conj(h) / n)
    return zp, zm


# ---------------------------------------------------------------------------
# exact comparison and export


@dataclass
class ComparisonRow:
    n: int
    z: complex
    region: str
    pred: complex
    exact: complex

    @property
    def abs_err(self) -> float:
        return abs(self.exact - self.pred)

    @property
    def rel_err(self) -> float:
        return self.abs_err / abs(self.exact) if self.exact != 0 else float("inf")


def compare(state: OpucState, data: SzegoData, n: int, z, region: str | None = None, k: int | None = None):
    """Evaluate predictor and exact Phi_n(z) side by side."""
    if region is None:
        p = predict(data, n, z)
    elif region == "interior":
        p = predict_interior(data, n, z)
    elif region == "exterior":
        p = predict_exterior(data, n, z)
    elif region == "annulus":
        p = predict_annulus(data, n, z)
    elif region == "local":
        p = predict_local(data, k, n, z)
    else:
        raise DomainError(f"unknown region {region!r}")
    exact = eval_phi(state, n, z)
    return ComparisonRow(n, complex(z), p.region, complex(p.value), complex(exact))


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "re_z", "im_z", "region", "re_pred", "im_pred", "re_exact", "im_exact", "abs_err", "rel_err"])
    for r in rows:
        w.writerow([r.n, repr(r.z.real), repr(r.z.imag), r.region, repr(r.pred.real), repr(r.pred.imag),
                    repr(r.exact.real), repr(r.exact.imag), repr(r.abs_err), repr(r.rel_err)])
    return buf.getvalue()

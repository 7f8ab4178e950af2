"""Exact orthogonal-polynomial layer: Verblunsky coefficients, leading
coefficients, monic polynomials and Toeplitz determinants from moments."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PrecisionError
from .numerics import DOUBLE, Precision, singular_quad
from .weight import MomentTable, WeightSpec

ALPHA_LIMIT = 1 - 1e-10


@dataclass
class OpucState:
    n_max: int
    alpha: list          # alpha_0..alpha_{n_max-1}
    E: list              # E_n = ||Phi_n||^2 = kappa_n^{-2}, n = 0..n_max
    phi: list            # phi[n] = ascending coefficients of monic Phi_n
    prec: Precision = DOUBLE

    @property
    def kappa(self) -> list:
        ctx = self.prec.ctx
        return [1 / ctx.sqrt(e) for e in self.E]

    def kappa_sq(self, n: int):
        return 1 / self.E[n]

    def coeffs(self, n: int) -> list:
        self._check(n)
        return self.phi[n]

    def _check(self, n):
        if not 0 <= n <= self.n_max:
            raise DomainError(f"degree {n} outside 0..{self.n_max}")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "re_alpha", "im_alpha", "kappa"])
        ctx = self.prec.ctx
        kap = self.kappa
        for n in range(self.n_max + 1):
            a = self.alpha[n] if n < self.n_max else None
            w.writerow([n,
                        "" if a is None else _fmt(ctx.re(a), self.prec),
                        "" if a is None else _fmt(ctx.im(a), self.prec),
                        _fmt(kap[n], self.prec)])
        return buf.getvalue()

    def to_json(self) -> str:
        ctx = self.prec.ctx
        return json.dumps({
            "n_max": self.n_max,
            "bits": self.prec.bits,
            "alpha": [[_fmt(ctx.re(a), self.prec), _fmt(ctx.im(a), self.prec)] for a in self.alpha],
            "kappa": [_fmt(k, self.prec) for k in self.kappa],
        })

    def coeffs_csv(self, n: int) -> str:
        ctx = self.prec.ctx
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["j", "re", "im"])
        for j, c in enumerate(self.coeffs(n)):
            w.writerow([j, _fmt(ctx.re(c), self.prec), _fmt(ctx.im(c), self.prec)])
        return buf.getvalue()


def _fmt(x, prec: Precision) -> str:
    if prec.is_double:
        return repr(float(x))
    return prec.ctx.nstr(x, int(prec.bits * 0.30103) + 2)


def levinson(moments: MomentTable, n_max: int) -> OpucState:
    """Szegő recursion driven by the Toeplitz moments.

    Phi_{n+1} = z Phi_n - conj(alpha_n) Phi_n^*, with conj(alpha_n) = <z Phi_n, 1>/E_n.
    """
    if n_max > moments.J:
        raise DomainError(f"n_max={n_max} exceeds moment range J={moments.J}")
    prec = moments.prec
    ctx = prec.ctx
    d = moments.d
    J = moments.J
    E = ctx.re(d[J])
    if not E > 0:
        raise PrecisionError("d_0 is not positive")
    phi = [ctx.mpc(1)]
    polys = [[ctx.mpc(1)]]
    alphas = []
    Es = [E]
    for n in range(n_max):
        # sum_m phi_m d_{-(m+1)}
        s = ctx.fdot(phi, [d[J - m - 1] for m in range(n + 1)])
        abar = s / E
        a = ctx.conj(abar)
        if not abs(a) < ALPHA_LIMIT:
            raise PrecisionError(f"|alpha_{n}| = {float(abs(a)):.3e} reached 1; raise precision")
        star = [ctx.conj(x) for x in reversed(phi)]
        new = [ctx.mpc(0)] + phi
        for i in range(n + 1):
            new[i] -= abar * star[i]
        new[-1] = ctx.mpc(1)
        phi = new
        E = E * (1 - abs(a) ** 2)
        if not E > 0:
            raise PrecisionError(f"E_{n + 1} lost positivity")
        alphas.append(a)
        Es.append(E)
        polys.append(phi)
    return OpucState(n_max=n_max, alpha=alphas, E=Es, phi=polys, prec=prec)


def eval_phi(state: OpucState, n: int, z):
    """Monic Phi_n(z) by Horner."""
    ctx = state.prec.ctx
    z = ctx.mpc(z)
    acc = ctx.mpc(0)
    for c in reversed(state.coeffs(n)):
        acc = acc * z + c
    return acc


def eval_phi_star(state: OpucState, n: int, z):
    """Phi_n^*(z) = z^n conj(Phi_n(1/conj z)): reversed conjugated coefficients."""
    ctx = state.prec.ctx
    z = ctx.mpc(z)
    acc = ctx.mpc(0)
    for c in state.coeffs(n):
        acc = acc * z + ctx.conj(c)
    return acc


def eval_phi_array(state: OpucState, n: int, z: np.ndarray) -> np.ndarray:
    c = np.array([complex(x) for x in state.coeffs(n)])
    return np.polyval(c[::-1], np.asarray(z, dtype=complex))


def recurrence_residual(state: OpucState, n: int):
    """max |coeffs of Phi_{n+1} - (z Phi_n - conj(alpha_n) Phi_n^*)| / max |coeffs of Phi_{n+1}|."""
    ctx = state.prec.ctx
    p = state.coeffs(n)
    q = state.coeffs(n + 1)
    abar = ctx.conj(state.alpha[n])
    star = [ctx.conj(x) for x in reversed(p)]
    rhs = [ctx.mpc(0)] + list(p)
    for i in range(n + 1):
        rhs[i] -= abar * star[i]
    num = max(abs(a - b) for a, b in zip(q, rhs))
    return num / max(abs(x) for x in q)


def orthonormality_residual(state: OpucState, spec: WeightSpec, n: int, m: int):
    """|int phi_n conj(phi_m) W dtheta - delta_{nm}| with phi_n = kappa_n Phi_n."""
    state._check(n)
    state._check(m)
    prec = state.prec
    ctx = prec.ctx
    kn = 1 / ctx.sqrt(state.E[n])
    km = 1 / ctx.sqrt(state.E[m])
    angles = [s.angle(prec) for s in spec.singularities]
    exps = [2 * s.beta_at(prec) for s in spec.singularities]
    bw = n + m + len(spec.analytic.coeffs)
    if prec.is_double:
        cn = np.array([complex(x) for x in state.coeffs(n)])[::-1]
        cm = np.array([complex(x) for x in state.coeffs(m)])[::-1]

        def g(th):
            z = np.exp(1j * th)
            return np.polyval(cn, z) * np.conj(np.polyval(cm, z)) * spec.analytic.eval_array(th)

        val = complex(kn * km) * singular_quad(g, [float(a) for a in angles], [float(e) for e in exps],
                                               prec=prec, bandwidth=bw)
    else:
        def g(th):
            z = ctx.expj(th)
            return eval_phi(state, n, z) * ctx.conj(eval_phi(state, m, z)) * spec.analytic.eval(th, prec)

        val = kn * km * singular_quad(g, angles, exps, prec=prec, bandwidth=bw)
    return float(abs(val - (1 if n == m else 0)))


def log_toeplitz_det(state: OpucState, n: int):
    """log D_n = sum_{j=0}^n log E_j for the (n+1)x(n+1) Toeplitz matrix."""
    state._check(n)
    ctx = state.prec.ctx
    return ctx.fsum(ctx.log(e) for e in state.E[: n + 1])


def toeplitz_det(state: OpucState, n: int):
    """D_n = d_0 prod_{j=1}^n kappa_j^{-2}."""
    return state.prec.ctx.exp(log_toeplitz_det(state, n))


def toeplitz_det_direct(moments: MomentTable, n: int):
    """Direct determinant of (d_{k-i}); small-n oracle."""
    ctx = moments.prec.ctx
    return ctx.re(ctx.det(moments.toeplitz(n)))

"""Zeros of Phi_n: computation, level curves Gamma_n, clock spacing,
the limit set inside the disk and per-zero classification."""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .asym import predict_closest_zeros, predict_spurious_zeros
from .errors import BracketError, DegenerateError, DomainError, InsufficientDataError
from .numerics import DOUBLE, ComplexPoly, Precision, bracket_root, poly_roots
from .opuc import OpucState
from .specfun import find_h
from .szego import SzegoData, build_szego, eval_S


@dataclass
class ClockStats:
    n: int
    bulk_count: int
    excluded: int
    mean_gap: float
    max_gap_dev: float
    alpha: float            # slice offset, midway between two consecutive bulk arguments
    moduli_fit: float       # c in |z| ~ 1 - log n / n + c/n
    max_modulus_dev: float  # max | |z| - (1 - log n/n) | over bulk zeros


@dataclass
class ZeroReport:
    n: int
    zeros: np.ndarray
    classes: list = field(default_factory=list)
    clock: ClockStats | None = None
    discrepancies: list = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "re_z", "im_z", "class", "abs_z", "arg_z"])
        classes = self.classes or [""] * len(self.zeros)
        for z, c in zip(self.zeros, classes):
            w.writerow([self.n, repr(z.real), repr(z.imag), c, repr(abs(z)), repr(math.atan2(z.imag, z.real))])
        return buf.getvalue()


def compute_zeros(state: OpucState, n: int, prec: Precision | None = None) -> np.ndarray:
    """All n zeros of Phi_n; ``prec`` defaults to the precision of the state."""
    prec = prec or state.prec
    if n == 0:
        return np.zeros(0, dtype=complex)
    coeffs = state.coeffs(n)
    if prec.is_double:
        coeffs = [complex(c) for c in coeffs]
    roots = poly_roots(ComplexPoly(coeffs), prec)
    return np.array([complex(r) for r in roots])


# ---------------------------------------------------------------------------
# level curve Gamma_n


def _double_twin(data: SzegoData) -> SzegoData:
    """Same weight at 53 bits; level-curve geometry needs no more."""
    if data.prec.is_double:
        return data
    twin = data.__dict__.get("_twin")
    if twin is None:
        twin = build_szego(data.spec, DOUBLE)
        data.__dict__["_twin"] = twin
    return twin


def _level_fn(data: SzegoData, n: int, phi: float):
    data = _double_twin(data)
    ctx = data.prec.ctx

    def f(r):
        z = ctx.mpf(r) * ctx.expj(phi)
        S = eval_S(data, z, side=1)
        R = 0
        for b, v, a in zip(data.betas, data.vartheta, data.points):
            R += b * v * ctx.power(a, n + 1) / (z - a)
        if R == 0:
            return math.inf
        return float(n * ctx.log(r) + ctx.log(abs(S)) + math.log(n) - ctx.log(abs(R)))

    return f


def gamma_n_radius(data: SzegoData, n: int, phi: float, scan: int = 400) -> float:
    """Smallest r in (rho + eps, 1) with r^n |S(r e^{i phi})| = (1/n)|sum_k beta_k vartheta_k a_k^{n+1}/(r e^{i phi} - a_k)|."""
    if data.m < 1:
        raise DomainError("level curve needs at least one singular point")
    for p in data.points:
        d = abs(math.remainder(phi - math.atan2(complex(p).imag, complex(p).real), 2 * math.pi))
        if d < 1.0 / n**2:
            raise DomainError("direction coincides with a singular point")
    f = _level_fn(data, n, phi)
    lo = data.spec.rho + 1e-3
    hi = 1 - 1e-12
    rs = np.linspace(lo, hi, scan)
    prev_r, prev_v = rs[0], f(rs[0])
    for r in rs[1:]:
        v = f(r)
        if prev_v == 0:
            return float(prev_r)
        if prev_v * v < 0:
            return bracket_root(f, float(prev_r), float(r), tol=1e-13)
        prev_r, prev_v = r, v
    raise BracketError(f"no crossing of the level curve along arg z = {phi}")


def level_curve(data: SzegoData, n: int, num: int = 720):
    """Points of Gamma_n on an angular grid, skipping directions without a crossing."""
    pts = []
    for phi in np.linspace(0, 2 * math.pi, num, endpoint=False):
        try:
            r = gamma_n_radius(data, n, float(phi))
        except (BracketError, DomainError):
            continue
        pts.append(r * complex(math.cos(phi), math.sin(phi)))
    return np.array(pts)


# ---------------------------------------------------------------------------
# classification


def _eps(data: SzegoData, n: int) -> float:
    return min(data.spec.delta / 2, 10.0 / n)


def bulk_mask(zeros: np.ndarray, data: SzegoData, n: int, eps: float | None = None) -> np.ndarray:
    """Zeros within eps of Gamma_n (radially), outside every B_k and away from the zeros of R_n."""
    eps = _eps(data, n) if eps is None else eps
    pts = [complex(p) for p in data.points]
    try:
        rn = [complex(t) for t in predict_spurious_zeros(data, n)]
    except DegenerateError:
        rn = []
    mask = np.zeros(len(zeros), dtype=bool)
    for i, z in enumerate(zeros):
        if any(abs(z - p) < data.spec.delta for p in pts):
            continue
        if any(abs(z - t) < eps for t in rn):
            continue
        if abs(z) <= data.spec.rho + eps:
            continue
        mask[i] = _near_level_curve(data, n, z, eps)
    return mask


def _near_level_curve(data, n, z, eps) -> bool:
    """Is there a point of Gamma_n on the ray through z within radial distance eps?"""
    f = _level_fn(data, n, math.atan2(z.imag, z.real))
    r = abs(z)
    lo, hi = max(r - eps, data.spec.rho + 1e-6), min(r + eps, 1 - 1e-12)
    ts = np.linspace(lo, hi, 9)
    vals = [f(t) for t in ts]
    return any(a == 0 or a * b < 0 for a, b in zip(vals, vals[1:]))


def clock_stats(report: ZeroReport, data: SzegoData, eps: float | None = None) -> ClockStats:
    """Spacing of consecutive bulk-zero arguments against 2 pi / n."""
    n = report.n
    zeros = report.zeros
    if data.m == 0 or np.allclose(zeros, 0):
        raise InsufficientDataError("all zeros at the origin; no clock structure")
    mask = bulk_mask(zeros, data, n, eps)
    if mask.sum() < 10:
        raise InsufficientDataError(f"only {int(mask.sum())} bulk zeros")
    args = np.angle(zeros)
    order = np.argsort(args)
    a_sorted = args[order]
    m_sorted = mask[order]
    gaps = []
    N = len(order)
    for i in range(N):
        j = (i + 1) % N
        if m_sorted[i] and m_sorted[j]:
            g = (a_sorted[j] - a_sorted[i]) % (2 * math.pi)
            gaps.append(g)
    gaps = np.array(gaps)
    bulk = zeros[mask]
    target = 1 - math.log(n) / n
    mods = np.abs(bulk)
    i0 = int(np.argmax(m_sorted))
    alpha = float(a_sorted[i0] + (gaps[0] / 2 if len(gaps) else 0.0)) * n
    return ClockStats(
        n=n,
        bulk_count=int(mask.sum()),
        excluded=int(len(zeros) - mask.sum()),
        mean_gap=float(gaps.mean()) if len(gaps) else float("nan"),
        max_gap_dev=float(np.max(np.abs(gaps - 2 * math.pi / n))) if len(gaps) else float("nan"),
        alpha=alpha,
        moduli_fit=float(np.mean(n * (mods - target))),
        max_modulus_dev=float(np.max(np.abs(mods - target))),
    )


def classify_zeros(zeros: np.ndarray, data: SzegoData, n: int, interior: float = 0.9):
    """Tag each zero as near_singularity(k), spurious or bulk; returns (classes, discrepancies)."""
    if data.m == 0:
        return ["degenerate"] * len(zeros), []
    classes = ["bulk"] * len(zeros)
    discrepancies = []
    for k, (b, a) in enumerate(zip(data.betas, data.points)):
        if b == 0:
            continue
        h = complex(find_h(float(b)))
        rad = 4 * abs(h) / n
        for i, z in enumerate(zeros):
            if abs(z - complex(a)) <= rad:
                classes[i] = f"near_singularity({k})"
    preds = [complex(t) for t in predict_spurious_zeros(data, n)]
    matched = set()
    for i, z in enumerate(zeros):
        if classes[i] != "bulk" or abs(z) > interior:
            continue
        classes[i] = "spurious"
        dists = [abs(z - t) for t in preds]
        if dists and min(dists) <= 3.0 / n:
            matched.add(int(np.argmin(dists)))
        else:
            discrepancies.append(("unmatched_zero", complex(z)))
    for j, t in enumerate(preds):
        if j not in matched and abs(t) <= interior:
            discrepancies.append(("unmatched_prediction", t))
    return classes, discrepancies


def zero_report(state: OpucState, data: SzegoData, n: int, prec: Precision | None = None,
                with_clock: bool = True) -> ZeroReport:
    zeros = compute_zeros(state, n, prec)
    classes, disc = classify_zeros(zeros, data, n)
    rep = ZeroReport(n=n, zeros=zeros, classes=classes, discrepancies=disc)
    if with_clock:
        try:
            rep.clock = clock_stats(rep, data)
        except InsufficientDataError:
            rep.clock = None
    return rep


def nearest_zero(zeros: np.ndarray, point: complex) -> complex:
    return complex(zeros[int(np.argmin(np.abs(zeros - point)))])


def closest_zero_error(zeros: np.ndarray, data: SzegoData, k: int, n: int) -> float:
    """n |computed - predicted| for the zero closest to a_k."""
    zp, zm = predict_closest_zeros(data, k, n)
    z = nearest_zero(zeros, complex(data.points[k]))
    return n * min(abs(z - complex(zp)), abs(z - complex(zm)))


# ---------------------------------------------------------------------------
# limit set


@dataclass
class LimitSet:
    kind: str                 # empty | points | circle | line | samples
    v: int
    points: list = field(default_factory=list)
    center: complex | None = None
    radius: float | None = None
    line_point: complex | None = None
    line_dir: complex | None = None

    def distance(self, z: complex) -> float:
        """Distance from z to the set (points, circle or line; sampled sets use nearest sample)."""
        if self.kind == "circle":
            return abs(abs(z - self.center) - self.radius)
        if self.kind == "line":
            d = self.line_dir / abs(self.line_dir)
            w = z - self.line_point
            return abs((w * d.conjugate()).imag)
        if not self.points:
            return math.inf
        return min(abs(z - p) for p in self.points)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "v", "re", "im"])
        for p in self.sample():
            w.writerow([self.kind, self.v, repr(p.real), repr(p.imag)])
        return buf.getvalue()

    def sample(self, num: int = 720):
        if self.kind == "circle":
            t = np.linspace(0, 2 * math.pi, num, endpoint=False)
            pts = self.center + self.radius * np.exp(1j * t)
            return [complex(p) for p in pts if abs(p) < 1]
        if self.kind == "line":
            d = self.line_dir / abs(self.line_dir)
            s = np.linspace(-2, 2, num)
            return [complex(self.line_point + x * d) for x in s if abs(self.line_point + x * d) < 1]
        return list(self.points)


def rational_structure(data: SzegoData):
    """theta_k = turns_k - turns_1 as (rational part, vector over the declared irrational turns).

    Returns (v, r) with r[k] = [r_k1, r_k2, ..., r_kv] (Fractions), r_k1 the rational part.
    """
    sing = data.spec.singularities
    floats = []
    for s in sing:
        if not s.is_rational and s.turns not in floats:
            floats.append(s.turns)

    def vec(s):
        rat = s.turns if s.is_rational else Fraction(0)
        coord = [Fraction(0)] * len(floats)
        if not s.is_rational:
            coord[floats.index(s.turns)] = Fraction(1)
        return rat, coord

    r1, c1 = vec(sing[0])
    thetas = []
    for s in sing:
        r, c = vec(s)
        thetas.append((r - r1, [x - y for x, y in zip(c, c1)]))
    # greedy basis among theta_2..theta_m over the irrational coordinates
    basis_idx = []
    rows = []
    for k, (_, c) in enumerate(thetas):
        if k == 0:
            continue
        if _independent(rows, c):
            rows.append(c)
            basis_idx.append(k)
    v = 1 + len(basis_idx)
    out = []
    for k, (r, c) in enumerate(thetas):
        coef = _solve(rows, c) if rows else []
        # rational part left after subtracting the basis combination
        rat = r - sum((x * thetas[b][0] for x, b in zip(coef, basis_idx)), Fraction(0))
        out.append([rat] + list(coef))
    return v, out


def _independent(rows, c):
    return _rank(rows + [c]) > _rank(rows)


def _rank(rows):
    if not rows:
        return 0
    M = [list(r) for r in rows]
    rank = 0
    ncol = len(M[0])
    for col in range(ncol):
        piv = next((i for i in range(rank, len(M)) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for i in range(len(M)):
            if i != rank and M[i][col] != 0:
                f = M[i][col] / M[rank][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def _solve(rows, c):
    """Coefficients x with sum_i x_i rows[i] = c (exact, rows independent)."""
    k = len(rows)
    ncol = len(c)
    # normal equations over Fractions
    A = [[sum(rows[i][t] * rows[j][t] for t in range(ncol)) for j in range(k)] for i in range(k)]
    b = [sum(rows[i][t] * c[t] for t in range(ncol)) for i in range(k)]
    for col in range(k):
        piv = next(i for i in range(col, k) if A[i][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        b[col], b[piv] = b[piv], b[col]
        for i in range(k):
            if i != col and A[i][col] != 0:
                f = A[i][col] / A[col][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[col])]
                b[i] -= f * b[col]
    return [b[i] / A[i][i] for i in range(k)]


def _roots_of_weighted_sum(data: SzegoData, phases):
    """Zeros in the disk of sum_k beta_k vartheta_k e^{2 pi i phases_k} / (a_k - t)."""
    ctx = data.prec.ctx
    m = data.m
    total = [ctx.mpc(0)] * m
    for k in range(m):
        c = data.betas[k] * data.vartheta[k] * ctx.expj(2 * ctx.pi * phases[k])
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
        total = [x + y for x, y in zip(total, poly)]
    scale = max(abs(x) for x in total)
    while total and abs(total[-1]) <= 1e3 * data.prec.eps * scale:
        total = total[:-1]
    if len(total) <= 1:
        return []
    return [complex(r) for r in poly_roots(ComplexPoly(total), data.prec) if abs(complex(r)) < 1]


def limit_set(data: SzegoData, grid: int = 64) -> LimitSet:
    """Accumulation set of the zeros inside the disk."""
    m = data.m
    if m <= 1:
        return LimitSet(kind="empty", v=1)
    v, r = rational_structure(data)
    q = [x[0].denominator for x in r]
    Q = 1
    for d in q:
        Q = Q * d // math.gcd(Q, d)
    if v == 1:
        pts = []
        # residues of n + 1 modulo the common denominator realise the admissible s_k
        for N in range(Q):
            phases = [float((N * x[0]) % 1) for x in r]
            for t in _roots_of_weighted_sum(data, phases):
                if all(abs(t - p) > 1e-9 for p in pts):
                    pts.append(t)
        return LimitSet(kind="points" if pts else "empty", v=1, points=pts)
    if v == 2 and m == 2:
        b1, b2 = abs(complex(data.betas[0])), abs(complex(data.betas[1]))
        a1, a2 = complex(data.points[0]), complex(data.points[1])
        if abs(b1 - b2) <= 1e-14 * max(b1, b2):
            return LimitSet(kind="line", v=2, line_point=(a1 + a2) / 2, line_dir=1j * (a2 - a1))
        k2 = (b1 / b2) ** 2
        center = (a1 - k2 * a2) / (1 - k2)
        radius = math.sqrt(k2) * abs(a1 - a2) / abs(1 - k2)
        return LimitSet(kind="circle", v=2, center=center, radius=radius)
    pts = []
    X = np.linspace(0, 1, grid, endpoint=False)
    for N in range(Q):
        for xs in itertools.product(X, repeat=v - 1):
            phases = [float((N * x[0]) % 1) + sum(float(c) * t for c, t in zip(x[1:], xs)) for x in r]
            pts.extend(_roots_of_weighted_sum(data, phases))
    return LimitSet(kind="samples", v=v, points=pts)

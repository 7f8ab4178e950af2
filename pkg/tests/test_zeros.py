import math
from fractions import Fraction

import numpy as np
import pytest

from fhopuc import asym, szego, zeros
from fhopuc.errors import DomainError, InsufficientDataError
from fhopuc.numerics import DOUBLE, QUAD
from fhopuc.weight import Singularity, WeightSpec


def test_zeros_match_explicit_polynomial(case):
    # Phi_n for |z-1|^2 has the zeros of sum_k (k+1) z^k
    c = case("z_minus_one_sq")
    n = 40
    zs = zeros.compute_zeros(c.state, n, DOUBLE)
    ref = np.roots(np.arange(n + 1, 0, -1, dtype=float))
    assert len(zs) == n
    for z in ref:
        assert np.min(np.abs(zs - z)) < 1e-10


def test_zeros_double_vs_quad(case):
    c = case("fig3")
    a = np.sort_complex(zeros.compute_zeros(c.state, 60, DOUBLE))
    b = np.sort_complex(np.array([complex(z) for z in zeros.compute_zeros(c.state, 60, QUAD)]))
    assert np.max(np.abs(a - b)) < 1e-12


def test_zeros_inside_disk(case):
    for name in ("z_minus_one_sq", "fig3", "fig1"):
        zs = zeros.compute_zeros(case(name).state, 90, DOUBLE)
        assert np.all(np.abs(zs) < 1)


def test_clock_stats_z_minus_one_sq(case):
    c = case("z_minus_one_sq")
    r1 = zeros.zero_report(c.state, c.data, 100, DOUBLE)
    r2 = zeros.zero_report(c.state, c.data, 200, DOUBLE)
    assert r1.clock.bulk_count > 80
    assert abs(r1.clock.mean_gap - 2 * math.pi / 100) < 1e-3
    assert r2.clock.max_gap_dev / r1.clock.max_gap_dev <= 0.6
    lines = r1.to_csv().splitlines()
    assert lines[0] == "n,re_z,im_z,class,abs_z,arg_z" and len(lines) == 101


def test_lebesgue_degenerate(case):
    c = case("lebesgue")
    zs = zeros.compute_zeros(c.state, 10, DOUBLE)
    assert np.all(zs == 0)
    rep = zeros.ZeroReport(10, zs)
    with pytest.raises(InsufficientDataError):
        zeros.clock_stats(rep, c.data)


def test_classification_fig1(case):
    c = case("fig1")
    for n in (60, 90):
        rep = zeros.zero_report(c.state, c.data, n, DOUBLE, with_clock=False)
        assert rep.classes.count("spurious") <= 2
        assert sum(cl.startswith("near") for cl in rep.classes) >= 3


def test_level_curve(case):
    d = case("fig3").data
    r = zeros.gamma_n_radius(d, 100, 2.5)
    assert 1 - 2 * math.log(100) / 100 < r < 1
    pts = zeros.level_curve(d, 100, num=90)
    assert len(pts) > 60 and all(abs(p) < 1 for p in pts)
    with pytest.raises(DomainError):
        zeros.gamma_n_radius(case("lebesgue").data, 10, 0.0)


def test_limit_set_circle_is_apollonius(case):
    d = case("fig3").data
    ls = zeros.limit_set(d)
    assert ls.kind == "circle" and ls.v == 2
    b1, b2 = (abs(float(b)) for b in d.betas)
    a1, a2 = (complex(a) for a in d.points)
    # sum_k beta_k vartheta_k u_k/(a_k - t) = 0 with |u_k| = 1 forces |t - a_1|/|t - a_2| = |beta_1|/|beta_2|
    for z in ls.sample(16):
        assert abs(b2 * abs(z - a1) - b1 * abs(z - a2)) < 1e-12
    # spurious zeros for each n lie on it
    for n in (60, 61, 97):
        for t in asym.predict_spurious_zeros(d, n):
            assert ls.distance(complex(t)) < 1e-10


def test_limit_set_line_for_equal_betas():
    spec = WeightSpec(singularities=(Singularity(0, 0.3), Singularity(0.41421356, 0.3)))
    d = szego.build_szego(spec)
    ls = zeros.limit_set(d)
    assert ls.kind == "line"
    mid = (complex(d.points[0]) + complex(d.points[1])) / 2
    assert ls.distance(mid) < 1e-14


def test_limit_set_rational_points():
    spec = WeightSpec(singularities=(Singularity(Fraction(0), 0.5), Singularity(Fraction(1, 2), 0.25)))
    d = szego.build_szego(spec)
    v, r = zeros.rational_structure(d)
    assert v == 1
    ls = zeros.limit_set(d)
    assert ls.kind == "points"
    # spurious zeros at every n land on one of the finitely many points
    for n in (10, 11, 12, 13):
        for t in asym.predict_spurious_zeros(d, n):
            if abs(complex(t)) < 1:
                assert ls.distance(complex(t)) < 1e-9


def test_rational_structure_fig1(case):
    v, _ = zeros.rational_structure(case("fig1").data)
    assert v == 3  # float turns are declared independent
    ls = zeros.limit_set(case("fig1").data, grid=8)
    assert ls.kind == "samples" and len(ls.points) > 0


def test_closest_zero(case):
    c = case("fig3")
    zs = zeros.compute_zeros(c.state, 150, DOUBLE)
    assert zeros.closest_zero_error(zs, c.data, 1, 150) <= 0.5

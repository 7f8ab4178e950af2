import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from fhopuc.errors import BracketError, DomainError
from fhopuc.numerics import (DOUBLE, QUAD, ComplexPoly, Precision, bracket_root, periodic_fourier,
                             poly_roots, singular_quad, winding_count)


def test_precision_contexts():
    assert DOUBLE.is_double and not QUAD.is_double
    assert QUAD.ctx.prec == 113
    assert QUAD.eps < 1e-33
    with pytest.raises(Exception):
        Precision(10)


def test_periodic_fourier_trig_poly():
    f = lambda t: 3 + 2 * np.cos(t) - np.sin(2 * t)
    c = periodic_fourier(f, 3)
    J = 3
    assert abs(c[J] - 3) < 1e-14
    assert abs(c[J + 1] - 1) < 1e-14 and abs(c[J - 1] - 1) < 1e-14
    assert abs(c[J + 2] - 0.5j) < 1e-14
    with pytest.raises(DomainError):
        periodic_fourier(f, 3, N=6)


@pytest.mark.parametrize("beta", [-0.3, 0.25, 1.0 / 6, 0.7])
def test_singular_quad_closed_form(beta):
    # int |e^{it} - 1|^{2 beta} dt = 2 pi Gamma(2b+1)/Gamma(b+1)^2
    exact = 2 * math.pi * math.gamma(2 * beta + 1) / math.gamma(beta + 1) ** 2
    val = singular_quad(lambda t: np.ones_like(t), [0.0], [2 * beta])
    assert abs(val - exact) < 1e-13 * exact
    ctx = QUAD.ctx
    exact_mp = 2 * ctx.pi * ctx.gamma(2 * ctx.mpf(beta) + 1) / ctx.gamma(ctx.mpf(beta) + 1) ** 2
    val_mp = singular_quad(lambda t: ctx.mpf(1), [ctx.mpf(0)], [2 * ctx.mpf(beta)], prec=QUAD)
    assert abs(val_mp - exact_mp) < 1e-28 * exact_mp


def test_singular_quad_two_points_vs_mpmath():
    b1, b2, t2 = -0.2, 0.35, 2.0
    g = lambda t: np.cos(t) + 2
    val = singular_quad(g, [0.0, t2], [2 * b1, 2 * b2])
    f = lambda t: (mpmath.cos(t) + 2) * abs(2 * mpmath.sin(t / 2)) ** (2 * b1) * abs(2 * mpmath.sin((t - t2) / 2)) ** (2 * b2)
    with mpmath.workdps(30):
        ref = mpmath.quad(f, [0, t2, 2 * mpmath.pi])
    assert abs(val - float(ref)) < 1e-12 * abs(float(ref))


@given(st.lists(st.tuples(st.floats(-2, 2), st.floats(-2, 2)), min_size=1, max_size=12))
def test_poly_roots_reconstruct(rts):
    roots = [complex(a, b) for a, b in rts]
    c = np.poly(roots)[::-1]
    found = poly_roots(ComplexPoly(list(c)))
    # every found root makes the polynomial small relative to its coefficient scale
    scale = np.polyval(np.abs(c[::-1]), np.abs(found) + 1)
    assert np.all(np.abs(np.polyval(c[::-1], found)) <= 1e-8 * scale)
    assert len(found) == len(roots)


def test_poly_roots_mp_matches_exact():
    p = ComplexPoly([-6, 11, -6, 1])  # (z-1)(z-2)(z-3)
    r = sorted(poly_roots(p, QUAD), key=lambda z: float(QUAD.ctx.re(z)))
    for k, z in enumerate(r, start=1):
        assert abs(z - k) < 1e-30
    zr = poly_roots(ComplexPoly([0, 0, 1, 1]))
    assert sum(abs(z) == 0 for z in zr) == 2


def test_bracket_root():
    assert abs(bracket_root(lambda x: x * x - 2, 0, 2) - math.sqrt(2)) < 1e-12
    with pytest.raises(BracketError):
        bracket_root(lambda x: x * x + 1, 0, 2)


def test_winding_count():
    f = lambda z: (z - 0.2j) * (z + 0.5) * (z - 3)
    n, fmin = winding_count(f, [-1 - 1j, 1 - 1j, 1 + 1j, -1 + 1j])
    assert n == 2 and fmin > 0

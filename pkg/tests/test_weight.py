import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special

from fhopuc import weight
from fhopuc.errors import SpecificationError
from fhopuc.numerics import QUAD
from fhopuc.weight import AnalyticFactor, Singularity, WeightSpec

betas = st.one_of(st.fractions(Fraction(-5, 12), Fraction(3)).map(lambda f: f.limit_denominator(12)),
                  st.floats(-0.49, 3))


def _spec_from(turns, bs):
    sing = []
    for t, b in zip(turns, bs):
        sing.append(Singularity(t, b))
    return WeightSpec(singularities=tuple(sing), delta=0.05)


@given(st.lists(st.sampled_from([Fraction(0), Fraction(1, 3), Fraction(2, 3), 0.125, 0.6]),
                min_size=0, max_size=3, unique=True),
       st.lists(betas, min_size=3, max_size=3))
def test_json_round_trip(turns, bs):
    spec = _spec_from(turns, bs)
    back = WeightSpec.from_json(spec.to_json())
    assert back == spec
    assert back.to_json() == spec.to_json()


def test_validation():
    with pytest.raises(SpecificationError):
        Singularity(0, -0.5)
    with pytest.raises(SpecificationError):
        WeightSpec(singularities=(Singularity(0, 1), Singularity(Fraction(0), 1)))
    with pytest.raises(SpecificationError):
        WeightSpec(singularities=(Singularity(0, 1), Singularity(0.01, 1)), delta=0.25)
    with pytest.raises(SpecificationError):
        AnalyticFactor("laurent", (1, 1))  # w = |1 + z|^2 vanishes at -1
    with pytest.raises(SpecificationError):
        weight.preset("nope")


def test_singular_coeffs_closed_form():
    # c_l = (-1)^l Gamma(2b+1)/(Gamma(b+l+1) Gamma(b-l+1))
    b = 0.3
    c = weight.singular_coeffs(b, 6)
    for l in range(7):
        ref = (-1) ** l * special.gamma(2 * b + 1) / (special.gamma(b + l + 1) * special.gamma(b - l + 1))
        assert abs(complex(c[l]) - ref) < 1e-14


def test_moments_z_minus_one_sq_exact():
    mt = weight.moments(weight.preset("z_minus_one_sq"), 4)
    assert abs(mt[0] - 4 * math.pi) < 1e-13
    assert abs(mt[1] + 2 * math.pi) < 1e-13 and abs(mt[-1] + 2 * math.pi) < 1e-13
    assert abs(mt[2]) < 1e-14


def test_moments_lebesgue():
    mt = weight.moments(weight.lebesgue(), 3, QUAD)
    assert abs(mt[0] - 2 * QUAD.ctx.pi) < 1e-32
    assert all(abs(mt[j]) == 0 for j in (1, 2, 3))


@pytest.mark.parametrize("name", ["fig3", "fig2"])
def test_moments_two_routes(name):
    spec = weight.preset(name)
    mt = weight.moments(spec, 12, QUAD)
    for j in (0, 1, 5, 12):
        q = weight.moment_by_quadrature(spec, j, QUAD)
        assert abs(mt[j] - q) <= 1e-28 * abs(mt[0])


def test_moments_double_vs_quad():
    spec = weight.preset("fig3")
    a = weight.moments(spec, 40).as_array()
    b = weight.moments(spec, 40, QUAD).as_array()
    assert np.max(np.abs(a - b)) < 1e-13


def test_three_slow_factors_fall_back():
    spec = WeightSpec(singularities=(Singularity(Fraction(0), 0.2), Singularity(Fraction(1, 3), -0.3),
                                     Singularity(Fraction(2, 3), 0.45)))
    mt = weight.moments(spec, 6)
    for j in (0, 3, 6):
        assert abs(mt[j] - weight.moment_by_quadrature(spec, j)) < 1e-12


def test_explog_factor():
    spec = WeightSpec(analytic=AnalyticFactor("explog", (0.1 - 0.2j, 0.3, 0.1 + 0.2j), jmin=-1),
                      singularities=(Singularity(Fraction(1, 4), Fraction(1, 2)),), delta=0.1)
    mt = weight.moments(spec, 8)
    for j in (0, 2, 8, -3):
        assert abs(mt[j] - weight.moment_by_quadrature(spec, j)) < 1e-12
    assert abs(float(weight.geometric_mean(spec)) - math.exp(0.3)) < 1e-13


@given(st.lists(betas, min_size=1, max_size=2))
def test_hermitian_and_positive(bs):
    spec = _spec_from([Fraction(0), Fraction(1, 2)], bs)
    mt = weight.moments(spec, 10)
    for j in range(11):
        assert abs(mt[-j] - np.conj(mt[j])) <= 1e-12 * abs(mt[0])
    assert mt.is_positive_definite(10)


@pytest.mark.parametrize("name", ["z_minus_one_sq", "fig3", "fig2"])
def test_geometric_mean_two_routes(name):
    spec = weight.preset(name)
    assert abs(float(weight.geometric_mean(spec)) - weight.geometric_mean_by_quadrature(spec)) < 1e-9


def test_laurent_geometric_mean():
    spec = WeightSpec(analytic=AnalyticFactor("laurent", (2, 1)))  # |2 + z|^2
    assert abs(float(weight.geometric_mean(spec, QUAD)) - 4) < 1e-30


def test_eval_weight():
    spec = weight.preset("fig3")
    th = np.linspace(0.1, 6, 7)
    a = weight.eval_weight_array(spec, th)
    b = [float(weight.eval_weight(spec, t)) for t in th]
    assert np.allclose(a, b, rtol=1e-13)

import cmath

import pytest

from fhopuc import asym, opuc, specfun, szego, weight
from fhopuc.errors import BranchError, DomainError, RegionError
from fhopuc.numerics import QUAD


def test_region_guards(case):
    d = case("fig3").data
    with pytest.raises(RegionError):
        asym.predict_interior(d, 50, 0.95)
    with pytest.raises(RegionError):
        asym.predict_exterior(d, 50, 1.05)
    with pytest.raises(RegionError):
        asym.predict_annulus(d, 50, 1.0 + 0.01j)     # inside B_0
    with pytest.raises(BranchError):
        asym.predict_annulus(d, 50, d.points[1] * QUAD.ctx.mpf(0.7))
    with pytest.raises(RegionError):
        asym.predict_local(d, 0, 50, 0.5)
    with pytest.raises(DomainError):
        asym.predict_local(d, 0, 50, 1)
    assert asym.predict(d, 50, 0.3j).region == "interior"
    assert asym.predict(d, 50, 2).region == "exterior"
    assert asym.predict(d, 50, 1.05 * cmath.exp(2j)).region == "annulus"


def test_z_minus_one_sq_exact_forms(case):
    # Phi_n(z) = sum_k (k+1) z^k / (n+1) is explicit
    c = case("z_minus_one_sq")
    d = c.data
    n = 120

    def exact(z):
        return ((n + 1) * z ** (n + 2) - (n + 2) * z ** (n + 1) + 1) / ((n + 1) * (1 - z) ** 2)

    assert abs(complex(opuc.eval_phi(c.state, n, 0.3j)) - exact(0.3j)) < 1e-14
    rel = abs(complex(asym.predict_interior(d, n, 0).value) - exact(0)) / abs(exact(0))
    assert rel < 3 / n
    rel = abs(complex(asym.predict_exterior(d, n, 2).value) - exact(2)) / abs(exact(2))
    assert rel < 1 / n ** 2 * 5


def test_annulus_matches_exact(case):
    c = case("fig3")
    z = 1.05 * cmath.exp(2j)
    for n in (100, 200):
        row = asym.compare(c.state, c.data, n, z, "annulus")
        assert row.rel_err < 0.05


def test_local_continuity(case):
    d = case("fig3").data
    for k in range(2):
        assert asym.local_continuity_gap(d, k, 150, eps=1e-20) < 1e-15


def test_local_on_inward_segment(case):
    c = case("fig3")
    for k, a in enumerate(c.data.points):
        a = complex(a)
        z = a * (1 - 3 / 150)
        row = asym.compare(c.state, c.data, 150, z, "local", k=k)
        assert row.rel_err < 0.1


def test_verblunsky_and_kappa_basic(case):
    d0 = case("lebesgue").data
    assert asym.predict_verblunsky(d0, 5) == 0
    d = case("z_minus_one_sq").data
    # alpha_n = -1/(n+2) against the leading -1/n
    assert abs(complex(asym.predict_verblunsky(d, 100)) + 1 / 100) < 1e-15
    with pytest.raises(DomainError):
        asym.predict_verblunsky(d, 0)
    with pytest.raises(DomainError):
        asym.predict_kappa(case("fig1").data, 10)


def test_toeplitz_constant(case):
    c = case("z_minus_one_sq")
    # D_n(|z-1|^2) = (2 pi)^{n+1} (n + 2) for the (n+1)x(n+1) matrix
    for n in (10, 100):
        ld = opuc.log_toeplitz_det(c.state, n)
        ctx = QUAD.ctx
        assert abs(ld - ((n + 1) * ctx.log(2 * ctx.pi) + ctx.log(n + 2))) < 1e-25
    pred, kc, r = asym.predict_toeplitz(c.state, c.data, 200, 100)
    assert abs(r / kc - 1) < 0.05


def test_spurious_zeros(case):
    d = case("fig3").data
    for n in (60, 100):
        zs = asym.predict_spurious_zeros(d, n)
        assert len(zs) == 1
        assert abs(asym.spurious_sum(d, n, zs[0])) < 1e-25
    assert asym.predict_spurious_zeros(case("z_minus_one_sq").data, 50) == []


def test_closest_zero_prediction(case):
    d = case("fig3").data
    zp, zm = asym.predict_closest_zeros(d, 1, 150)
    h = complex(specfun.find_h(-1 / 3))
    a = complex(d.points[1])
    assert abs(complex(zp) - a * cmath.exp(2j * h / 150)) < 1e-12
    assert abs(abs(complex(zp)) - abs(complex(zm)) ) < 1e-14  # mirror pair


def test_csv():
    d = szego.build_szego(weight.preset("z_minus_one_sq"))
    st_ = opuc.levinson(weight.moments(d.spec, 12), 12)
    rows = [asym.compare(st_, d, n, 2.0, "exterior") for n in (5, 10)]
    text = asym.rows_to_csv(rows)
    assert text.splitlines()[0].startswith("n,re_z,im_z,region")
    assert len(text.splitlines()) == 3

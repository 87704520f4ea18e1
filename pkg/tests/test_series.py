import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hadamard_domains import (
    Circle,
    InvalidArgument,
    InvalidParameter,
    NotSeparated,
    Polyline,
    QuadratureFailure,
    TruncatedSeries2,
    cauchy_hadamard_shadow,
    contour_h_star,
    evaluate,
    h_xi_coeffs,
    hadamard,
    lambda_op,
    make_polydisc,
    separates,
    shadow_distance,
    torus_hadamard,
    weighted_hadamard,
)
from hadamard_domains.series import winding_number
from oracles import h_coeff


def mono(a1, a2, cap=None, c=1):
    return TruncatedSeries2.monomial(a1, a2, cap, c)


def test_table_shape_and_indexing():
    f = TruncatedSeries2(np.ones((4, 4)), 3)
    assert f[1, 2] == 1 and f.coeffs[2, 2] == 0
    with pytest.raises(IndexError):
        f[2, 2]
    with pytest.raises(InvalidParameter):
        TruncatedSeries2.zeros(201)
    assert len(list(f.indices())) == 10


def test_hadamard_examples():
    g = TruncatedSeries2.geometric(10)
    assert hadamard(g, g) == g
    assert np.all(hadamard(mono(1, 2, 5), mono(2, 1, 5)).coeffs == 0)
    f = TruncatedSeries2.geometric(4, (2.0, 3.0))
    assert hadamard(h_xi_coeffs((1, 1), 4), f)[1, 1] == pytest.approx(6 * f[1, 1])


def test_h_xi_examples():
    h = h_xi_coeffs((1, 1), 5)
    assert h[0, 0] == 1 and h[2, 1] == 12
    z = h_xi_coeffs((0, 0), 5)
    assert z[0, 0] == 1 and np.count_nonzero(z.coeffs) == 1
    exact = h_xi_coeffs((1, 1), 12, exact=True)
    assert all(exact[a] == h_coeff(*a) for a in exact.indices())
    xi = (0.5 + 0.5j, -2)
    w = h_xi_coeffs(xi, 6)
    assert w[3, 2] == pytest.approx(float(h_coeff(3, 2)) * xi[0] ** 3 * xi[1] ** 2)


def test_weighted_examples():
    g = TruncatedSeries2(np.random.default_rng(0).normal(size=(6, 6)), 5)
    back = weighted_hadamard(h_xi_coeffs((1, 1), 5), g)
    assert np.allclose(back.coeffs, g.coeffs)
    one = mono(0, 0, 3)
    assert weighted_hadamard(one, one)[0, 0] == 1
    e = mono(1, 0, 2)
    assert weighted_hadamard(e, e)[1, 0] == pytest.approx(0.5)


def test_lambda_examples():
    assert lambda_op(mono(1, 0))[1, 0] == 2
    assert lambda_op(mono(0, 4)) == mono(0, 4)
    assert lambda_op(mono(2, 1))[2, 1] == 3


def test_lambda_commutes_with_z2_only_factor():
    rng = np.random.default_rng(4)
    f = TruncatedSeries2(rng.integers(-5, 5, (7, 7)).astype(object), 6)
    g = TruncatedSeries2.zeros(6, exact=True)
    for k in range(7):
        g[0, k] = int(rng.integers(1, 9))
    assert lambda_op(hadamard(g, f)) == hadamard(g, lambda_op(f))


def test_evaluate_examples():
    assert evaluate(mono(0, 0, 4, 3 + 1j), (5, -2)) == 3 + 1j
    assert evaluate(h_xi_coeffs((1, 1), 40), (0.1, 0.1)) == pytest.approx(1.5625, abs=1e-10)
    assert evaluate(TruncatedSeries2.geometric(60), (0.5, 0)) == pytest.approx(2.0, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_hadamard_commutative_bilinear(seed):
    rng = np.random.default_rng(seed)
    f, g, k = (TruncatedSeries2(rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6)), 5) for _ in range(3))
    a = complex(*rng.normal(size=2))
    assert np.allclose(hadamard(f, g).coeffs, hadamard(g, f).coeffs)
    lin = TruncatedSeries2(a * f.coeffs + g.coeffs, 5)
    assert np.allclose(hadamard(lin, k).coeffs, a * hadamard(f, k).coeffs + hadamard(g, k).coeffs)


def test_torus_examples():
    assert torus_hadamard(mono(1, 0), mono(1, 0), 1.0, (0.3, 0)).value == pytest.approx(0.3, abs=1e-12)
    f = TruncatedSeries2.geometric(5)
    zero = TruncatedSeries2.zeros(5)
    assert abs(torus_hadamard(f, zero, 1.0, (0.4, 0.2)).value) < 1e-15


def test_torus_against_coefficients():
    h = lambda z1, z2: (1 - z1 - z2) ** -2.0  # noqa: E731
    g = lambda z1, z2: 1 / ((1 - z1) * (1 - z2))  # noqa: E731
    ref = evaluate(hadamard(h_xi_coeffs((1, 1), 60), TruncatedSeries2.geometric(60)), (0.2, 0.2))
    # f must converge on |zeta| <= 1/rho, so 1/rho * 0.2 * 2 < 1
    assert torus_hadamard(h, g, 0.9, (0.2, 0.2)).value == pytest.approx(ref, rel=1e-8)


def test_torus_failure():
    # a branch cut across the torus breaks the spectral convergence
    cut = lambda z1, z2: np.sqrt(z1) + 0 * z2  # noqa: E731
    g = lambda z1, z2: 1 / ((1 - z1 / 2) * (1 - z2 / 2))  # noqa: E731
    with pytest.raises(QuadratureFailure):
        torus_hadamard(cut, g, 1.0, (0.9, 0.1), nodes=8)


@pytest.mark.parametrize("a", [(0, 0), (1, 0), (0, 3), (2, 2), (3, 1)])
def test_contour_monomials(a):
    z = (0.7 - 0.2j, 0.4 + 0.9j)
    expected = float(h_coeff(*a)) * z[0] ** a[0] * z[1] ** a[1]
    assert contour_h_star(mono(*a), z).value == pytest.approx(expected, rel=1e-12)


def test_contour_examples():
    assert contour_h_star(mono(0, 0), (3, -1j)).value == pytest.approx(1)
    assert contour_h_star(mono(1, 0), (0.5, 0.7)).value == pytest.approx(1.0)
    assert contour_h_star(mono(1, 1), (1, 1)).value == pytest.approx(6)


def test_contour_needs_winding():
    with pytest.raises(InvalidArgument):
        Circle(2.0, 1.0)
    with pytest.raises(InvalidArgument):
        Polyline((1 + 1j, 2 + 1j, 2 + 2j))
    with pytest.raises(InvalidArgument):
        contour_h_star(lambda a, b: a, (0.1, 0.1))
    assert winding_number([1, 1j, -1, -1j]) == 1


def test_contour_independent_of_loop(p11):
    # f holomorphic on polydisc(1,1); Lambda f = f / (1 - z1)
    f = lambda z1, z2: 1 / ((1 - z1) * (1 - z2))  # noqa: E731
    lam = lambda z1, z2: f(z1, z2) / (1 - z1)  # noqa: E731
    z = (0.3, 0.3)
    loop = separates(p11, z).loop
    a = contour_h_star(f, z, Polyline(tuple(loop)), lam=lam).value
    b = contour_h_star(f, z, Circle(0, 1.0), lam=lam).value
    c = contour_h_star(f, z, Circle(0.1 + 0.1j, 1.2), lam=lam).value
    assert a == pytest.approx(b, rel=1e-8) and b == pytest.approx(c, rel=1e-8)
    assert b == pytest.approx((1 - 0.6) ** -2, rel=1e-10)


def test_exact_identity_small_caps():
    rng = np.random.default_rng(8)
    for cap in (0, 3, 7):
        f = TruncatedSeries2.zeros(cap, exact=True)
        g = TruncatedSeries2.zeros(cap, exact=True)
        for a in f.indices():
            f[a] = Fraction(int(rng.integers(-9, 9)), int(rng.integers(1, 9)))
            g[a] = Fraction(int(rng.integers(-9, 9)), int(rng.integers(1, 9)))
        lhs = hadamard(h_xi_coeffs((1, 1), cap, exact=True), weighted_hadamard(f, g))
        assert lhs == hadamard(f, g)


def test_cauchy_hadamard_examples():
    from hadamard_domains import Shadow

    geo = cauchy_hadamard_shadow(TruncatedSeries2.geometric(60))
    square = Shadow.from_points([(0, 1), (1, 1)], 1.0, 1.0)
    assert shadow_distance(geo, square, window=(1.2, 1.2)) <= 5e-2
    tri = cauchy_hadamard_shadow(h_xi_coeffs((1, 1), 60))
    assert shadow_distance(tri, Shadow.from_points([(0, 1), (1, 0)], 1.0, 1.0), window=(1, 1)) <= 5e-2
    assert not cauchy_hadamard_shadow(mono(2, 3, 40)).bounded
    with pytest.raises(InvalidParameter):
        cauchy_hadamard_shadow(TruncatedSeries2.geometric(10))

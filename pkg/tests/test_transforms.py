import json

import numpy as np
import pytest

from conftest import fd_jacobian, random_ball_points, random_siegel_points, second_order_coefficients
from suita_lab import (
    Affine,
    Cayley,
    CayleyInverse,
    Composition,
    DegenerateLeviFormError,
    Dilation,
    DomainSpec,
    HoloMap,
    OutsideDomainError,
    PoleError,
    QuadricShear,
    cayley,
    cayley_inverse,
    contains,
    dilation,
    homothety,
    jacobian_det,
    pinchuk_normalize,
    taylor_coefficients,
    translation,
)


def test_cayley_examples():
    assert np.allclose(cayley([0, -1]), [0, 0], atol=1e-15)
    assert np.allclose(cayley([0, 0]), [0, 1], atol=1e-15)
    assert np.allclose(cayley_inverse([0, 0]), [0, -1], atol=1e-15)
    assert np.allclose(cayley_inverse([0, 0.5]), [0, -1 / 3], atol=1e-15)


def test_cayley_domains(rng):
    z = random_siegel_points(rng, 2, 10_000)
    assert np.all(contains(DomainSpec.ball(2), cayley(z)))
    w = random_ball_points(rng, 2, 10_000, radius=0.999)
    assert np.all(contains(DomainSpec.siegel(2), cayley_inverse(w)))
    assert np.allclose(cayley_inverse(cayley(z)), z, atol=1e-9)


def test_cayley_pole():
    with pytest.raises(PoleError):
        cayley([0, 1])


def test_jacobian_det_examples():
    assert jacobian_det(Cayley(2), [0, -1]) == pytest.approx(2 ** -1.5, abs=1e-15)
    J = fd_jacobian(Cayley(2), np.array([0, -1], complex))
    assert np.linalg.det(J) == pytest.approx(2 ** -1.5, abs=1e-9)
    for d in (0.25, 2.0, 1e-4):
        assert jacobian_det(Dilation(d, 2), [0.1, 0.2]) == pytest.approx(d ** -1.5, rel=1e-14)
    assert jacobian_det(translation([1 + 2j, -3]), [0, 0]) == pytest.approx(1)


def test_homothety_and_dilation_examples():
    assert np.allclose(homothety([0, 0], 2)([1, 0]), [2, 0])
    q = np.array([0.3 - 0.1j, 2j])
    assert np.allclose(homothety(q, 1)([5, 6j]), [5, 6j])
    assert np.allclose(homothety(q, 3.7)(q), q)
    assert np.allclose(dilation(1.0)([0.3j, 7]), [0.3j, 7])
    assert np.allclose(dilation(0.25)([1, 1]), [2, 4])


def _maps(rng):
    A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) + 2 * np.eye(2)
    return [
        Affine(A, rng.normal(size=2) + 1j * rng.normal(size=2)),
        Cayley(2),
        CayleyInverse(2),
        QuadricShear(np.array([[0.3 - 0.2j]])),
        Dilation(0.37, 2),
        Composition((QuadricShear(np.array([[0.5j]])), Dilation(0.5, 2), Cayley(2))),
    ]


def test_jacobian_matches_finite_differences(rng):
    for m in _maps(rng):
        for _ in range(100):
            z = 0.3 * (rng.normal(size=2) + 1j * rng.normal(size=2))
            z[1] -= 1.0  # stay away from the Cayley pole z2 = 1 and CayleyInverse pole w2 = -1 side
            if isinstance(m, CayleyInverse):
                z[1] += 1.0
            J = m.jacobian(z)
            Jfd = fd_jacobian(m, z)
            assert np.allclose(J, Jfd, rtol=1e-6, atol=1e-6 * np.max(np.abs(J)))


def test_composition_det_chain_rule(rng):
    f, g, h = QuadricShear(np.array([[0.4 + 0.1j]])), Dilation(0.2, 2), Cayley(2)
    c = Composition((f, g, h))
    for _ in range(20):
        z = 0.2 * (rng.normal(size=2) + 1j * rng.normal(size=2)) + np.array([0, -1])
        expect = f.det(z) * g.det(f(z)) * h.det(g(f(z)))
        assert abs(c.det(z) - expect) < 1e-10 * abs(expect)
        assert np.allclose(c(z), h(g(f(z))))


@pytest.mark.parametrize("m_idx", range(6))
def test_inverse_round_trip(rng, m_idx):
    m = _maps(rng)[m_idx]
    z = np.array([0.1 + 0.2j, -0.7 + 0.1j])
    assert np.allclose(m.inverse()(m(z)), z, atol=1e-10)


@pytest.mark.parametrize("m_idx", range(6))
def test_serialization(rng, m_idx):
    m = _maps(rng)[m_idx]
    d = json.loads(json.dumps(m.to_dict()))
    m2 = HoloMap.from_dict(d)
    z = np.array([0.1 + 0.2j, -0.7 + 0.1j])
    assert np.allclose(m2(z), m(z), atol=1e-14)


def test_affine_json_layout():
    d = Affine(np.array([[1, 2j], [0, 1]]), np.array([1j, 0])).to_dict()
    assert d["variant"] == "affine"
    assert d["linear"][0][1] == [0.0, 2.0] and d["offset"][0] == [0.0, 1.0]


# --- normalization ---------------------------------------------------------

def _linear_part(f, t=1e-5):
    g = []
    for e in np.eye(4):
        v = e[:2] + 1j * e[2:]
        g.append((f(t * v) - f(-t * v)) / (2 * t))
    return np.array(g)  # d/dx1, d/dx2, d/dy1, d/dy2


CASES = [
    (DomainSpec.ball(2), [0, 1]),
    (DomainSpec.egg(0.25), [0, 1]),
    (DomainSpec.egg(3.0), [0, 1]),
    (DomainSpec.ball(2), [0.6, 0.8j]),
]


@pytest.mark.parametrize("spec,zeta", CASES, ids=lambda x: repr(x))
def test_pinchuk_second_order_form(spec, zeta):
    pd = pinchuk_normalize(spec, zeta)
    f = pd.normalized_defining
    assert abs(f(np.zeros(2))) < 1e-14
    assert np.allclose(_linear_part(f), [0, 2, 0, 0], atol=1e-8)
    q, h = second_order_coefficients(f)
    assert abs(q) < 1e-8
    assert abs(h - 1) < 1e-8
    q_res, h_res = pd.residues()
    assert q_res < 1e-12 and h_res < 1e-12


def test_pinchuk_off_axis_egg():
    spec = DomainSpec.egg(0.25)
    x = 0.6
    zeta = np.array([x, (1 - x * x) ** 2 * np.exp(0.3j)])
    pd = pinchuk_normalize(spec, zeta)
    q, h = second_order_coefficients(pd.normalized_defining)
    assert abs(q) < 1e-8 and abs(h - 1) < 1e-8


def test_package_taylor_oracle_agrees():
    pd = pinchuk_normalize(DomainSpec.egg(0.25), [0, 1])
    a, P, L = taylor_coefficients(pd.normalized_defining, 2)
    assert np.allclose(0.5 * P, pd.quadratic_form, atol=1e-7)
    assert np.allclose(L, pd.hermitian_form, atol=1e-7)
    # the egg keeps a z2^2 term; only the tangential block is removed
    assert abs(pd.quadratic_form[1, 1] + 0.375) < 1e-12


def test_pinchuk_errors():
    with pytest.raises(OutsideDomainError):
        pinchuk_normalize(DomainSpec.ball(2), [0, 0.5])
    with pytest.raises(DegenerateLeviFormError):
        pinchuk_normalize(DomainSpec.egg(0.25), [1, 0])

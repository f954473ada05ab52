import math

import numpy as np
import pytest

from suita_lab import (
    CapabilityError,
    DegenerateLeviFormError,
    DomainSpec,
    OutsideDomainError,
    bounding_radius,
    build_sequence,
    defining_value,
    flip_fraction,
    hausdorff_grid_fraction,
    kernel_siegel,
    metric_discrepancy,
    metric_oracle,
    nearest_boundary_point,
    scaled_contains,
    scaled_domain,
    scaled_invariants,
)
from suita_lab.scaling import P_STAR, convergence_report, report_csv

PI2 = math.pi ** 2


@pytest.fixture(scope="module")
def ball_seq():
    return build_sequence(DomainSpec.ball(2), [0, 1], 15, 0.5)


@pytest.fixture(scope="module")
def egg_seq():
    return build_sequence(DomainSpec.egg(0.25), [0, 1], 12, 0.5)


def test_ball_sequence_geometry(ball_seq):
    for s in ball_seq.steps:
        assert np.allclose(s.p, [0, 1 - 2.0 ** -s.j], atol=1e-15)
        assert np.allclose(s.zeta, [0, 1], atol=1e-15)
        assert s.delta == pytest.approx(2.0 ** -s.j, rel=1e-12)
        assert np.allclose(s.phi(s.p), [0, -s.delta], atol=1e-12)
        assert np.allclose(s.composite(s.p), P_STAR, atol=1e-10)


def test_delta_is_boundary_distance_after_normalization(ball_seq):
    # on the ball the normalization is an isometry, so delta is the distance to the image boundary
    for s in ball_seq.steps:
        w = s.phi(s.p)
        image_boundary_pt = s.phi(nearest_boundary_point(DomainSpec.ball(2), s.p))
        assert np.linalg.norm(w - image_boundary_pt) == pytest.approx(s.delta, rel=1e-12)


def test_delta_comparable_to_rate(ball_seq, egg_seq):
    for seq in (ball_seq, egg_seq):
        ratios = [s.delta / 0.5 ** s.j for s in seq.steps]
        assert ratios[-1] > 0
        assert abs(ratios[-1] - ratios[-2]) < 1e-9


def test_egg_sequence(egg_seq):
    spec = DomainSpec.egg(0.25)
    for s in egg_seq.steps:
        assert abs(defining_value(spec, s.zeta)) < 1e-10
        assert np.allclose(s.composite(s.p), P_STAR, atol=1e-10)
        assert np.allclose(s.phi(s.p), [0, -s.delta], atol=1e-12)
    # early points see an off-axis nearest boundary point; later ones see p0
    assert abs(egg_seq.step(1).zeta[0]) > 0.1
    assert np.allclose(egg_seq.step(12).zeta, [0, 1])


def test_composite_round_trip(ball_seq, egg_seq, rng):
    z = 0.4 * (rng.normal(size=(50, 2)) + 1j * rng.normal(size=(50, 2)))
    for seq in (ball_seq, egg_seq):
        for s in seq.steps:
            c = s.composite
            assert np.allclose(c.inverse()(c(z)), z, atol=1e-10)


def test_scaled_contains(ball_seq, egg_seq):
    for seq in (ball_seq, egg_seq):
        for s in seq.steps:
            assert scaled_contains(seq, s.j, P_STAR)
    eps = 0.05
    z = np.array([[0.5, -0.05], [0.0, 0.03], [1.0, -0.45]], complex)
    assert np.all(2 * z[:, 1].real + np.abs(z[:, 0]) ** 2 > eps)
    assert not np.any(scaled_contains(ball_seq, 15, z))
    assert not np.any(scaled_contains(egg_seq, 12, z))
    with pytest.raises(IndexError):
        scaled_contains(ball_seq, 99, P_STAR)


def test_local_hausdorff_grid(ball_seq, egg_seq):
    for seq, last in ((ball_seq, 15), (egg_seq, 12)):
        fr = [hausdorff_grid_fraction(seq, j) for j in range(1, last + 1)]
        assert fr[0] > 0.05
        assert fr[-1] == 0.0
        assert max(fr[len(fr) // 2:]) <= min(fr[:2])


def test_scaled_invariants_exact(ball_seq):
    kernels = []
    for s in ball_seq.steps:
        r = scaled_invariants(ball_seq, s.j)
        assert r.F == pytest.approx(1, abs=1e-12)
        d = s.delta
        # independent closed form: D^j = {|u1|^2 + 2 Re u2 + d |u2|^2 < 0}
        assert r.kernel == pytest.approx(2 / PI2 / (2 - d) ** 3, rel=1e-12)
        assert r.indicatrix_volume == pytest.approx(PI2 / 2 * (2 - d) ** 3, rel=1e-12)
        kernels.append(r.kernel)
    assert all(b < a for a, b in zip(kernels, kernels[1:]))
    assert abs(kernels[-1] - kernel_siegel(2, P_STAR)) / kernels[-1] < 1e-4


def test_scaled_invariants_mc(ball_seq):
    r = scaled_invariants(ball_seq, 4, method="mc", N=300_000, seed=4)
    assert abs(r.F - 1) < 3 * r.F_error


def test_metric_convergence(ball_seq):
    d = [metric_discrepancy(ball_seq, j) for j in range(1, 16)]
    assert d[-1] < 1e-2
    assert all(b < a for a, b in zip(d, d[1:]))


def test_indicatrices_uniformly_bounded(ball_seq):
    radii = [bounding_radius(metric_oracle(scaled_domain(ball_seq, j), P_STAR)) for j in range(1, 16)]
    assert max(radii) / min(radii) < 1.6
    assert max(radii) <= 2.5 + 1e-9


def test_indicator_flips_vanish(ball_seq):
    limit = metric_oracle(DomainSpec.siegel(2), P_STAR)
    fr = [flip_fraction(metric_oracle(scaled_domain(ball_seq, j), P_STAR), limit, 100_000, 0, 2.6)
          for j in (1, 3, 6, 10, 15)]
    assert all(b <= a for a, b in zip(fr, fr[1:]))
    assert fr[-1] < 1e-3


def test_small_report(ball_seq):
    rows = convergence_report(ball_seq, N=50_000, seed=1, n_dirs=512)
    assert [r["j"] for r in rows] == list(range(1, 16))
    text = report_csv(rows, "config: test")
    assert text.splitlines()[1] == "j,delta,kernel,kernel_err_abs,vol,vol_sigma,F,F_sigma,radial_dist"
    for r in rows:
        assert abs(r["F"] - 1) < 3 * r["F_sigma"]


def test_sequence_errors():
    with pytest.raises(DegenerateLeviFormError):
        build_sequence(DomainSpec.egg(0.25), [1, 0], 3)
    with pytest.raises(OutsideDomainError):
        build_sequence(DomainSpec.ball(2), [0, 0.5], 3)
    with pytest.raises(ValueError):
        build_sequence(DomainSpec.ball(2), [0, 1], 3, rate=1.0)
    with pytest.raises(CapabilityError):
        build_sequence(DomainSpec.siegel(2), [0, 0], 3)
    egg = build_sequence(DomainSpec.egg(0.25), [0, 1], 3)
    with pytest.raises(CapabilityError):
        scaled_invariants(egg, 2)


def test_other_rate_converges():
    seq = build_sequence(DomainSpec.ball(2), [0, 1], 6, rate=0.25)
    assert [s.delta for s in seq.steps] == pytest.approx([0.25 ** j for j in range(1, 7)], rel=1e-12)
    gaps = [metric_discrepancy(seq, j) for j in range(1, 7)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    for j in (1, 6):
        assert scaled_invariants(seq, j).F == pytest.approx(1, abs=1e-12)

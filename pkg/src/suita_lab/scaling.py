"""
Scaling at a strongly pseudoconvex boundary point.

Points ``p_j`` approach ``p0`` along the inward normal.  Each is sent by a
normalization ``phi_j`` (centred at the nearest boundary point ``zeta_j``)
to ``('0, -delta_j)`` and then by the dilation ``T_j`` to ``p* = ('0, -1)``.
The scaled domains ``D^j = T_j phi_j(D)`` converge to the Siegel domain, and
since ``F`` is a biholomorphic invariant, ``F_D(p_j) = F_{D^j}(p*)``.

The quantitative run is done on the ball, where every object pulls back
exactly.  Eggs exercise the geometry only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import domains
from .bergman import kernel_oracle, kernel_siegel
from .domains import DomainSpec, as_point
from .errors import CapabilityError, OutsideDomainError
from .indicatrix import exact_volume, mc_volume, radial_distance, shard_generator
from .metrics import metric_oracle
from .suita import SuitaResult, rows_to_csv
from .transforms import Composition, Dilation, HoloMap, _wirtinger_data, pinchuk_normalize

__all__ = [
    "P_STAR",
    "ScalingStep",
    "ScalingSequence",
    "build_sequence",
    "scaled_domain",
    "scaled_contains",
    "scaled_invariants",
    "metric_discrepancy",
    "hausdorff_grid_fraction",
    "convergence_report",
    "REPORT_HEADER",
    "report_csv",
]

P_STAR = np.array([0.0, -1.0], dtype=complex)
REPORT_HEADER = ["j", "delta", "kernel", "kernel_err_abs", "vol", "vol_sigma", "F", "F_sigma",
                 "radial_dist"]


@dataclass(frozen=True, eq=False)
class ScalingStep:
    j: int
    p: np.ndarray
    zeta: np.ndarray
    delta: float
    phi: HoloMap
    T: Dilation
    composite: HoloMap


@dataclass(eq=False)
class ScalingSequence:
    spec: DomainSpec
    p0: np.ndarray
    rate: float
    steps: list = field(default_factory=list)

    def __len__(self):
        return len(self.steps)

    def step(self, j: int) -> ScalingStep:
        for s in self.steps:
            if s.j == j:
                return s
        raise IndexError(f"no scaling step j={j}")


def _outer_normal(spec, zeta):
    a, _, _ = _wirtinger_data(spec, zeta)
    return a.conj() / np.linalg.norm(a)


def build_sequence(spec: DomainSpec, p0, count: int, rate: float = 0.5,
                   optimality_tol: float = 1e-8) -> ScalingSequence:
    """Steps ``j = 1..count`` with ``p_j = p0 - rate^j * nu(p0)``."""
    if not 0 < rate < 1:
        raise ValueError("rate must lie in (0, 1)")
    if spec.variant not in ("ball", "egg") or spec.n != 2:
        raise CapabilityError(f"scaling sequences are built for Ball(2) and eggs, not {spec!r}")
    p0 = as_point(p0, spec.n)
    pinchuk_normalize(spec, p0)  # rejects points off the boundary or with degenerate Levi form
    nu = _outer_normal(spec, p0)
    seq = ScalingSequence(spec, p0, rate)
    for j in range(1, count + 1):
        p = p0 - rate ** j * nu
        if not domains.contains(spec, p):
            raise OutsideDomainError(f"p_{j} = {p} left the domain")
        zeta = domains.nearest_boundary_point(spec, p)
        diff = p - zeta
        delta = float(np.linalg.norm(diff))
        pd = pinchuk_normalize(spec, zeta)
        n_out = _outer_normal(spec, zeta)
        if np.linalg.norm(diff / delta + n_out) > optimality_tol:
            raise ArithmeticError(f"zeta_{j} fails the nearest-point optimality check")
        phi = pd.normalization
        T = Dilation(delta, spec.n)
        seq.steps.append(ScalingStep(j, p, zeta, delta, phi, T, Composition((phi, T))))
    return seq


def scaled_domain(seq: ScalingSequence, j: int) -> DomainSpec:
    """``D^j`` as a domain with a map back onto ``D``."""
    return DomainSpec.scaled(seq.spec, seq.step(j).composite.inverse())


def scaled_contains(seq: ScalingSequence, j: int, z):
    """``z in D^j``, i.e. ``composite^{-1}(z) in D``."""
    return domains.contains(seq.spec, seq.step(j).composite.inverse()(as_point(z, seq.spec.n)))


def _require_ball(seq):
    if seq.spec.variant != "ball":
        raise CapabilityError("exact scaled invariants are only available on the ball")


def scaled_invariants(seq: ScalingSequence, j: int, tau: str = "k", method: str = "exact",
                      N: int = 1_000_000, seed: int = 0) -> SuitaResult:
    """``F_{D^j}(p*)`` from the pulled-back kernel and metric."""
    _require_ball(seq)
    spec = scaled_domain(seq, j)
    kern = float(kernel_oracle(spec)(P_STAR))
    oracle = metric_oracle(spec, P_STAR, tau)
    if method == "exact":
        vol = exact_volume(oracle)
        return SuitaResult(kern, vol, 0.0, kern * vol, 0.0, tau, "exact", F_lower=kern * vol,
                           F_upper=kern * vol)
    est = mc_volume(oracle, N, seed)
    F = kern * est.value
    return SuitaResult(kern, est.value, est.std_error, F, kern * est.std_error, tau, "mc",
                       estimate=est, F_lower=F, F_upper=F)


def _siegel_oracle(tau="k"):
    return metric_oracle(DomainSpec.siegel(2), P_STAR, tau)


# a few base points inside every D^j (delta <= 1/2) and inside the Siegel domain
DEFAULT_TEST_POINTS = np.array([[0, -1], [0.3, -0.8], [0.2j, -1.5], [0.5, -0.5 + 0.3j]], dtype=complex)


def metric_discrepancy(seq: ScalingSequence, j: int, points=DEFAULT_TEST_POINTS,
                       n_dirs: int = 256, seed: int = 0) -> float:
    """``max |k_{D^j}(z, v) - k_{D_inf}(z, v)|`` over test points and unit ``v``."""
    _require_ball(seq)
    spec = scaled_domain(seq, j)
    siegel = DomainSpec.siegel(2)
    rng = shard_generator(seed, 0)
    g = rng.standard_normal((n_dirs, 4))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    v = g[:, :2] + 1j * g[:, 2:]
    worst = 0.0
    for z in as_point(points, 2):
        kj = metric_oracle(spec, z)(v)
        ki = metric_oracle(siegel, z)(v)
        worst = max(worst, float(np.max(np.abs(kj - ki))))
    return worst


def hausdorff_grid_fraction(seq: ScalingSequence, j: int, radius: float = 1.5, per_axis: int = 15) -> float:
    """Fraction of a grid in the ball ``|z - p*| < radius`` whose membership in
    ``D^j`` and in the Siegel domain differ."""
    t = np.linspace(-radius, radius, per_axis)
    X = np.stack(np.meshgrid(t, t, t, t, indexing="ij"), -1).reshape(-1, 4)
    X = X[np.linalg.norm(X, axis=1) < radius]
    z = P_STAR + X[:, :2] + 1j * X[:, 2:]
    inside_j = scaled_contains(seq, j, z)
    inside_inf = domains.contains(DomainSpec.siegel(2), z)
    return float(np.mean(inside_j != inside_inf))


def convergence_report(seq: ScalingSequence, tau: str = "k", N: int = 1_000_000, seed: int = 0,
                       n_dirs: int = 4096) -> list[dict]:
    """One row per step at ``p*``: kernel, MC indicatrix volume and ``F``.

    Step ``j`` samples with seed ``seed + j``.  ``radial_dist`` compares the
    indicatrix of ``D^j`` with that of the Siegel domain.
    """
    _require_ball(seq)
    k_inf = float(kernel_siegel(2, P_STAR))
    limit = _siegel_oracle(tau)
    rows = []
    for s in seq.steps:
        res = scaled_invariants(seq, s.j, tau, "mc", N=N, seed=seed + s.j)
        oracle = metric_oracle(scaled_domain(seq, s.j), P_STAR, tau)
        rows.append({
            "j": s.j, "delta": s.delta, "kernel": res.kernel,
            "kernel_err_abs": abs(res.kernel - k_inf),
            "vol": res.indicatrix_volume, "vol_sigma": res.volume_error,
            "F": res.F, "F_sigma": res.F_error,
            "radial_dist": radial_distance(oracle, limit, n_dirs=n_dirs, seed=seed),
        })
    return rows


def report_csv(rows: list[dict], comment: str | None = None) -> str:
    return rows_to_csv(rows, REPORT_HEADER, comment)

"""
Infinitesimal invariant metrics and their oracles.

A :class:`MetricOracle` freezes a metric ``v -> tau(z, v)`` at a base point
``z``.  Oracles are vectorized in ``v`` (shape ``(..., n)``) and carry, when
known, the Hermitian matrix ``G`` with ``tau(z, v)^2 = v^* G v``; indicatrix
volumes are then exact.

Only the ball and the Siegel domain have exact Kobayashi (= Caratheodory)
metrics here.  Complete Reinhardt domains get the Minkowski gauge at the
origin, and eggs off the origin are described only through two Euclidean
ellipsoids enclosing and enclosed by the indicatrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .domains import DomainSpec, as_point, contains, minkowski_gauge
from .errors import CapabilityError, HypothesisError, OutsideDomainError
from .transforms import Cayley, HoloMap

__all__ = [
    "MetricOracle",
    "Ellipsoid2C",
    "kobayashi_ball",
    "kobayashi_siegel",
    "caratheodory_model",
    "gauge_metric",
    "ball_metric_matrix",
    "wu_outer_ellipsoid",
    "inscribed_ellipsoid",
    "pullback_metric",
    "metric_oracle",
    "hermitian_oracle",
    "interpolating_oracle",
    "scaled_oracle",
]

TAU_TAGS = ("k", "c", "a")


def _apply(J, v):
    return np.einsum("...ij,...j->...i", J, v)


@dataclass(frozen=True, eq=False)
class MetricOracle:
    """A positively homogeneous metric at a fixed base point.

    ``family(z, v)`` is the metric at arbitrary base points when it is
    known, which is what :func:`pullback_metric` needs.
    """

    point: np.ndarray
    evaluate: Callable
    kind: str = "kobayashi"
    provenance: str = "exact"
    family: Callable | None = None
    hermitian: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.point.shape[-1]

    def __call__(self, v):
        return self.evaluate(as_point(v, self.n))

    def at(self, z) -> "MetricOracle":
        """Same metric family re-based at ``z``."""
        if self.family is None:
            raise CapabilityError(f"{self.kind} oracle has no metric family to re-base")
        z = as_point(z, self.n)
        fam = self.family
        return MetricOracle(z, lambda v: fam(z, v), self.kind, self.provenance, fam)


def ball_metric_matrix(z) -> np.ndarray:
    """Hermitian matrix of the ball's Kobayashi metric at ``z``."""
    z = as_point(z)
    s = 1.0 - np.vdot(z, z).real
    if s <= 0:
        raise OutsideDomainError("ball metric needs |z| < 1")
    return np.eye(z.size) / s + np.outer(z, z.conj()) / (s * s)


def kobayashi_ball(z, v):
    """Kobayashi metric of the unit ball.

    ``(|v|^2/(1-|z|^2) + |<z,v>|^2/(1-|z|^2)^2)^{1/2}``, the squared
    inner-product term being the one compatible with ball automorphisms.
    """
    z = as_point(z)
    v = as_point(v, z.shape[-1])
    s = 1.0 - np.sum(np.abs(z) ** 2, axis=-1)
    if np.any(s <= 0):
        raise OutsideDomainError("kobayashi_ball needs |z| < 1")
    ip = np.sum(z.conj() * v, axis=-1)
    out = np.sqrt(np.sum(np.abs(v) ** 2, axis=-1) / s + np.abs(ip) ** 2 / (s * s))
    return out[()] if isinstance(out, np.ndarray) else out


def kobayashi_siegel(z, v):
    """Kobayashi metric of the Siegel domain, pulled back from the ball."""
    z = as_point(z)
    n = z.shape[-1]
    if np.any(~contains(DomainSpec.siegel(n), z)):
        raise OutsideDomainError("point is outside the Siegel domain")
    psi = Cayley(n)
    return kobayashi_ball(psi(z), _apply(psi.jacobian(z), as_point(v, n)))


def caratheodory_model(spec: DomainSpec, z, v):
    """Caratheodory metric on the ball and the Siegel domain.

    Both are homogeneous, so the Caratheodory and Kobayashi metrics agree.
    """
    if spec.variant == "ball":
        return kobayashi_ball(z, v)
    if spec.variant == "siegel":
        return kobayashi_siegel(z, v)
    raise CapabilityError(f"no Caratheodory metric oracle for {spec!r}; available: Ball(n), Siegel(n)")


def gauge_metric(spec: DomainSpec, v, z=None):
    """Kobayashi metric of a complete Reinhardt domain at the origin."""
    if z is not None and np.any(as_point(z) != 0):
        raise CapabilityError("the gauge metric is only available at the origin")
    return minkowski_gauge(spec, v)


@dataclass(frozen=True)
class Ellipsoid2C:
    """``{|v1|^2 / A + |v2|^2 / B < 1}`` in C^2."""

    A: float
    B: float

    def __post_init__(self):
        if not (self.A > 0 and self.B > 0):
            raise ValueError("ellipsoid axes must be positive")

    @property
    def volume(self) -> float:
        return 0.5 * math.pi ** 2 * self.A * self.B

    @property
    def matrix(self) -> np.ndarray:
        return np.diag([1.0 / self.A, 1.0 / self.B]).astype(complex)

    def gauge(self, v):
        v = as_point(v, 2)
        out = np.sqrt(np.abs(v[..., 0]) ** 2 / self.A + np.abs(v[..., 1]) ** 2 / self.B)
        return out[()] if isinstance(out, np.ndarray) else out

    def contains(self, v):
        return self.gauge(v) < 1

    def oracle(self, provenance: str = "exact") -> MetricOracle:
        return MetricOracle(np.zeros(2, complex), self.gauge, "ellipsoid_bound", provenance,
                            hermitian=self.matrix)


def _check_axis_point(mu, p, allow_zero=True):
    if not mu > 0:
        raise ValueError("mu must be positive")
    if not (0 <= p < 1) or (p == 0 and not allow_zero):
        raise OutsideDomainError(f"p = {p} outside the admissible range")


def wu_outer_ellipsoid(mu: float, p: float) -> Ellipsoid2C:
    """Euclidean ellipsoid containing the egg's Kobayashi indicatrix at ``(0, p)``."""
    _check_axis_point(mu, p)
    return Ellipsoid2C(1.0 - p ** (2 * mu), (1.0 - p * p) ** 2)


def inscribed_ellipsoid(mu: float, p: float) -> Ellipsoid2C:
    """Euclidean ellipsoid inside the Kobayashi indicatrix of a non-convex egg at ``(0, p)``."""
    if not 0 < mu < 0.5:
        raise HypothesisError("the inscribed ellipsoid needs 0 < mu < 1/2")
    _check_axis_point(mu, p, allow_zero=False)
    a = 1.0 - p ** (2 * mu)
    return Ellipsoid2C(a, a * a / (mu * mu * p ** (2 * mu - 2)))


def hermitian_oracle(point, G, kind="kobayashi", provenance="exact", family=None) -> MetricOracle:
    """Oracle for ``tau(v) = sqrt(v^* G v)``."""
    G = np.asarray(G, dtype=complex)

    def evaluate(v):
        q = np.einsum("...i,ij,...j->...", v.conj(), G, v).real
        out = np.sqrt(np.maximum(q, 0.0))
        return out[()] if isinstance(out, np.ndarray) else out

    return MetricOracle(as_point(point), evaluate, kind, provenance, family, G)


def pullback_metric(base: MetricOracle, map: HoloMap, z) -> MetricOracle:
    """Oracle ``v -> base(map(z), dmap(z) v)`` at ``z``.

    ``base`` must either carry a metric family or already sit at ``map(z)``.
    """
    z = as_point(z, map.n)
    w = map(z)
    J = map.jacobian(z)
    if base.family is not None:
        fam = base.family

        def family(zz, v):
            return fam(map(zz), _apply(map.jacobian(zz), v))
    else:
        if not np.allclose(w, base.point, atol=1e-12):
            raise CapabilityError("base oracle has no metric family and sits at a different point")
        family = None
    at_w = np.allclose(w, base.point, atol=1e-12)
    G = J.conj().T @ base.hermitian @ J if base.hermitian is not None and at_w else None
    if base.family is not None:
        def evaluate(v):
            return family(z, v)
    else:
        def evaluate(v):
            return base.evaluate(_apply(J, v))
    return MetricOracle(z, evaluate, base.kind, base.provenance, family, G)


def interpolating_oracle(o1: MetricOracle, o2: MetricOracle, t: float = 0.5) -> MetricOracle:
    """Convex combination ``(1-t) tau1 + t tau2``; its indicatrix lies between theirs."""
    return MetricOracle(o1.point, lambda v: (1 - t) * o1.evaluate(v) + t * o2.evaluate(v),
                        "interpolated", "synthetic")


def scaled_oracle(o: MetricOracle, c: float) -> MetricOracle:
    """``c * tau``; the indicatrix shrinks by ``1/c``."""
    G = None if o.hermitian is None else c * c * o.hermitian
    return MetricOracle(o.point, lambda v: c * o.evaluate(v), o.kind, "synthetic", hermitian=G)


def _ball_family(z, v):
    return kobayashi_ball(z, v)


def _siegel_family(z, v):
    return kobayashi_siegel(z, v)


def metric_oracle(spec: DomainSpec, z, tau: str = "k") -> MetricOracle:
    """Exact metric oracle for ``(spec, z, tau)`` or :class:`CapabilityError`.

    On the ball and the Siegel domain ``c = a = k``.  On eggs only the
    origin is exact (the gauge); for ``tau`` other than ``k`` this needs a
    convex egg.  Scaled domains pull the base oracle back.
    """
    if tau not in TAU_TAGS:
        raise ValueError(f"tau must be one of {TAU_TAGS}")
    kind = {"k": "kobayashi", "c": "caratheodory", "a": "azukawa"}[tau]
    z = as_point(z, spec.n)
    if not contains(spec, z):
        raise OutsideDomainError(f"{z} is outside {spec!r}")
    if spec.variant == "ball":
        return hermitian_oracle(z, ball_metric_matrix(z), kind, family=_ball_family)
    if spec.variant == "siegel":
        psi = Cayley(spec.n)
        J = psi.jacobian(z)
        G = J.conj().T @ ball_metric_matrix(psi(z)) @ J
        return hermitian_oracle(z, G, kind, family=_siegel_family)
    if spec.variant == "egg":
        if np.any(z != 0):
            raise CapabilityError(
                "exact egg metric only at the origin; at (0, p) use the ellipsoid bounds "
                "(wu_outer_ellipsoid, inscribed_ellipsoid)")
        if tau != "k" and not spec.is_convex:
            raise CapabilityError(f"only tau='k' is exact at the origin of the non-convex {spec!r}")
        return MetricOracle(z, lambda v: minkowski_gauge(spec, v), kind, "exact")
    if spec.variant == "scaled":
        base_z = spec.map(z)
        base = metric_oracle(spec.base, base_z, tau)
        return pullback_metric(base, spec.map, z)
    raise CapabilityError(f"no metric oracle for {spec!r}")

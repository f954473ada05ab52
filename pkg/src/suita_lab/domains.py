"""
Model domains in C^n.

Four variants are supported:

* ``ball``    -- the unit ball ``{|z| < 1}`` in C^n,
* ``egg``     -- ``E_{2mu} = {|z1|^2 + |z2|^{2mu} < 1}`` in C^2,
* ``siegel``  -- ``D_inf = {2 Re z_n + |'z|^2 < 0}``, the unbounded ball,
* ``scaled``  -- the preimage of a base domain under a holomorphic map.

Points are complex numpy arrays whose last axis holds the coordinates, so
every function here accepts a single point of shape ``(n,)`` or a stack of
shape ``(..., n)``.  Boundary points are *outside* (the domains are open).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import DimensionError, UnboundedDomainError

__all__ = [
    "DomainSpec",
    "as_point",
    "contains",
    "defining_value",
    "volume",
    "minkowski_gauge",
    "inscribed_radius",
    "circumscribed_radius",
    "nearest_boundary_point",
]

_VARIANTS = ("ball", "egg", "siegel", "scaled")


@dataclass(frozen=True)
class DomainSpec:
    """Symbolic description of a model domain.

    Use the constructors :meth:`ball`, :meth:`egg`, :meth:`siegel` and
    :meth:`scaled` rather than the raw initializer.  For ``scaled`` the
    stored ``map`` sends the scaled domain *onto* ``base``, so membership
    is ``base.contains(map(z))``.
    """

    variant: str
    n: int = 2
    mu: float | None = None
    base: "DomainSpec | None" = None
    map: Any = None

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise ValueError(f"unknown domain variant {self.variant!r}")
        if self.n < 1:
            raise ValueError("dimension n must be >= 1")
        if self.variant == "egg":
            if self.n != 2:
                raise ValueError("egg domains live in C^2")
            if self.mu is None or not self.mu > 0:
                raise ValueError("egg exponent mu must be positive")
        if self.variant == "scaled" and (self.base is None or self.map is None):
            raise ValueError("scaled domain needs a base domain and a map")

    @classmethod
    def ball(cls, n: int = 2) -> "DomainSpec":
        return cls("ball", n=n)

    @classmethod
    def egg(cls, mu: float) -> "DomainSpec":
        return cls("egg", n=2, mu=float(mu))

    @classmethod
    def siegel(cls, n: int = 2) -> "DomainSpec":
        return cls("siegel", n=n)

    @classmethod
    def scaled(cls, base: "DomainSpec", map) -> "DomainSpec":
        return cls("scaled", n=base.n, base=base, map=map)

    @property
    def is_bounded(self) -> bool:
        if self.variant == "scaled":
            return self.base.is_bounded
        return self.variant != "siegel"

    @property
    def is_reinhardt(self) -> bool:
        """Bounded complete Reinhardt domain (ball or egg)."""
        return self.variant in ("ball", "egg")

    @property
    def is_convex(self) -> bool:
        if self.variant in ("ball", "siegel"):
            return True
        if self.variant == "egg":
            return self.mu >= 0.5
        return False

    def contains(self, z) -> bool | np.ndarray:
        return contains(self, z)

    def defining_value(self, z):
        return defining_value(self, z)

    def to_dict(self) -> dict:
        if self.variant == "scaled":
            return {"variant": "scaled", "n": self.n,
                    "base": self.base.to_dict(), "map": self.map.to_dict()}
        d = {"variant": self.variant, "n": self.n}
        if self.mu is not None:
            d["mu"] = self.mu
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "DomainSpec":
        variant = d["variant"]
        if variant == "ball":
            return cls.ball(int(d.get("n", 2)))
        if variant == "siegel":
            return cls.siegel(int(d.get("n", 2)))
        if variant == "egg":
            return cls.egg(float(d["mu"]))
        if variant == "scaled":
            from .transforms import HoloMap
            return cls.scaled(cls.from_dict(d["base"]), HoloMap.from_dict(d["map"]))
        raise ValueError(f"unknown domain variant {variant!r}")

    @classmethod
    def from_json(cls, text: str) -> "DomainSpec":
        return cls.from_dict(json.loads(text))

    def __repr__(self):
        if self.variant == "egg":
            return f"Egg(mu={self.mu:g})"
        if self.variant == "scaled":
            return f"Scaled({self.base!r})"
        return f"{self.variant.capitalize()}({self.n})"


def as_point(z, n: int | None = None) -> np.ndarray:
    """Coerce ``z`` to a complex array and check the trailing dimension."""
    arr = np.asarray(z, dtype=complex)
    if arr.ndim == 0:
        raise DimensionError("a point needs at least one coordinate")
    if n is not None and arr.shape[-1] != n:
        raise DimensionError(f"expected {n} complex coordinates, got {arr.shape[-1]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point has non-finite coordinates")
    return arr


def _sq(z):
    return z.real ** 2 + z.imag ** 2


def defining_value(spec: DomainSpec, z):
    """Defining function: negative inside, zero on the boundary."""
    z = as_point(z, spec.n)
    if spec.variant == "ball":
        out = np.sum(_sq(z), axis=-1) - 1.0
    elif spec.variant == "egg":
        out = _sq(z[..., 0]) + _sq(z[..., 1]) ** spec.mu - 1.0
    elif spec.variant == "siegel":
        out = 2.0 * z[..., -1].real + np.sum(_sq(z[..., :-1]), axis=-1)
    else:
        out = defining_value(spec.base, spec.map(z))
    return out[()] if isinstance(out, np.ndarray) else out


def contains(spec: DomainSpec, z):
    """Strict membership test."""
    return defining_value(spec, z) < 0


def volume(spec: DomainSpec) -> float:
    """Lebesgue volume in real dimension 2n (ball and egg only)."""
    if spec.variant == "ball":
        return math.pi ** spec.n / math.factorial(spec.n)
    if spec.variant == "egg":
        return math.pi ** 2 * spec.mu / (spec.mu + 1.0)
    raise UnboundedDomainError(f"volume is only available for bounded Reinhardt domains, not {spec!r}")


def _egg_radius_profile(mu: float) -> list[float]:
    # |z|^2 on the boundary curve as a function of y = |z2| in [0, 1]
    def h(y):
        return 1.0 - y ** (2 * mu) + y * y

    ys = [0.0, 1.0]
    if mu != 1.0:
        yc = mu ** (1.0 / (2.0 - 2.0 * mu))
        if 0.0 < yc < 1.0:
            ys.append(yc)
    return [h(y) for y in ys]


def inscribed_radius(spec: DomainSpec) -> float:
    """Radius of the largest centred Euclidean ball inside ``spec``."""
    if spec.variant == "ball":
        return 1.0
    if spec.variant == "egg":
        return math.sqrt(min(_egg_radius_profile(spec.mu)))
    raise ValueError(f"inscribed radius needs a bounded Reinhardt domain, not {spec!r}")


def circumscribed_radius(spec: DomainSpec) -> float:
    """Radius of the smallest centred Euclidean ball containing ``spec``."""
    if spec.variant == "ball":
        return 1.0
    if spec.variant == "egg":
        return math.sqrt(max(_egg_radius_profile(spec.mu)))
    raise ValueError(f"circumscribed radius needs a bounded Reinhardt domain, not {spec!r}")


def minkowski_gauge(spec: DomainSpec, v, tol: float = 1e-12, max_iter: int = 200):
    """Minkowski gauge of a bounded complete Reinhardt domain.

    Returns the unique ``t >= 0`` with ``v / t`` on the boundary, found by
    bisection on ``t -> defining_value(v / t)`` (monotone for complete
    Reinhardt domains).  Vectorized over leading axes of ``v``.
    """
    if not spec.is_reinhardt:
        raise ValueError(f"Minkowski gauge needs a bounded complete Reinhardt domain, not {spec!r}")
    v = as_point(v, spec.n)
    norm = np.sqrt(np.sum(_sq(v), axis=-1))
    # |v|/r_out <= gauge <= |v|/r_in; widen slightly so the bracket is strict
    lo = norm / (circumscribed_radius(spec) * (1 + 1e-9))
    hi = norm / (inscribed_radius(spec) * (1 - 1e-9))
    zero = norm == 0
    for _ in range(max_iter):
        width = np.max(hi - lo) if np.ndim(hi) else hi - lo
        if width <= tol or width <= 4 * np.finfo(float).eps * np.max(hi):
            break
        mid = 0.5 * (lo + hi)
        mid_safe = np.where(zero, 1.0, mid)
        inside = defining_value(spec, v / np.expand_dims(mid_safe, -1)) < 0
        hi = np.where(inside, mid, hi)
        lo = np.where(inside, lo, mid)
    out = np.where(zero, 0.0, 0.5 * (lo + hi))
    return out[()] if isinstance(out, np.ndarray) else out


def _egg_abs_nearest(mu: float, a: float, b: float, grid: int = 4001) -> tuple[float, float]:
    # nearest point to (a, b) on {x^2 + y^{2mu} = 1}, x in [-1, 1], y >= 0
    e = 1.0 / (2.0 * mu)

    def y_of(x):
        return np.maximum(1.0 - x * x, 0.0) ** e

    def dg(x):
        # half derivative of (x - a)^2 + (y(x) - b)^2
        w = max(1.0 - x * x, 0.0)
        dy = -2.0 * e * x * w ** (e - 1.0) if w > 0 else (0.0 if e > 1 else -np.sign(x) * np.inf)
        return (x - a) + (w ** e - b) * dy

    xs = np.linspace(-1.0, 1.0, grid)
    g = (xs - a) ** 2 + (y_of(xs) - b) ** 2
    i = int(np.argmin(g))
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, grid - 1)]
    x = xs[i]
    if 0 < i < grid - 1:
        from scipy.optimize import brentq
        flo, fhi = dg(lo), dg(hi)
        if flo == 0:
            x = lo
        elif fhi == 0:
            x = hi
        elif np.sign(flo) != np.sign(fhi):
            x = brentq(dg, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    return float(x), float(y_of(np.float64(x)))


def nearest_boundary_point(spec: DomainSpec, p) -> np.ndarray:
    """Euclidean-nearest boundary point of a bounded Reinhardt domain in C^2 (or a ball).

    Rotating each coordinate cannot increase distance, so the search runs in
    the absolute space ``(|z1|, |z2|)`` and the phases of ``p`` are restored.
    """
    p = as_point(p, spec.n)
    if spec.variant == "ball":
        r = np.linalg.norm(p)
        if r == 0:
            out = np.zeros(spec.n, complex)
            out[-1] = 1.0
            return out
        return p / r
    if spec.variant != "egg":
        raise ValueError(f"nearest boundary point is implemented for ball and egg, not {spec!r}")
    a, b = abs(p[0]), abs(p[1])
    x, y = _egg_abs_nearest(spec.mu, a, b)
    ph1 = p[0] / a if a > 0 else 1.0
    ph2 = p[1] / b if b > 0 else 1.0
    return np.array([x * ph1, y * ph2], dtype=complex)

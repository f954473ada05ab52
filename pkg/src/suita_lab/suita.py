"""
The invariant ``F(z) = K(z) * vol(I(z))`` and its bounds.

``suita_invariant`` multiplies an exact Bergman kernel by an exact or Monte
Carlo indicatrix volume.  On eggs at ``(0, p)``, ``p != 0``, no exact
indicatrix is known; there the value is a bracket obtained from the two
ellipsoids of :mod:`suita_lab.metrics`, which for ``mu < 1/2`` is

    upper = (1/mu) (1 - p^{2mu})/(1 - p^2) - (1 - mu)/(2 mu) (1 - p^{2mu})
    lower = p^{2-2mu}/(2 mu^3) ((1 - p^{2mu})/(1 - p^2))^3 (1 + mu + p^2 - mu p^2)
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import domains
from .bergman import kernel_egg_axis, kernel_oracle
from .domains import DomainSpec, as_point
from .errors import CapabilityError, HypothesisError, OutsideDomainError
from .indicatrix import VolumeEstimate, exact_volume, mc_volume
from .metrics import inscribed_ellipsoid, metric_oracle, wu_outer_ellipsoid

__all__ = [
    "SuitaResult",
    "BoundPair",
    "BoundReport",
    "SandwichReport",
    "OrbitReport",
    "suita_invariant",
    "egg_bounds",
    "prop41_bounds",
    "bound_consistency",
    "bz_sandwich",
    "boundary_limit_scan",
    "segment_scan",
    "orbit_value_note",
    "rows_to_csv",
    "CAPABILITIES",
]

CAPABILITIES = (
    "available: Ball(n) at any z (tau = k, c, a; exact or mc); "
    "Siegel(n) at any z (tau = k, c, a; exact or mc); "
    "Egg(mu) at the origin (tau = k, or c/a when mu >= 1/2; exact or mc); "
    "Egg(mu < 1/2) at (0, p) as a bracket; "
    "Scaled(Ball | Siegel) at any z via pullback"
)


@dataclass(frozen=True)
class BoundPair:
    lower: float | None
    upper: float
    mu: float
    p: float


@dataclass(frozen=True)
class SuitaResult:
    """Kernel, indicatrix volume and their product.

    ``F`` is ``None`` when only a bracket ``[F_lower, F_upper]`` is known.
    """

    kernel: float
    indicatrix_volume: float | None
    volume_error: float
    F: float | None
    F_error: float
    tau: str
    method: str
    estimate: VolumeEstimate | None = None
    F_lower: float | None = None
    F_upper: float | None = None
    notes: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.estimate is not None:
            d["estimate"] = asdict(self.estimate)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _one_minus_pow(p, e):
    # 1 - p**e without cancellation near p = 1
    return -math.expm1(e * math.log(p)) if p > 0 else 1.0


def _on_egg_axis(spec: DomainSpec, z) -> bool:
    return spec.variant == "egg" and z[0] == 0 and z[1] != 0


def suita_invariant(spec: DomainSpec, z, tau: str = "k", method: str = "exact",
                    N: int = 1_000_000, seed: int = 0, **mc_kw) -> SuitaResult:
    """``F^tau_D(z)`` with propagated Monte Carlo error.

    ``method`` is ``"exact"`` (both factors closed-form) or ``"mc"``.
    Unsupported combinations raise :class:`CapabilityError` listing what is
    available.
    """
    z = as_point(z, spec.n)
    if not domains.contains(spec, z):
        raise OutsideDomainError(f"{z} is outside {spec!r}")
    if method not in ("exact", "mc"):
        raise ValueError("method must be 'exact' or 'mc'")

    if _on_egg_axis(spec, z):
        if tau != "k" or spec.mu >= 0.5:
            raise CapabilityError(
                f"no oracle for {spec!r} at (0, p) with tau={tau!r}; {CAPABILITIES}")
        p = abs(z[1])
        b = egg_bounds(spec.mu, p)
        return SuitaResult(float(kernel_egg_axis(spec.mu, p)), None, 0.0, None, 0.0, tau, "bracket",
                           F_lower=b.lower, F_upper=b.upper,
                           notes="bracket from the inscribed and outer ellipsoids")

    try:
        kern = float(kernel_oracle(spec)(z))
        oracle = metric_oracle(spec, z, tau)
    except CapabilityError as exc:
        raise CapabilityError(f"{exc}; {CAPABILITIES}") from None

    if method == "exact":
        vol = exact_volume(oracle)
        if vol is None and spec.variant == "egg":
            # the Kobayashi indicatrix at the origin of a Reinhardt domain is the domain
            vol = domains.volume(spec)
        if vol is None:
            raise CapabilityError(f"no closed-form indicatrix volume for {spec!r}; use method='mc'")
        vol = float(vol)
        F = kern * vol
        return SuitaResult(kern, vol, 0.0, F, 0.0, tau, "exact", F_lower=F, F_upper=F)

    est = mc_volume(oracle, N, seed, **mc_kw)
    F = kern * est.value
    return SuitaResult(kern, est.value, est.std_error, F, kern * est.std_error, tau, "mc",
                       estimate=est, F_lower=F, F_upper=F)


def egg_bounds(mu: float, p: float) -> BoundPair:
    """Upper and lower bounds for ``F`` on a non-convex egg at ``(0, p)``.

    ``p = 0`` is allowed for the upper bound only; ``lower`` is then ``None``.
    """
    if not 0 < mu < 0.5:
        raise HypothesisError("the egg bounds need 0 < mu < 1/2")
    if not 0 <= p < 1:
        raise OutsideDomainError("p must lie in [0, 1)")
    a = _one_minus_pow(p, 2 * mu)
    s = (1.0 - p) * (1.0 + p)
    upper = a / (mu * s) - (1.0 - mu) / (2.0 * mu) * a
    lower = None
    if p > 0:
        lower = p ** (2 - 2 * mu) / (2 * mu ** 3) * (a / s) ** 3 * (1 + mu + p * p - mu * p * p)
    return BoundPair(lower, upper, mu, p)


prop41_bounds = egg_bounds


@dataclass
class BoundReport:
    passed: bool
    lower: float
    upper: float
    F: float
    sigma: float
    upper_factorization_err: float
    lower_factorization_err: float
    messages: list = field(default_factory=list)


def bound_consistency(mu: float, p: float, result: SuitaResult, k: float = 3.0) -> BoundReport:
    """Check an MC value of ``F`` at ``(0, p)`` against the egg bounds.

    Also re-derives each bound as kernel times ellipsoid volume.
    """
    b = egg_bounds(mu, p)
    kern = kernel_egg_axis(mu, p)
    up_err = abs(kern * wu_outer_ellipsoid(mu, p).volume - b.upper)
    lo_err = abs(kern * inscribed_ellipsoid(mu, p).volume - b.lower)
    F, sig = result.F, result.F_error
    msgs = []
    ok = True
    if not b.lower <= F + k * sig:
        ok = False
        msgs.append(f"F = {F:.6g} +- {sig:.2g} below lower bound {b.lower:.6g}")
    if not F - k * sig <= b.upper:
        ok = False
        msgs.append(f"F = {F:.6g} +- {sig:.2g} above upper bound {b.upper:.6g}")
    return BoundReport(ok, b.lower, b.upper, F, sig, up_err, lo_err, msgs)


@dataclass
class SandwichReport:
    applicable: bool
    passed: bool | None
    C: float | None
    lower: float
    upper: float | None
    reason: str = ""


def bz_sandwich(spec: DomainSpec, z, result: SuitaResult, k: float = 3.0) -> SandwichReport:
    """``1 <= F <= C^n`` with ``C = 4`` on convex domains.

    Domains not known to be convex are reported as inapplicable.
    """
    if not spec.is_convex:
        return SandwichReport(False, None, None, 1.0, None, f"{spec!r} is not convex")
    C = 4.0
    up = C ** spec.n
    if result.F is None:
        lo_ok = result.F_upper >= 1.0
        hi_ok = result.F_lower <= up
        return SandwichReport(True, lo_ok and hi_ok, C, 1.0, up, "bracket")
    s = result.F_error
    return SandwichReport(True, (1 - k * s <= result.F) and (result.F <= up + k * s), C, 1.0, up)


def _boundary_distance(spec: DomainSpec, z) -> float:
    if spec.variant == "siegel":
        # distance to {2 Re z_n + |'z|^2 = 0} is only needed on the normal axis
        if np.any(z[:-1] != 0):
            raise CapabilityError("boundary distance on the Siegel domain is only implemented for 'z = 0")
        return float(-z[-1].real)
    return float(np.linalg.norm(z - domains.nearest_boundary_point(spec, z)))


def boundary_limit_scan(spec: DomainSpec, target, points, tau: str = "k", method: str = "exact",
                        N: int = 1_000_000, seed: int = 0) -> list[dict]:
    """``F`` (or its bracket) along a sequence of points tending to ``target``.

    Each row holds ``dist`` (to the boundary) and either ``F, F_err`` or
    ``F_lower, F_upper``.
    """
    target = as_point(target, spec.n)
    if abs(domains.defining_value(spec, target)) > 1e-9:
        raise OutsideDomainError(f"target {target} is not a boundary point of {spec!r}")
    rows = []
    for i, z in enumerate(points):
        z = as_point(z, spec.n)
        res = suita_invariant(spec, z, tau, method, N=N, seed=seed + i)
        row = {"dist": _boundary_distance(spec, z)}
        if res.F is None:
            row.update(F_lower=res.F_lower, F_upper=res.F_upper)
        else:
            row.update(F=res.F, F_err=res.F_error)
        rows.append(row)
    return rows


SEGMENT_HEADER = ["mu", "p", "kernel", "vol_lower", "vol_upper", "F_lower", "F_upper"]


def segment_scan(mus, ps) -> list[dict]:
    """Rows of the egg bounds over a ``(mu, p)`` grid.

    ``mu >= 1/2`` rows are marked ``inapplicable``; at ``p = 0`` the lower
    ellipsoid degenerates and its fields are left empty.
    """
    rows = []
    for mu in mus:
        for p in ps:
            mu, p = float(mu), float(p)
            row = {"mu": mu, "p": p, "kernel": float(kernel_egg_axis(mu, p))}
            if mu >= 0.5:
                row.update(vol_lower="inapplicable", vol_upper="inapplicable",
                           F_lower="inapplicable", F_upper="inapplicable")
            else:
                b = egg_bounds(mu, p)
                row["vol_upper"] = wu_outer_ellipsoid(mu, p).volume
                row["F_upper"] = b.upper
                if p > 0:
                    row["vol_lower"] = inscribed_ellipsoid(mu, p).volume
                    row["F_lower"] = b.lower
                else:
                    row["vol_lower"] = ""
                    row["F_lower"] = ""
            rows.append(row)
    return rows


def rows_to_csv(rows: list[dict], header: list[str], comment: str | None = None) -> str:
    """CSV text; floats use ``repr`` so output is byte-reproducible."""
    buf = io.StringIO()
    if comment:
        for line in comment.splitlines():
            buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(r[h])) if isinstance(r.get(h), float) else r.get(h, "") for h in header])
    return buf.getvalue()


@dataclass
class OrbitReport:
    mu: float
    applicable: bool
    rows: list = field(default_factory=list)
    contains_one: bool = True
    upper_at_zero: float | None = None
    max_lower: float | None = None
    min_upper: float | None = None
    limit_nonexistence_proven: bool = False
    proven: list = field(default_factory=list)
    suggested: list = field(default_factory=list)


def orbit_value_note(mu: float, ps=None, tol: float = 1e-9) -> OrbitReport:
    """What the segment ``S = {(0, p)}`` brackets say about the range of ``F``.

    Every orbit meets ``S`` once and accumulates at each weakly
    pseudoconvex boundary point, so any neighbourhood of such a point sees
    all of ``F(S)``.  ``F(S)`` contains 1 (the origin).  The boundary limit
    there fails to exist as soon as some bracket excludes 1.
    """
    if not mu > 0:
        raise ValueError("mu must be positive")
    if mu >= 0.5:
        return OrbitReport(mu, False, proven=["F(0, 0) = 1"],
                           suggested=["convex eggs: exact formulas are outside this package"])
    if ps is None:
        ps = np.concatenate([np.linspace(0.0, 0.99, 100), 1 - np.logspace(-3, -6, 4)])
    rows = segment_scan([mu], ps)
    bracketed = [r for r in rows if r["p"] > 0]
    max_lower = max(r["F_lower"] for r in bracketed)
    min_upper = min(r["F_upper"] for r in rows)
    upper0 = egg_bounds(mu, 0.0).upper
    rep = OrbitReport(mu, True, rows, True, upper0, max_lower, min_upper)
    rep.proven.append("F(0, 0) = 1, so 1 belongs to F(S) and is a boundary limit value "
                      "at every weakly pseudoconvex boundary point")
    rep.proven.append(f"F(0, p) <= {upper0:.6g} as p -> 0 and both brackets tend to 1 as p -> 1")
    if max_lower > 1 + tol or min_upper < 1 - tol:
        rep.limit_nonexistence_proven = True
        rep.proven.append("some bracket excludes 1: F(S) has at least two values, so F has no "
                          "boundary limit at weakly pseudoconvex points")
    else:
        rep.suggested.append(f"no bracket excludes 1 (max lower = {max_lower:.12g}, "
                             f"min upper = {min_upper:.12g}); the brackets alone do not decide "
                             "whether F is constant on S")
    return rep

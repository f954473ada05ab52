"""
Bergman kernels on the diagonal.

Closed forms are available for the ball, the Siegel domain (pulled back
from the ball through the Cayley transform) and eggs along the axis
``{z1 = 0}``.  For any bounded complete Reinhardt domain the kernel is also
available as the truncated monomial series

    K(z) = sum_alpha |z^alpha|^2 / m_alpha,   m_alpha = int |z^alpha|^2,

since monomials are orthogonal in A^2 of such domains.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .domains import DomainSpec, as_point, contains
from .errors import CapabilityError, ConvergenceWarning, OutsideDomainError
from .transforms import Cayley, HoloMap, homothety, translation

__all__ = [
    "kernel_ball",
    "kernel_egg_axis",
    "kernel_siegel",
    "egg_moment",
    "reinhardt_kernel",
    "KernelOracle",
    "kernel_oracle",
    "ConvergenceTable",
    "ramadanov_run",
    "inflating_ball_family",
    "translated_ball_family",
]

DEFAULT_MAX_DEGREE = 60


def _sqnorm(z):
    return np.sum(z.real ** 2 + z.imag ** 2, axis=-1)


def kernel_ball(n: int, z):
    """``n!/pi^n (1 - |z|^2)^{-(n+1)}``."""
    z = as_point(z, n)
    s = 1.0 - _sqnorm(z)
    if np.any(s <= 0):
        raise OutsideDomainError("kernel_ball needs |z| < 1")
    return math.factorial(n) / math.pi ** n * s ** (-(n + 1))


def kernel_egg_axis(mu: float, p):
    """Bergman kernel of the egg ``E_{2mu}`` at ``(0, p)``, ``0 <= p < 1``."""
    if not mu > 0:
        raise ValueError("mu must be positive")
    p = np.asarray(p, dtype=float)
    if np.any((p < 0) | (p >= 1)):
        raise OutsideDomainError("kernel_egg_axis needs 0 <= p < 1")
    s = 1.0 - p * p
    out = (mu - 1.0) / (math.pi ** 2 * mu) / s ** 2 + 2.0 / (math.pi ** 2 * mu) / s ** 3
    return out[()] if isinstance(out, np.ndarray) else out


def kernel_siegel(n: int, z):
    """Kernel of ``{2 Re z_n + |'z|^2 < 0}`` via the Cayley transform."""
    z = as_point(z, n)
    if np.any(~contains(DomainSpec.siegel(n), z)):
        raise OutsideDomainError("point is outside the Siegel domain")
    psi = Cayley(n)
    return kernel_ball(n, psi(z)) * np.abs(psi.det(z)) ** 2


@lru_cache(maxsize=None)
def _log_egg_moment(mu: float, a: int, b: int) -> float:
    # (pi^2/mu) Gamma(a+1) Gamma((b+1)/mu) / Gamma(a + 2 + (b+1)/mu)
    c = (b + 1) / mu
    return 2 * math.log(math.pi) - math.log(mu) + gammaln(a + 1) + gammaln(c) - gammaln(a + 2 + c)


def egg_moment(mu: float, a: int, b: int) -> float:
    """``int_{E_2mu} |z1|^{2a} |z2|^{2b} dlambda``.

    Polar coordinates and ``s = r1^2``, ``t = r2^{2mu}`` turn the integral
    into a Dirichlet integral over the simplex ``s + t < 1``.  The ball is
    ``mu = 1``.
    """
    return math.exp(_log_egg_moment(float(mu), int(a), int(b)))


def _moment_table(spec: DomainSpec, max_degree: int) -> np.ndarray:
    mu = 1.0 if spec.variant == "ball" else spec.mu
    logm = np.full((max_degree + 1, max_degree + 1), np.inf)
    for a in range(max_degree + 1):
        for b in range(max_degree + 1 - a):
            logm[a, b] = _log_egg_moment(mu, a, b)
    return logm


def reinhardt_kernel(spec: DomainSpec, z, max_degree: int = DEFAULT_MAX_DEGREE,
                     strict: bool = False) -> float:
    """Truncated monomial-series kernel of a complete Reinhardt domain in C^2.

    Sums over multi-indices with ``|alpha| <= max_degree``.  If the last
    total-degree shell contributes more than ``1e-3`` of the partial sum a
    :class:`ConvergenceWarning` is issued (or raised when ``strict``).
    """
    if not spec.is_reinhardt or spec.n != 2:
        raise CapabilityError(f"series kernel needs a Reinhardt domain in C^2 (ball or egg), not {spec!r}")
    z = as_point(z, 2)
    if not contains(spec, z):
        raise OutsideDomainError(f"{z} is outside {spec!r}")
    logm = _moment_table(spec, max_degree)
    r1, r2 = abs(z[0]), abs(z[1])
    a = np.arange(max_degree + 1)[:, None]
    b = np.arange(max_degree + 1)[None, :]
    with np.errstate(divide="ignore"):
        logz = (2 * a * np.log(r1) if r1 > 0 else np.where(a == 0, 0.0, -np.inf)) + \
               (2 * b * np.log(r2) if r2 > 0 else np.where(b == 0, 0.0, -np.inf))
    terms = np.exp(logz - logm)
    total = float(terms.sum())
    last = float(terms[(a + b) == max_degree].sum())
    if last > 1e-3 * total:
        msg = f"series kernel not converged at degree {max_degree}: last shell {last:.3e} of {total:.3e}"
        if strict:
            raise ArithmeticError(msg)
        warnings.warn(msg, ConvergenceWarning, stacklevel=2)
    return total


@dataclass(frozen=True, eq=False)
class KernelOracle:
    """Bergman kernel of a domain, evaluated on the diagonal.

    ``method`` is ``"closed_form"``, ``"reinhardt_series"`` or ``"pullback"``.
    A pullback oracle evaluates ``K_base(map(z)) |det map'(z)|^2`` where
    ``map`` sends ``spec`` biholomorphically onto the base domain.
    """

    spec: DomainSpec
    method: str = "closed_form"
    max_degree: int = DEFAULT_MAX_DEGREE
    map: HoloMap | None = None
    base: "KernelOracle | None" = None

    def __call__(self, z) -> float:
        spec = self.spec
        z = as_point(z, spec.n)
        if self.method == "pullback":
            return self.base(self.map(z)) * abs(self.map.det(z)) ** 2
        if self.method == "reinhardt_series":
            return reinhardt_kernel(spec, z, self.max_degree)
        if spec.variant == "ball":
            return kernel_ball(spec.n, z)
        if spec.variant == "siegel":
            return kernel_siegel(spec.n, z)
        if spec.variant == "egg":
            if abs(z[0]) > 0:
                raise CapabilityError(
                    "closed-form egg kernel is only available on the axis z1 = 0; "
                    "use method='reinhardt_series' elsewhere")
            return kernel_egg_axis(spec.mu, abs(z[1]))
        raise CapabilityError(f"no closed-form kernel for {spec!r}")


def kernel_oracle(spec: DomainSpec, method: str | None = None, **kw) -> KernelOracle:
    """Default kernel oracle for a domain; scaled domains become pullbacks."""
    if spec.variant == "scaled":
        return KernelOracle(spec, "pullback", map=spec.map, base=kernel_oracle(spec.base, method, **kw))
    return KernelOracle(spec, method or "closed_form", **kw)


@dataclass
class ConvergenceTable:
    """Rows ``(j, kernel, limit, abs_err)`` of a kernel-stability run."""

    rows: list = field(default_factory=list)
    monotone_ok: bool = True
    converged: bool = False
    tolerance: float = 1e-3

    @property
    def final_error(self) -> float:
        return self.rows[-1][3]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["j", "kernel", "limit", "abs_err"])
        for j, k, lim, err in self.rows:
            w.writerow([j, repr(k), repr(lim), repr(err)])
        return buf.getvalue()


def ramadanov_run(sequence, limit: KernelOracle, w, reference: KernelOracle | None = None,
                  tol: float = 1e-3) -> ConvergenceTable:
    """Evaluate a sequence of kernels at ``w`` against the limit kernel.

    ``reference`` is the kernel of a fixed relatively compact subdomain of
    the limit; inclusion reverses kernels, so every sequence value must be
    bounded by it.  ``converged`` records whether the final discrepancy is
    below ``tol``.  Items of ``sequence`` are oracles (indexed from 1) or
    ``(j, oracle)`` pairs.
    """
    w = as_point(w)
    k_lim = float(limit(w))
    k_ref = float(reference(w)) if reference is not None else math.inf
    table = ConvergenceTable(tolerance=tol)
    items = [it if isinstance(it, tuple) else (i, it) for i, it in enumerate(sequence, start=1)]
    for j, oracle in items:
        if not contains(oracle.spec, w):
            raise OutsideDomainError(f"{w} is outside domain number {j} of the sequence")
        k = float(oracle(w))
        if k > k_ref * (1 + 1e-12):
            table.monotone_ok = False
        table.rows.append((j, k, k_lim, abs(k - k_lim)))
    table.converged = bool(table.rows) and table.final_error < tol
    return table


def inflating_ball_family(j_max: int, n: int = 2, j_min: int = 1) -> list[tuple[int, KernelOracle]]:
    """Kernels of ``(1 + 1/j) B^n`` for ``j = j_min..j_max``."""
    ball = DomainSpec.ball(n)
    out = []
    for j in range(j_min, j_max + 1):
        r = 1.0 + 1.0 / j
        spec = DomainSpec.scaled(ball, homothety(np.zeros(n), 1.0 / r))
        out.append((j, kernel_oracle(spec)))
    return out


def translated_ball_family(j_max: int, v=(0.0, 1.0), j_min: int = 2) -> list[tuple[int, KernelOracle]]:
    """Kernels of ``B^n + v/j`` for ``j = j_min..j_max``.

    With ``|v| = 1`` the first translate has the origin on its boundary,
    hence the default ``j_min = 2``.
    """
    v = as_point(v)
    ball = DomainSpec.ball(v.size)
    return [(j, kernel_oracle(DomainSpec.scaled(ball, translation(-v / j))))
            for j in range(j_min, j_max + 1)]

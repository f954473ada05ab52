"""
Holomorphic maps used by the scaling method.

Every map is an immutable value exposing evaluation, the complex Jacobian
matrix, its determinant and (where it exists in closed form) the inverse.
Evaluation is vectorized over leading axes: ``z`` of shape ``(..., n)``
gives an image of the same shape and a Jacobian of shape ``(..., n, n)``.

Derivatives are coded in closed form.  Finite differences appear only in
:func:`taylor_coefficients`, which tests use as an independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domains import DomainSpec, as_point, defining_value
from .errors import DegenerateLeviFormError, OutsideDomainError, PoleError

__all__ = [
    "HoloMap",
    "Affine",
    "Cayley",
    "CayleyInverse",
    "QuadricShear",
    "Dilation",
    "Composition",
    "PinchukData",
    "cayley",
    "cayley_inverse",
    "jacobian_det",
    "homothety",
    "dilation",
    "translation",
    "pinchuk_normalize",
    "taylor_coefficients",
]

_POLE_TOL = 1e-14


def _c2pair(x):
    return [float(np.real(x)), float(np.imag(x))]


def _mat2json(m):
    return [[_c2pair(x) for x in row] for row in np.asarray(m)]


def _json2mat(rows):
    return np.array([[complex(*x) for x in row] for row in rows], dtype=complex)


class HoloMap:
    """Base class for holomorphic maps C^n -> C^n."""

    n: int

    def __call__(self, z):
        raise NotImplementedError

    def jacobian(self, z):
        raise NotImplementedError

    def det(self, z):
        return np.linalg.det(self.jacobian(z))

    def inverse(self) -> "HoloMap":
        raise NotImplementedError(f"{type(self).__name__} has no closed-form inverse")

    def then(self, other: "HoloMap") -> "Composition":
        """``other o self``."""
        return Composition((self, other))

    def to_dict(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def from_dict(d: dict) -> "HoloMap":
        kind = d["variant"]
        if kind == "affine":
            return Affine(_json2mat(d["linear"]), np.array([complex(*x) for x in d["offset"]]))
        if kind == "cayley":
            return Cayley(int(d["n"]))
        if kind == "cayley_inverse":
            return CayleyInverse(int(d["n"]))
        if kind == "quadric":
            return QuadricShear(_json2mat(d["q"]))
        if kind == "dilation":
            return Dilation(float(d["delta"]), int(d["n"]))
        if kind == "composition":
            return Composition(tuple(HoloMap.from_dict(m) for m in d["maps"]))
        raise ValueError(f"unknown map variant {kind!r}")


@dataclass(frozen=True, eq=False)
class Affine(HoloMap):
    """``z -> linear @ z + offset`` with invertible ``linear``."""

    linear: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        lin = np.array(self.linear, dtype=complex)
        off = np.array(self.offset, dtype=complex).reshape(-1)
        if lin.shape != (off.size, off.size):
            raise ValueError("linear part must be n x n with n = len(offset)")
        if abs(np.linalg.det(lin)) < 1e-300:
            raise ValueError("affine map has singular linear part")
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "offset", off)

    @property
    def n(self):
        return self.offset.size

    def __call__(self, z):
        z = as_point(z, self.n)
        return z @ self.linear.T + self.offset

    def jacobian(self, z):
        z = as_point(z, self.n)
        return np.broadcast_to(self.linear, z.shape[:-1] + (self.n, self.n)).copy()

    def det(self, z):
        z = as_point(z, self.n)
        d = np.linalg.det(self.linear)
        return np.full(z.shape[:-1], d)[()] if z.ndim > 1 else d

    def inverse(self):
        inv = np.linalg.inv(self.linear)
        return Affine(inv, -inv @ self.offset)

    def to_dict(self):
        return {"variant": "affine", "linear": _mat2json(self.linear),
                "offset": [_c2pair(x) for x in self.offset]}


@dataclass(frozen=True, eq=False)
class Cayley(HoloMap):
    """Biholomorphism from the Siegel domain onto the unit ball.

    ``('z, z_n) -> (sqrt(2) 'z / (1 - z_n), (1 + z_n) / (1 - z_n))``
    """

    n: int = 2

    def _denominator(self, z):
        d = 1.0 - z[..., -1]
        if np.any(np.abs(d) < _POLE_TOL):
            raise PoleError("Cayley transform has a pole at z_n = 1")
        return d

    def __call__(self, z):
        z = as_point(z, self.n)
        d = self._denominator(z)
        out = np.empty_like(z)
        out[..., :-1] = math.sqrt(2) * z[..., :-1] / d[..., None]
        out[..., -1] = (1.0 + z[..., -1]) / d
        return out

    def jacobian(self, z):
        z = as_point(z, self.n)
        d = self._denominator(z)
        n = self.n
        J = np.zeros(z.shape[:-1] + (n, n), dtype=complex)
        idx = np.arange(n - 1)
        J[..., idx, idx] = (math.sqrt(2) / d)[..., None]
        J[..., :-1, -1] = math.sqrt(2) * z[..., :-1] / (d * d)[..., None]
        J[..., -1, -1] = 2.0 / (d * d)
        return J

    def det(self, z):
        z = as_point(z, self.n)
        d = self._denominator(z)
        return (math.sqrt(2) / d) ** (self.n - 1) * 2.0 / (d * d)

    def inverse(self):
        return CayleyInverse(self.n)

    def to_dict(self):
        return {"variant": "cayley", "n": self.n}


@dataclass(frozen=True, eq=False)
class CayleyInverse(HoloMap):
    """Inverse Cayley transform, unit ball onto the Siegel domain."""

    n: int = 2

    def _denominator(self, w):
        d = w[..., -1] + 1.0
        if np.any(np.abs(d) < _POLE_TOL):
            raise PoleError("inverse Cayley transform has a pole at w_n = -1")
        return d

    def __call__(self, w):
        w = as_point(w, self.n)
        d = self._denominator(w)
        out = np.empty_like(w)
        out[..., :-1] = math.sqrt(2) * w[..., :-1] / d[..., None]
        out[..., -1] = (w[..., -1] - 1.0) / d
        return out

    def jacobian(self, w):
        w = as_point(w, self.n)
        d = self._denominator(w)
        n = self.n
        J = np.zeros(w.shape[:-1] + (n, n), dtype=complex)
        idx = np.arange(n - 1)
        J[..., idx, idx] = (math.sqrt(2) / d)[..., None]
        J[..., :-1, -1] = -math.sqrt(2) * w[..., :-1] / (d * d)[..., None]
        J[..., -1, -1] = 2.0 / (d * d)
        return J

    def det(self, w):
        w = as_point(w, self.n)
        d = self._denominator(w)
        return (math.sqrt(2) / d) ** (self.n - 1) * 2.0 / (d * d)

    def inverse(self):
        return Cayley(self.n)

    def to_dict(self):
        return {"variant": "cayley_inverse", "n": self.n}


@dataclass(frozen=True, eq=False)
class QuadricShear(HoloMap):
    """``z_n -> z_n + 'z^T q 'z``; the other coordinates are unchanged.

    ``q`` is a symmetric ``(n-1, n-1)`` matrix acting on the tangential
    coordinates only, which keeps the inverse polynomial.
    """

    q: np.ndarray

    def __post_init__(self):
        q = np.array(self.q, dtype=complex)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise ValueError("q must be a square matrix")
        object.__setattr__(self, "q", 0.5 * (q + q.T))

    @property
    def n(self):
        return self.q.shape[0] + 1

    def _quad(self, zt):
        return np.einsum("...i,ij,...j->...", zt, self.q, zt)

    def __call__(self, z):
        z = as_point(z, self.n)
        out = z.copy()
        out[..., -1] = z[..., -1] + self._quad(z[..., :-1])
        return out

    def jacobian(self, z):
        z = as_point(z, self.n)
        J = np.zeros(z.shape[:-1] + (self.n, self.n), dtype=complex)
        J[..., np.arange(self.n), np.arange(self.n)] = 1.0
        J[..., -1, :-1] = 2.0 * z[..., :-1] @ self.q.T
        return J

    def det(self, z):
        z = as_point(z, self.n)
        return np.ones(z.shape[:-1], dtype=complex)[()] if z.ndim > 1 else 1.0 + 0j

    def inverse(self):
        return QuadricShear(-self.q)

    def to_dict(self):
        return {"variant": "quadric", "q": _mat2json(self.q)}


@dataclass(frozen=True, eq=False)
class Dilation(HoloMap):
    """Anisotropic dilation ``('z, z_n) -> ('z / sqrt(delta), z_n / delta)``."""

    delta: float
    n: int = 2

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("dilation parameter must be positive")

    def _scales(self):
        s = np.full(self.n, 1.0 / math.sqrt(self.delta))
        s[-1] = 1.0 / self.delta
        return s

    def __call__(self, z):
        z = as_point(z, self.n)
        return z * self._scales()

    def jacobian(self, z):
        z = as_point(z, self.n)
        return np.broadcast_to(np.diag(self._scales()).astype(complex),
                               z.shape[:-1] + (self.n, self.n)).copy()

    def det(self, z):
        z = as_point(z, self.n)
        d = complex(self.delta ** (-(self.n + 1) / 2.0))
        return np.full(z.shape[:-1], d)[()] if z.ndim > 1 else d

    def inverse(self):
        return Dilation(1.0 / self.delta, self.n)

    def to_dict(self):
        return {"variant": "dilation", "delta": self.delta, "n": self.n}


@dataclass(frozen=True, eq=False)
class Composition(HoloMap):
    """Maps applied in order: ``maps[0]`` first, ``maps[-1]`` last."""

    maps: tuple = field(default_factory=tuple)

    def __post_init__(self):
        flat = []
        for m in self.maps:
            flat.extend(m.maps if isinstance(m, Composition) else (m,))
        if not flat:
            raise ValueError("empty composition")
        if len({m.n for m in flat}) != 1:
            raise ValueError("composed maps must share a dimension")
        object.__setattr__(self, "maps", tuple(flat))

    @property
    def n(self):
        return self.maps[0].n

    def __call__(self, z):
        for m in self.maps:
            z = m(z)
        return z

    def jacobian(self, z):
        z = as_point(z, self.n)
        J = None
        for m in self.maps:
            Jm = m.jacobian(z)
            J = Jm if J is None else Jm @ J
            z = m(z)
        return J

    def det(self, z):
        z = as_point(z, self.n)
        d = 1.0
        for m in self.maps:
            d = d * m.det(z)
            z = m(z)
        return d

    def inverse(self):
        return Composition(tuple(m.inverse() for m in reversed(self.maps)))

    def to_dict(self):
        return {"variant": "composition", "maps": [m.to_dict() for m in self.maps]}


def cayley(z):
    """Cayley transform of a point or stack of points."""
    z = as_point(z)
    return Cayley(z.shape[-1])(z)


def cayley_inverse(w):
    w = as_point(w)
    return CayleyInverse(w.shape[-1])(w)


def jacobian_det(map: HoloMap, z):
    """Complex Jacobian determinant of ``map`` at ``z``."""
    return map.det(z)


def translation(offset) -> Affine:
    offset = as_point(offset)
    return Affine(np.eye(offset.size), offset)


def homothety(q, r: float) -> Affine:
    """Homothety ``v -> r (v - q) + q`` centred at ``q``.

    For ``q = 0`` this is plain scaling, which is the only case the
    kernel-stability experiments use.
    """
    if not r > 0:
        raise ValueError("homothety ratio must be positive")
    q = as_point(q)
    return Affine(r * np.eye(q.size), q - r * q)


def dilation(delta: float, n: int = 2) -> Dilation:
    return Dilation(delta, n)


# ---------------------------------------------------------------------------
# normalization at a boundary point
# ---------------------------------------------------------------------------

def _wirtinger_data(spec: DomainSpec, zeta: np.ndarray):
    """Gradient ``a_k = dr/dz_k`` and second derivatives at ``zeta``.

    Returns ``(a, P, L)`` with ``P_jk = d^2 r / dz_j dz_k`` and
    ``L_jk = d^2 r / dz_j d(conj z_k)``.
    """
    n = spec.n
    if spec.variant == "ball":
        return zeta.conj(), np.zeros((n, n), complex), np.eye(n, dtype=complex)
    if spec.variant == "siegel":
        a = zeta.conj().copy()
        a[-1] = 1.0
        L = np.eye(n, dtype=complex)
        L[-1, -1] = 0.0
        return a, np.zeros((n, n), complex), L
    if spec.variant == "egg":
        mu = spec.mu
        z1, z2 = zeta
        s = abs(z2) ** 2
        if mu != 1.0 and abs(z2) < 1e-8:
            raise DegenerateLeviFormError(
                f"{spec!r} is not strongly pseudoconvex on the circle z2 = 0")
        sm1 = s ** (mu - 1.0) if mu != 1.0 else 1.0
        a = np.array([np.conj(z1), mu * sm1 * np.conj(z2)])
        P = np.zeros((2, 2), complex)
        if mu != 1.0:
            P[1, 1] = mu * (mu - 1.0) * s ** (mu - 2.0) * np.conj(z2) ** 2
        L = np.diag([1.0, mu * mu * sm1]).astype(complex)
        return a, P, L
    raise ValueError(f"normalization is implemented for ball, egg and Siegel domains, not {spec!r}")


def _unitary_with_last_column(e: np.ndarray) -> np.ndarray:
    n = e.size
    if np.allclose(e[:-1], 0.0, atol=1e-15):
        V = np.eye(n, dtype=complex)
        V[-1, -1] = e[-1] / abs(e[-1])
        return V
    Q, _ = np.linalg.qr(np.column_stack([e, np.eye(n, dtype=complex)]))
    V = np.column_stack([Q[:, 1:n], e])
    return V


@dataclass(frozen=True, eq=False)
class PinchukData:
    """Second-order normalization of a domain at a boundary point.

    After ``normalization`` the domain near the origin is
    ``{2 Re(z_n + Q(z)) + H(z) + O(|z|^3) < 0}`` with
    ``Q(z) = sum q_jk z_j z_k`` and ``H(z) = sum h_jk z_j conj(z_k)``.
    ``scale`` is ``|dr(zeta)|``; the normalized defining function is the
    pulled-back defining function divided by it.
    """

    spec: DomainSpec
    boundary_point: np.ndarray
    normalization: HoloMap
    hermitian_form: np.ndarray
    quadratic_form: np.ndarray
    scale: float

    def normalized_defining(self, x):
        z = self.normalization.inverse()(x)
        return defining_value(self.spec, z) / self.scale

    def residues(self) -> tuple[float, float]:
        """``(max |Q('z, 0)|, max |H('z, 0) - |'z|^2|)`` coefficient residues."""
        k = self.spec.n - 1
        q_res = float(np.max(np.abs(self.quadratic_form[:k, :k]), initial=0.0))
        h_res = float(np.max(np.abs(self.hermitian_form[:k, :k] - np.eye(k)), initial=0.0))
        return q_res, h_res


def pinchuk_normalize(spec: DomainSpec, zeta, boundary_tol: float = 1e-9) -> PinchukData:
    """Normalize ``spec`` at the strongly pseudoconvex boundary point ``zeta``.

    The map is translation to the origin, a unitary rotation taking the
    outer normal to the ``Re z_n`` axis, a quadric shear in ``z_n`` that
    removes the tangential holomorphic quadratic terms, and a linear change
    of the tangential coordinates diagonalizing the Levi form.  The defining
    function is divided by ``|dr|`` so that its linear part is ``2 Re z_n``;
    every step but the shear and the Levi rescaling is an isometry.
    """
    zeta = as_point(zeta, spec.n)
    if abs(defining_value(spec, zeta)) > boundary_tol:
        raise OutsideDomainError(f"{zeta} is not on the boundary of {spec!r}")
    n = spec.n
    a, P, L = _wirtinger_data(spec, zeta)
    scale = float(np.linalg.norm(a))
    e = a.conj() / scale
    V = _unitary_with_last_column(e)

    Pu = V.T @ P @ V / scale
    Lu = V.T @ L @ V.conj() / scale

    shear_q = 0.5 * Pu[:-1, :-1]
    Q = 0.5 * Pu
    Q[:-1, :-1] = 0.0

    levi = Lu[:-1, :-1]
    levi = 0.5 * (levi + levi.conj().T)
    if n > 1 and np.min(np.linalg.eigvalsh(levi)) <= 1e-10:
        raise DegenerateLeviFormError(f"Levi form of {spec!r} at {zeta} is not positive definite")
    D = np.eye(n, dtype=complex)
    if n > 1:
        C = np.linalg.cholesky(levi.conj())
        D[:-1, :-1] = np.linalg.inv(C.conj().T)
    Q = D.T @ Q @ D
    H = D.T @ Lu @ D.conj()

    maps = [Affine(V.conj().T, -V.conj().T @ zeta)]
    if np.any(np.abs(shear_q) > 0):
        maps.append(QuadricShear(shear_q))
    if not np.allclose(D, np.eye(n), atol=0):
        maps.append(Affine(np.linalg.inv(D), np.zeros(n)))
    phi = maps[0] if len(maps) == 1 else Composition(tuple(maps))
    return PinchukData(spec, zeta, phi, H, Q, scale)


def taylor_coefficients(func, n: int, step: float = 1e-3, center=None):
    """Wirtinger Taylor data of a real function at ``center`` (default 0).

    Central differences in the ``2n`` real coordinates with one Richardson
    extrapolation.  Returns ``(a, P, L)`` where ``a_k = df/dz_k``,
    ``P_jk = d^2 f/dz_j dz_k`` and ``L_jk = d^2 f/dz_j d(conj z_k)``, so that
    ``f(c + h) = f(c) + 2 Re(a.h) + Re(h^T P h) + h^T L conj(h) + O(|h|^3)``.
    """
    c = np.zeros(n, complex) if center is None else as_point(center, n)
    m = 2 * n

    def real_basis(i):
        e = np.zeros(n, complex)
        e[i % n] = 1.0 if i < n else 1j
        return e

    basis = [real_basis(i) for i in range(m)]

    def grad_hess(h):
        g = np.zeros(m)
        H = np.zeros((m, m))
        f0 = func(c)
        for i in range(m):
            fp, fm = func(c + h * basis[i]), func(c - h * basis[i])
            g[i] = (fp - fm) / (2 * h)
            H[i, i] = (fp - 2 * f0 + fm) / (h * h)
            for j in range(i + 1, m):
                pts = np.array([c + h * (basis[i] + basis[j]), c + h * (basis[i] - basis[j]),
                                c - h * (basis[i] - basis[j]), c - h * (basis[i] + basis[j])])
                fpp, fpm, fmp, fmm = func(pts)
                H[i, j] = H[j, i] = (fpp - fpm - fmp + fmm) / (4 * h * h)
        return g, H

    g1, H1 = grad_hess(step)
    g2, H2 = grad_hess(step / 2)
    g = (4 * g2 - g1) / 3
    H = (4 * H2 - H1) / 3
    gx, gy = g[:n], g[n:]
    Hxx, Hyy, Hxy = H[:n, :n], H[n:, n:], H[:n, n:]
    a = 0.5 * (gx - 1j * gy)
    P = 0.25 * (Hxx - Hyy - 1j * (Hxy + Hxy.T))
    L = 0.25 * (Hxx + Hyy + 1j * (Hxy - Hxy.T))
    return a, P, L

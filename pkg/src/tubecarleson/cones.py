"""The four concrete symmetric cones: half-line, first octant in R^2, the
3-d Lorentz cone, and the 3-d spherical cone.

Each cone carries a determinant polynomial, an open membership predicate,
a base point, and the pairing under which it is self-dual (the spherical
cone uses the half-weighted pairing <z,t> = (z1 t1 + z2 t2)/2 + z3 t3).
The cone gamma function is defined operationally by its Laplace integral
at the base point and computed by cone-adapted quadrature.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .quadrature import (QuadratureSpec, QuadratureError, gl_nodes,
                         midpoint_nodes, truncation_radius)


class ConeKind(enum.Enum):
    HalfLine = "half-line"
    Octant2 = "octant2"
    Lorentz3 = "lorentz3"
    Spherical3 = "spherical3"


class Pairing(enum.Enum):
    Euclidean = "euclidean"
    SphericalHalf = "spherical-half"


_KIND_DIMS = {
    ConeKind.HalfLine: (1, 1),
    ConeKind.Octant2: (2, 2),
    ConeKind.Lorentz3: (3, 2),
    ConeKind.Spherical3: (3, 2),
}


@dataclass(frozen=True)
class ConeDescriptor:
    kind: ConeKind
    n: int
    r: int
    base_point: np.ndarray
    pairing: Pairing

    def __post_init__(self):
        if _KIND_DIMS[self.kind] != (self.n, self.r):
            raise ValueError(f"(n, r) inconsistent with {self.kind}")
        expected = Pairing.SphericalHalf if self.kind is ConeKind.Spherical3 \
            else Pairing.Euclidean
        if self.pairing is not expected:
            raise ValueError("pairing inconsistent with cone kind")
        e = np.asarray(self.base_point, dtype=float)
        if e.shape != (self.n,):
            raise ValueError("base point has wrong dimension")
        object.__setattr__(self, "base_point", e)
        if not contains(self, e):
            raise ValueError("base point not inside the cone")

    @property
    def nr(self) -> float:
        """n/r, the critical exponent of the cone."""
        return self.n / self.r

    def pairing_diag(self) -> np.ndarray:
        if self.pairing is Pairing.SphericalHalf:
            return np.array([0.5, 0.5, 1.0])
        return np.ones(self.n)

    def pair(self, t, z):
        """<t, z> under the cone's pairing; t real nodes, z may be complex."""
        t = np.asarray(t)
        z = np.asarray(z)
        if self.n == 1:
            return t * z.reshape(-1)[0] if z.size == 1 else t * z
        return (t * self.pairing_diag()) @ z


def half_line() -> ConeDescriptor:
    return ConeDescriptor(ConeKind.HalfLine, 1, 1, np.array([1.0]),
                          Pairing.Euclidean)


def octant2() -> ConeDescriptor:
    return ConeDescriptor(ConeKind.Octant2, 2, 2, np.array([1.0, 1.0]),
                          Pairing.Euclidean)


def lorentz3() -> ConeDescriptor:
    return ConeDescriptor(ConeKind.Lorentz3, 3, 2, np.array([1.0, 0.0, 0.0]),
                          Pairing.Euclidean)


def spherical3() -> ConeDescriptor:
    return ConeDescriptor(ConeKind.Spherical3, 3, 2,
                          np.array([1.0, 1.0, 0.0]), Pairing.SphericalHalf)


def _check_dim(cone: ConeDescriptor, y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if y.shape[-1] != cone.n and not (cone.n == 1 and y.ndim <= 1):
        raise ValueError(f"point dimension {y.shape} mismatches n={cone.n}")
    return y


def det(cone: ConeDescriptor, y) -> np.ndarray | float:
    """Determinant polynomial Delta(y); defined for all real inputs.

    Vectorized over a leading axis: y may be (..., n).
    """
    y = np.asarray(y, dtype=float)
    if cone.kind is ConeKind.HalfLine:
        return y if y.ndim == 0 or y.shape[-1] != 1 else y[..., 0]
    y = _check_dim(cone, y)
    if cone.kind is ConeKind.Octant2:
        return y[..., 0] * y[..., 1]
    if cone.kind is ConeKind.Lorentz3:
        return y[..., 0] ** 2 - y[..., 1] ** 2 - y[..., 2] ** 2
    return y[..., 0] * y[..., 1] - y[..., 2] ** 2


def contains(cone: ConeDescriptor, y) -> np.ndarray | bool:
    """Open-cone membership predicate (strict inequalities)."""
    y = np.asarray(y, dtype=float)
    if cone.kind is ConeKind.HalfLine:
        v = y if y.ndim == 0 or y.shape[-1] != 1 else y[..., 0]
        return v > 0
    y = _check_dim(cone, y)
    if cone.kind is ConeKind.Octant2:
        return (y[..., 0] > 0) & (y[..., 1] > 0)
    if cone.kind is ConeKind.Lorentz3:
        return (y[..., 0] + y[..., 1] > 0) & (det(cone, y) > 0)
    return (y[..., 0] > 0) & (det(cone, y) > 0)


def precedes(cone: ConeDescriptor, x, y) -> np.ndarray | bool:
    """Order relation: x < y iff y - x lies in the open cone."""
    return contains(cone, np.asarray(y, dtype=float) - np.asarray(x, dtype=float))


def lorentz_to_spherical(y) -> np.ndarray:
    """Linear bijection (y1,y2,y3) -> (y1+y2, y1-y2, y3) carrying the
    Lorentz cone onto the spherical cone; preserves the determinant value
    exactly: (y1+y2)(y1-y2) - y3^2 = y1^2 - y2^2 - y3^2."""
    y = np.asarray(y, dtype=float)
    if y.shape[-1] != 3:
        raise ValueError("expected points in R^3")
    out = np.empty_like(y)
    out[..., 0] = y[..., 0] + y[..., 1]
    out[..., 1] = y[..., 0] - y[..., 1]
    out[..., 2] = y[..., 2]
    return out


# ---------------------------------------------------------------------------
# Cone-adapted quadrature
# ---------------------------------------------------------------------------

def min_decay_rate(cone: ConeDescriptor, t) -> float:
    """inf over unit vectors u in the closed cone of <t, u>.

    Positive exactly when t is strictly inside the (self-)dual cone; used to
    pick truncation radii for integrals damped by e^{-<t, y>}.
    """
    t = np.asarray(t, dtype=float)
    if cone.kind is ConeKind.HalfLine:
        return float(t if t.ndim == 0 else t[0])
    if cone.kind is ConeKind.Octant2:
        return float(min(t[0], t[1]))
    # extreme rays, sampled densely
    phi = np.linspace(0.0, 2 * np.pi, 257)
    if cone.kind is ConeKind.Lorentz3:
        rays = np.stack([np.ones_like(phi), np.cos(phi), np.sin(phi)], axis=-1)
    else:
        # boundary of the spherical cone: y1 y2 = y3^2
        u = np.concatenate([np.geomspace(1e-3, 1e3, 200), [1.0]])
        rays = np.stack([u, 1.0 / u, np.ones_like(u)], axis=-1)
        rays = np.concatenate([rays, rays * np.array([1.0, 1.0, -1.0])])
    rays /= np.linalg.norm(rays, axis=-1, keepdims=True)
    pd = cone.pairing_diag()
    return float(np.min(rays @ (pd * t)))


def cone_nodes(cone: ConeDescriptor, radius: float, n_base: int,
               n_fiber: int = 0, n_angle: int = 0, rule: str = "gauss-legendre"):
    """Quadrature nodes and weights for the truncated cone.

    Fiber-adapted: for the rank-2 three-dimensional cones the grid is
    (base grid) x (fiber grid scaled per base point), so fiber integrals
    never sample outside the cone.  Returns (nodes (N, n), weights (N,),
    base_index (N,), base_nodes, base_weights, fiber_weights (N,)).
    """
    ax = midpoint_nodes if rule == "uniform" else gl_nodes
    if cone.kind is ConeKind.HalfLine:
        x, w = ax(n_base, 0.0, radius)
        nodes = x[:, None]
        idx = np.arange(n_base)
        return nodes, w, idx, x, w, np.ones(n_base)
    if cone.kind is ConeKind.Octant2:
        x1, w1 = ax(n_base, 0.0, radius)
        x2, w2 = ax(n_base, 0.0, radius)
        g1, g2 = np.meshgrid(x1, x2, indexing="ij")
        nodes = np.stack([g1.ravel(), g2.ravel()], axis=-1)
        w = np.multiply.outer(w1, w2).ravel()
        idx = np.arange(nodes.shape[0])
        return nodes, w, idx, nodes, w, np.ones(nodes.shape[0])
    n_fiber = n_fiber or n_base
    if cone.kind is ConeKind.Lorentz3:
        n_angle = n_angle or max(8, n_fiber)
        t1, w1 = ax(n_base, 0.0, radius)
        u, wu = ax(n_fiber, 0.0, 1.0)          # rho = u * t1
        th, wth = midpoint_nodes(n_angle, 0.0, 2 * np.pi)
        nb, nf = n_base, n_fiber * n_angle
        nodes = np.empty((nb * nf, 3))
        fib_w = np.empty(nb * nf)
        idx = np.repeat(np.arange(nb), nf)
        rho_u = np.multiply.outer(u, np.ones(n_angle)).ravel()
        cs = np.cos(th)[None, :].repeat(n_fiber, 0).ravel()
        sn = np.sin(th)[None, :].repeat(n_fiber, 0).ravel()
        wf = (np.multiply.outer(wu, wth)).ravel()
        for i, a in enumerate(t1):
            rho = rho_u * a
            sl = slice(i * nf, (i + 1) * nf)
            nodes[sl, 0] = a
            nodes[sl, 1] = rho * cs
            nodes[sl, 2] = rho * sn
            fib_w[sl] = wf * rho * a            # jacobian rho, drho = a du
        w = w1[idx] * fib_w
        return nodes, w, idx, t1, w1, fib_w
    # Spherical3: base (t1, t2) in (0, R)^2, fiber |t3| < sqrt(t1 t2)
    t, wt = ax(n_base, 0.0, radius)
    g1, g2 = np.meshgrid(t, t, indexing="ij")
    base = np.stack([g1.ravel(), g2.ravel()], axis=-1)
    base_w = np.multiply.outer(wt, wt).ravel()
    u, wu = ax(n_fiber, -1.0, 1.0)              # t3 = u * sqrt(t1 t2)
    nb = base.shape[0]
    nodes = np.empty((nb * n_fiber, 3))
    fib_w = np.empty(nb * n_fiber)
    idx = np.repeat(np.arange(nb), n_fiber)
    half = np.sqrt(base[:, 0] * base[:, 1])
    nodes[:, 0] = np.repeat(base[:, 0], n_fiber)
    nodes[:, 1] = np.repeat(base[:, 1], n_fiber)
    nodes[:, 2] = np.tile(u, nb) * np.repeat(half, n_fiber)
    fib_w = np.tile(wu, nb) * np.repeat(half, n_fiber)
    w = base_w[idx] * fib_w
    return nodes, w, idx, base, base_w, fib_w


def integrate_cone(cone: ConeDescriptor, fn, rate,
                   spec: QuadratureSpec = QuadratureSpec(),
                   radius: float | None = None):
    """Integrate fn over the cone, truncated adaptively.

    rate: exponential decay functional (vector, or scalar rate along the
    base-point direction); the cutoff is chosen so the exponential envelope
    tail is below 0.1 * tolerance.  fn maps (N, n) nodes -> (N,).
    """
    if radius is None:
        if np.ndim(rate) == 0:
            c = float(rate)
        else:
            c = min_decay_rate(cone, rate)
        if c <= 0:
            raise DivergentIntegralError("integrand has no exponential decay "
                                         "inside the cone")
        radius = truncation_radius(c, spec.tolerance)
    n = spec.points_per_axis
    prev = None
    for _ in range(spec.max_refinements + 1):
        nodes, w, *_ = cone_nodes(cone, radius, n, rule=spec.rule)
        cur = np.sum(w * np.asarray(fn(nodes if cone.n > 1 else nodes[:, 0])))
        if prev is not None:
            err = abs(cur - prev)
            if err <= spec.tolerance * (1.0 + abs(cur)):
                return cur, err
        prev = cur
        n = int(n * 1.6) + 1
    raise QuadratureError("cone quadrature did not converge", value=cur,
                          estimate=abs(cur - prev))


def gamma_cone(cone: ConeDescriptor, nu: float,
               spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Cone gamma function, by its defining Laplace integral at the base
    point: Gamma(nu) = int_cone e^{-<e,y>} Delta(y)^{nu - n/r} dy.

    Requires nu > n/r - 1 (else the integral diverges at the boundary).
    """
    if nu <= cone.nr - 1:
        raise DivergentIntegralError(
            f"gamma_cone requires nu > n/r - 1 = {cone.nr - 1}")
    e = cone.base_point
    p = nu - cone.nr
    if cone.kind is ConeKind.HalfLine:
        # substitute t = u^2 to smooth the endpoint power t^{nu-1}
        from .quadrature import integrate
        radius = truncation_radius(1.0, spec.tolerance)
        val, _ = integrate(lambda u: 2.0 * u ** (2 * nu - 1) * np.exp(-u * u),
                           [(0.0, np.sqrt(radius))], spec)
        return float(val)

    def fn(y):
        d = det(cone, y)
        d = np.where(d > 0, d, np.nan)  # boundary nodes never sampled by GL
        return np.exp(-cone.pair(y, e)) * d ** p

    val, _ = integrate_cone(cone, fn, rate=e, spec=spec)
    return float(val)


def integrate_lorentz_order_interval(fn, scale: float = 1.0,
                                     spec: QuadratureSpec = QuadratureSpec()):
    """Integrate fn over the order interval {y in Lorentz3 : y < s*e},
    e = (1,0,0): the region rho < min(y1, s - y1), split at y1 = s/2 so
    each piece has a smooth fiber-radius parametrization."""
    s = float(scale)
    n = spec.points_per_axis
    prev = None
    for _ in range(spec.max_refinements + 1):
        total = 0.0
        for (a, b, rad) in ((0.0, s / 2, lambda y1: y1),
                            (s / 2, s, lambda y1: s - y1)):
            y1, w1 = gl_nodes(n, a, b)
            u, wu = gl_nodes(n, 0.0, 1.0)
            th, wth = midpoint_nodes(max(8, n), 0.0, 2 * np.pi)
            R = rad(y1)
            # nodes: (i base) x (j radial) x (k angle)
            rho = np.multiply.outer(R, u)                       # (nb, nr)
            pts = np.empty((len(y1), len(u), len(th), 3))
            pts[..., 0] = y1[:, None, None]
            pts[..., 1] = rho[:, :, None] * np.cos(th)[None, None, :]
            pts[..., 2] = rho[:, :, None] * np.sin(th)[None, None, :]
            w = (w1[:, None, None] * (wu * R[:, None] if R.ndim else wu)[..., None]
                 * wth[None, None, :]) * rho[:, :, None]
            total += np.sum(w * np.asarray(fn(pts.reshape(-1, 3))).reshape(w.shape))
        if prev is not None and abs(total - prev) <= spec.tolerance * (1 + abs(total)):
            return total, abs(total - prev)
        prev = total
        n = int(n * 1.6) + 1
    raise QuadratureError("order-interval quadrature did not converge",
                          value=total, estimate=abs(total - prev))

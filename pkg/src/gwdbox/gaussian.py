"""Oriented boxes as 2-D Gaussians and the Wasserstein distance between them.

A box with center (x, y), extents (w, h) and angle theta maps to the
Gaussian with mean (x, y) and covariance root

    sigma_root = R(theta) . diag(w/2, h/2) . R(theta)^T

The squared 2-Wasserstein distance between two such Gaussians is

    d^2 = |m1 - m2|^2 + tr(S1 + S2 - 2 (S1^1/2 S2 S1^1/2)^1/2)

with S_i the covariances. All matrix work is closed-form 2x2; an
eigendecomposition-based evaluation is kept in the test suite as an
independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import HALF_PI, OrientedBox


class NotSPD(ValueError):
    """Raised when a matrix square root is requested for a non-SPD matrix."""


class NotCommutative(ValueError):
    """Raised when the axis-aligned closed form is applied to rotated boxes."""


@dataclass(frozen=True)
class SymMat2:
    """Symmetric 2x2 matrix [[a, b], [b, d]]."""

    a: float
    b: float
    d: float

    def trace(self) -> float:
        return self.a + self.d

    def det(self) -> float:
        return self.a * self.d - self.b * self.b

    def square(self) -> "SymMat2":
        return SymMat2(self.a * self.a + self.b * self.b,
                       self.b * (self.a + self.d),
                       self.b * self.b + self.d * self.d)

    def inverse(self) -> "SymMat2":
        det = self.det()
        if det == 0.0:
            raise ZeroDivisionError("singular matrix")
        return SymMat2(self.d / det, -self.b / det, self.a / det)

    def sandwich(self, inner: "SymMat2") -> "SymMat2":
        """Return self . inner . self (symmetric for symmetric inputs)."""
        p, q, r = self.a, self.b, self.d
        a, b, d = inner.a, inner.b, inner.d
        ta, tb = p * a + q * b, p * b + q * d
        tc, td = q * a + r * b, q * b + r * d
        return SymMat2(ta * p + tb * q, ta * q + tb * r, tc * q + td * r)

    def frobenius(self) -> float:
        return math.sqrt(self.a * self.a + 2.0 * self.b * self.b + self.d * self.d)


IDENTITY2 = SymMat2(1.0, 0.0, 1.0)


@dataclass(frozen=True)
class Gaussian2:
    """2-D Gaussian given by its mean and symmetric PD covariance root."""

    mean: tuple[float, float]
    sigma_root: SymMat2

    def sigma(self) -> SymMat2:
        return self.sigma_root.square()


def gaussian_from_params(x: float, y: float, w: float, h: float, theta: float) -> Gaussian2:
    """Gaussian for a raw parameter quintuple, without box validation.

    The angle may lie outside any convention range; the Gaussian map is
    periodic in quarter turns combined with extent swaps, so equivalent
    representations give the same distribution.
    """
    c, s = math.cos(theta), math.sin(theta)
    hw, hh = w / 2.0, h / 2.0
    a = hw * c * c + hh * s * s
    b = (hw - hh) * c * s
    d = hw * s * s + hh * c * c
    return Gaussian2((x, y), SymMat2(a, b, d))


def box_to_gaussian(box: OrientedBox) -> Gaussian2:
    """Gaussian model of an oriented box: mean at the center, covariance
    root with eigenvalues w/2 and h/2 along the box axes."""
    return gaussian_from_params(box.x, box.y, box.w, box.h, box.theta)


def sqrtm_spd2(m: SymMat2) -> SymMat2:
    """Principal square root of a symmetric positive-definite 2x2 matrix.

    Closed form: sqrt(M) = (M + sqrt(det M) I) / sqrt(tr M + 2 sqrt(det M)).
    Branch-free and smooth in the entries, including at equal eigenvalues.
    """
    det = m.det()
    tr = m.trace()
    if det <= 0.0 or tr <= 0.0:
        raise NotSPD(f"matrix is not SPD (trace={tr}, det={det})")
    s = math.sqrt(det)
    t = math.sqrt(tr + 2.0 * s)
    return SymMat2((m.a + s) / t, m.b / t, (m.d + s) / t)


def gwd_squared(g1: Gaussian2, g2: Gaussian2) -> float:
    """Squared Gaussian Wasserstein distance between two 2-D Gaussians.

    Symmetric in its arguments; tiny negative values from floating-point
    cancellation are clamped to zero.
    """
    dx = g1.mean[0] - g2.mean[0]
    dy = g1.mean[1] - g2.mean[1]
    sig1 = g1.sigma()
    sig2 = g2.sigma()
    cross = sqrtm_spd2(g1.sigma_root.sandwich(sig2))
    d2 = dx * dx + dy * dy + sig1.trace() + sig2.trace() - 2.0 * cross.trace()
    return d2 if d2 > 0.0 else 0.0


def gwd_squared_params(p1: tuple[float, float, float, float, float],
                       p2: tuple[float, float, float, float, float]) -> float:
    """Squared distance for raw parameter quintuples (x, y, w, h, theta)."""
    return gwd_squared(gaussian_from_params(*p1), gaussian_from_params(*p2))


def gwd_squared_commutative(b1: OrientedBox, b2: OrientedBox) -> float:
    """Axis-aligned closed form: the covariances commute and the distance
    collapses to a scaled l2 norm on the raw parameters.

    Both boxes must have theta within 1e-9 of a multiple of pi.
    """
    for b in (b1, b2):
        if abs(b.theta - math.pi * round(b.theta / math.pi)) > 1e-9:
            raise NotCommutative(f"box is not axis-aligned: theta={b.theta}")
    dw = b1.w - b2.w
    dh = b1.h - b2.h
    return (b1.x - b2.x) ** 2 + (b1.y - b2.y) ** 2 + (dw * dw + dh * dh) / 4.0


def gwd_gradient(b1: OrientedBox, b2: OrientedBox) -> tuple[float, float, float, float, float]:
    """Analytic gradient of the squared distance in b1's raw parameters."""
    return gwd_gradient_params(b1.params(), b2.params())


def gwd_gradient_params(p1: tuple[float, float, float, float, float],
                        p2: tuple[float, float, float, float, float]
                        ) -> tuple[float, float, float, float, float]:
    """Gradient of ``gwd_squared_params(p1, p2)`` with respect to p1.

    Uses the scalar reduction
        d^2 = |dm|^2 + (w1^2 + h1^2 + w2^2 + h2^2)/4 - 2 sqrt(G),
        G = tr(S1 S2) + 2 sqrt(det S1 det S2),
    whose radicand G is polynomial in the parameters and strictly positive,
    so the gradient is defined everywhere (including w = h).
    """
    x1, y1, w1, h1, t1 = p1
    x2, y2, w2, h2, t2 = p2
    c1, s1 = math.cos(t1), math.sin(t1)
    c2, s2 = math.cos(t2), math.sin(t2)
    cs1, cs2 = c1 * s1, c2 * s2

    # covariance entries (squares of the half extents)
    qw1, qh1 = w1 * w1 / 4.0, h1 * h1 / 4.0
    qw2, qh2 = w2 * w2 / 4.0, h2 * h2 / 4.0
    a1 = qw1 * c1 * c1 + qh1 * s1 * s1
    b1v = (qw1 - qh1) * cs1
    d1 = qw1 * s1 * s1 + qh1 * c1 * c1
    a2 = qw2 * c2 * c2 + qh2 * s2 * s2
    b2v = (qw2 - qh2) * cs2
    d2v = qw2 * s2 * s2 + qh2 * c2 * c2

    big_g = a1 * a2 + 2.0 * b1v * b2v + d1 * d2v + w1 * h1 * w2 * h2 / 8.0
    inv_t = 1.0 / math.sqrt(big_g)

    da1_dw = (w1 / 2.0) * c1 * c1
    db1_dw = (w1 / 2.0) * cs1
    dd1_dw = (w1 / 2.0) * s1 * s1
    da1_dh = (h1 / 2.0) * s1 * s1
    db1_dh = -(h1 / 2.0) * cs1
    dd1_dh = (h1 / 2.0) * c1 * c1
    da1_dt = -2.0 * (qw1 - qh1) * cs1
    db1_dt = (qw1 - qh1) * (c1 * c1 - s1 * s1)
    dd1_dt = 2.0 * (qw1 - qh1) * cs1

    dg_dw = a2 * da1_dw + 2.0 * b2v * db1_dw + d2v * dd1_dw + h1 * w2 * h2 / 8.0
    dg_dh = a2 * da1_dh + 2.0 * b2v * db1_dh + d2v * dd1_dh + w1 * w2 * h2 / 8.0
    dg_dt = a2 * da1_dt + 2.0 * b2v * db1_dt + d2v * dd1_dt

    return (2.0 * (x1 - x2),
            2.0 * (y1 - y2),
            w1 / 2.0 - dg_dw * inv_t,
            h1 / 2.0 - dg_dh * inv_t,
            -dg_dt * inv_t)


def transport_map(g1: Gaussian2, g2: Gaussian2) -> SymMat2:
    """Linear map A carrying the first Gaussian onto the second.

    A = S1^-1/2 (S1^1/2 S2 S1^1/2)^1/2 S1^-1/2 is symmetric and satisfies
    A . S1 . A^T = S2; its trace against S1 equals the cross term of the
    Wasserstein distance.
    """
    root_inv = g1.sigma_root.inverse()
    cross = sqrtm_spd2(g1.sigma_root.sandwich(g2.sigma()))
    return root_inv.sandwich(cross)

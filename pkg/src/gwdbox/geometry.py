"""Rotated rectangles: angle conventions, exact IoU, and a Monte-Carlo oracle.

Two parameterizations of the same rectangle are supported. Under the OpenCV
convention the angle lies in [-90, 0) degrees and measures the tilt of the
``w`` edge against the x-axis; under the long-edge convention the angle lies
in [-90, 90) degrees, is measured from the longer edge, and ``w >= h`` is
required. Angles are stored in radians; degrees only appear at I/O
boundaries (CLI arguments, box literals, CSV files).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

HALF_PI = math.pi / 2.0

#: Tolerance for collinearity and vertex-coincidence tests, in length units.
EPS_GEOM = 1e-9


class NonPositiveExtent(ValueError):
    """Raised when a box width or height is zero or negative."""


class NonFinite(ValueError):
    """Raised when a box field is NaN or infinite."""


class Convention(Enum):
    """Angle convention tag for an oriented box."""

    OPENCV = "oc"
    LONGEDGE = "le"


@dataclass(frozen=True)
class OrientedBox:
    """A rotated rectangle: center, extents, angle (radians), convention.

    Instances are expected to be built through :func:`make_box`, which folds
    the angle into the convention's range and enforces ``w >= h`` for the
    long-edge convention.
    """

    x: float
    y: float
    w: float
    h: float
    theta: float
    convention: Convention

    def __post_init__(self):
        for v in (self.x, self.y, self.w, self.h, self.theta):
            if not math.isfinite(v):
                raise NonFinite(f"box field is not finite: {v!r}")
        if self.w <= 0.0 or self.h <= 0.0:
            raise NonPositiveExtent(f"extents must be positive, got w={self.w}, h={self.h}")

    def area(self) -> float:
        return self.w * self.h

    def params(self) -> tuple[float, float, float, float, float]:
        """Raw parameter quintuple (x, y, w, h, theta)."""
        return (self.x, self.y, self.w, self.h, self.theta)


@dataclass(frozen=True)
class ConvexPolygon:
    """Convex polygon as a counter-clockwise vertex tuple; may be empty."""

    vertices: tuple[tuple[float, float], ...]

    def is_empty(self) -> bool:
        return len(self.vertices) < 3

    def area(self) -> float:
        """Shoelace area (vertices are CCW, so this is nonnegative)."""
        if self.is_empty():
            return 0.0
        s = 0.0
        pts = self.vertices
        n = len(pts)
        for i in range(n):
            x0, y0 = pts[i]
            x1, y1 = pts[(i + 1) % n]
            s += x0 * y1 - x1 * y0
        return s / 2.0

    def centroid(self) -> tuple[float, float]:
        a = self.area()
        if a == 0.0:
            raise ValueError("centroid of an empty polygon")
        cx = cy = 0.0
        pts = self.vertices
        n = len(pts)
        for i in range(n):
            x0, y0 = pts[i]
            x1, y1 = pts[(i + 1) % n]
            cross = x0 * y1 - x1 * y0
            cx += (x0 + x1) * cross
            cy += (y0 + y1) * cross
        return (cx / (6.0 * a), cy / (6.0 * a))


EMPTY_POLYGON = ConvexPolygon(())


def make_box(x: float, y: float, w: float, h: float, theta: float,
             convention: Convention = Convention.OPENCV) -> OrientedBox:
    """Build a valid box, folding the angle into the convention's range.

    OpenCV angles are folded into [-pi/2, 0) in quarter-turn steps, swapping
    ``w`` and ``h`` on each odd step. Long-edge angles are folded by the
    half-turn period into [-pi/2, pi/2); if ``w < h``, the extents are
    swapped and the angle shifted by a quarter turn. Square boxes keep their
    extent order and angle unchanged (the long-edge representation of a
    square is not unique, so a deterministic tie-break is applied).
    """
    for v in (x, y, w, h, theta):
        if not math.isfinite(v):
            raise NonFinite(f"box field is not finite: {v!r}")
    if w <= 0.0 or h <= 0.0:
        raise NonPositiveExtent(f"extents must be positive, got w={w}, h={h}")

    if convention is Convention.OPENCV:
        k = math.floor(theta / HALF_PI) + 1
        t = theta - k * HALF_PI
        swapped = k % 2 != 0
        # guard against rounding drift at the range edges
        while t >= 0.0:
            t -= HALF_PI
            swapped = not swapped
        while t < -HALF_PI:
            t += HALF_PI
            swapped = not swapped
        if swapped:
            w, h = h, w
        return OrientedBox(x, y, w, h, t, convention)

    # long-edge: half-turn period, then enforce w >= h
    t = theta - math.pi * math.floor((theta + HALF_PI) / math.pi)
    while t >= HALF_PI:
        t -= math.pi
    while t < -HALF_PI:
        t += math.pi
    if w < h:
        w, h = h, w
        t -= HALF_PI
        if t < -HALF_PI:
            t += math.pi
    return OrientedBox(x, y, w, h, t, convention)


def convert_convention(box: OrientedBox, target: Convention) -> OrientedBox:
    """Re-express the same rectangle under the other angle convention.

    OpenCV boxes with ``w >= h`` map to long-edge unchanged; otherwise the
    edges are exchanged and the angle shifted by a quarter turn (and
    inversely, keyed on the sign of the long-edge angle).
    """
    if box.convention is target:
        return box
    if target is Convention.LONGEDGE:
        if box.w >= box.h:
            return make_box(box.x, box.y, box.w, box.h, box.theta, target)
        return make_box(box.x, box.y, box.h, box.w, box.theta + HALF_PI, target)
    if box.theta < 0.0:
        return make_box(box.x, box.y, box.w, box.h, box.theta, target)
    return make_box(box.x, box.y, box.h, box.w, box.theta - HALF_PI, target)


def box_vertices(box: OrientedBox) -> ConvexPolygon:
    """Corner polygon of a box, counter-clockwise."""
    c, s = math.cos(box.theta), math.sin(box.theta)
    hw, hh = box.w / 2.0, box.h / 2.0
    corners = []
    for lx, ly in ((hw, hh), (-hw, hh), (-hw, -hh), (hw, -hh)):
        corners.append((box.x + c * lx - s * ly, box.y + s * lx + c * ly))
    return ConvexPolygon(tuple(corners))


def _dedupe(points: list[tuple[float, float]]) -> tuple[tuple[float, float], ...]:
    out: list[tuple[float, float]] = []
    for p in points:
        if not out or abs(p[0] - out[-1][0]) > EPS_GEOM or abs(p[1] - out[-1][1]) > EPS_GEOM:
            out.append(p)
    if len(out) > 1 and abs(out[0][0] - out[-1][0]) <= EPS_GEOM and abs(out[0][1] - out[-1][1]) <= EPS_GEOM:
        out.pop()
    return tuple(out)


def clip_convex(subject: ConvexPolygon, clip: ConvexPolygon) -> ConvexPolygon:
    """Intersection of two convex CCW polygons (Sutherland-Hodgman).

    The subject is clipped against each half-plane bounded by a clip edge.
    Points exactly on an edge count as inside, so clipping a polygon
    against itself is the identity.
    """
    if subject.is_empty() or clip.is_empty():
        return EMPTY_POLYGON
    output = list(subject.vertices)
    cpts = clip.vertices
    n = len(cpts)
    for i in range(n):
        if not output:
            return EMPTY_POLYGON
        ax, ay = cpts[i]
        bx, by = cpts[(i + 1) % n]
        ex, ey = bx - ax, by - ay
        incoming = output
        output = []
        px, py = incoming[-1]
        prev_side = ex * (py - ay) - ey * (px - ax)
        for qx, qy in incoming:
            side = ex * (qy - ay) - ey * (qx - ax)
            if side >= 0.0:
                if prev_side < 0.0:
                    t = prev_side / (prev_side - side)
                    output.append((px + t * (qx - px), py + t * (qy - py)))
                output.append((qx, qy))
            elif prev_side >= 0.0:
                t = prev_side / (prev_side - side)
                output.append((px + t * (qx - px), py + t * (qy - py)))
            px, py, prev_side = qx, qy, side
    result = ConvexPolygon(_dedupe(output))
    if result.is_empty() or result.area() <= 0.0:
        return EMPTY_POLYGON
    return result


def rotated_iou(b1: OrientedBox, b2: OrientedBox) -> float:
    """Exact IoU of two rotated rectangles via convex clipping.

    Argument order is canonicalized before clipping so the result is
    bitwise symmetric. Overlaps with area below ``EPS_GEOM`` (edge or
    corner contact) count as zero.
    """
    k1 = (b1.x, b1.y, b1.w, b1.h, b1.theta, b1.convention.value)
    k2 = (b2.x, b2.y, b2.w, b2.h, b2.theta, b2.convention.value)
    if k2 < k1:
        b1, b2 = b2, b1
    inter = clip_convex(box_vertices(b1), box_vertices(b2)).area()
    if inter < EPS_GEOM:
        return 0.0
    union = b1.area() + b2.area() - inter
    return min(max(inter / union, 0.0), 1.0)


def monte_carlo_iou(b1: OrientedBox, b2: OrientedBox, n_samples: int, seed: int) -> float:
    """IoU estimate by uniform sampling over the pair's bounding rectangle.

    Deterministic for a fixed seed; used as an independent oracle against
    :func:`rotated_iou`. Disjoint boxes give exactly 0.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    pts1 = np.asarray(box_vertices(b1).vertices)
    pts2 = np.asarray(box_vertices(b2).vertices)
    allpts = np.vstack([pts1, pts2])
    lo = allpts.min(axis=0)
    hi = allpts.max(axis=0)
    rng = np.random.default_rng(seed)
    samples = rng.uniform(lo, hi, size=(n_samples, 2))
    in1 = _contains(b1, samples)
    in2 = _contains(b2, samples)
    either = int(np.count_nonzero(in1 | in2))
    if either == 0:
        return 0.0
    both = int(np.count_nonzero(in1 & in2))
    return both / either


def _contains(box: OrientedBox, pts: np.ndarray) -> np.ndarray:
    c, s = math.cos(box.theta), math.sin(box.theta)
    dx = pts[:, 0] - box.x
    dy = pts[:, 1] - box.y
    u = dx * c + dy * s
    v = -dx * s + dy * c
    return (np.abs(u) <= box.w / 2.0) & (np.abs(v) <= box.h / 2.0)


# --- box literal I/O -------------------------------------------------------
#
# Grammar: "x,y,w,h,theta_deg[,oc|le]" with "oc" the default. Whitespace is
# ignored; in files, "#" starts a comment and boxes sit one per line.

def parse_box_literal(text: str) -> OrientedBox:
    fields = [f.strip() for f in text.strip().split(",")]
    if len(fields) not in (5, 6):
        raise ValueError(f"box literal needs 5 or 6 comma-separated fields: {text!r}")
    convention = Convention.OPENCV
    if len(fields) == 6:
        tag = fields[5].lower()
        try:
            convention = Convention(tag)
        except ValueError:
            raise ValueError(f"unknown convention tag {fields[5]!r} (expected 'oc' or 'le')") from None
    try:
        x, y, w, h, deg = (float(f) for f in fields[:5])
    except ValueError:
        raise ValueError(f"malformed numeric field in box literal: {text!r}") from None
    return make_box(x, y, w, h, math.radians(deg), convention)


def format_box_literal(box: OrientedBox) -> str:
    deg = round(math.degrees(box.theta), 9)
    parts = [_trim_number(v) for v in (box.x, box.y, box.w, box.h, deg)]
    return ",".join(parts) + "," + box.convention.value


def _trim_number(v: float) -> str:
    if v == 0.0:
        return "0"
    text = f"{v:.9f}".rstrip("0").rstrip(".")
    return text if text not in ("-0", "") else "0"


def parse_box_file(text: str) -> list[OrientedBox]:
    """Parse one box literal per line; blank lines and '#' comments allowed."""
    boxes = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            boxes.append(parse_box_literal(line))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return boxes

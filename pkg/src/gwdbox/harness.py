"""Deterministic behavior studies: parameter sweeps, boundary fixtures,
and single-box gradient-descent fitting.

Each experiment turns into a flat table (see :mod:`gwdbox.report`) so runs
can be re-emitted byte-identically. The boundary fixtures are the classic
failure cases of parameter-space regression: a pair of equivalent box
representations, an anchor/target pair at the angular range edge, and a
near-square pair whose long-edge representations disagree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .gaussian import gwd_gradient_params, gwd_squared_params
from .geometry import Convention, OrientedBox, make_box, rotated_iou
from .losses import (
    DEFAULT_BETA,
    LossConfig,
    RegressionDelta,
    Transform,
    decode_deltas,
    encode_deltas,
    loss_from_distance,
    loss_slope,
    smooth_l1,
    smooth_l1_gradient,
)
from .report import Table

#: Baseline markers usable wherever a loss entry is expected.
SMOOTH_L1 = "smooth_l1"
IOU_LOSS = "iou"


class Diverged(RuntimeError):
    """Raised when a descent iterate becomes non-finite (learning rate too large)."""


class SweepKind(Enum):
    ANGLE_DIFF = "angle"
    ASPECT_RATIO = "aspect"
    CENTER_SHIFT = "center"


DEFAULT_SWEEP_BASE = make_box(0.0, 0.0, 40.0, 10.0, 0.0, Convention.LONGEDGE)
DEFAULT_LOSSES = (LossConfig(Transform.SQRT, 2.0), SMOOTH_L1, IOU_LOSS)
DEFAULT_RELATIVE_ANGLE = math.radians(15.0)
DEFAULT_STEPS = 200


@dataclass(frozen=True)
class SweepSpec:
    """One-parameter family of box pairs with the losses to evaluate.

    ``start``/``stop`` are radians for the angle sweep, a width/height
    ratio for the aspect sweep, and a length for the center sweep. The
    aspect sweep holds the base box's area and a fixed relative angle.
    """

    kind: SweepKind
    base_box: OrientedBox = DEFAULT_SWEEP_BASE
    start: float = 0.0
    stop: float = math.pi / 2.0
    steps: int = DEFAULT_STEPS
    losses: tuple = DEFAULT_LOSSES
    relative_angle: float = DEFAULT_RELATIVE_ANGLE

    def __post_init__(self):
        if self.steps < 2:
            raise ValueError("a sweep needs at least 2 steps")
        if not self.start < self.stop:
            raise ValueError("sweep range must have start < stop")


def default_sweep(kind: SweepKind, losses: tuple = DEFAULT_LOSSES) -> SweepSpec:
    """Built-in sweep fixtures: 4:1 box for angle and center-shift sweeps
    (shift up to three diagonals), area-400 pair at 15 degrees relative
    angle for the aspect sweep."""
    base = DEFAULT_SWEEP_BASE
    if kind is SweepKind.ANGLE_DIFF:
        return SweepSpec(kind, base, 0.0, math.pi / 2.0, DEFAULT_STEPS, losses)
    if kind is SweepKind.ASPECT_RATIO:
        return SweepSpec(kind, base, 1.0, 16.0, DEFAULT_STEPS, losses)
    diag = math.hypot(base.w, base.h)
    return SweepSpec(kind, base, 0.0, 3.0 * diag, DEFAULT_STEPS, losses)


def loss_label(entry) -> str:
    if isinstance(entry, LossConfig):
        return entry.label()
    if entry == SMOOTH_L1:
        return "smooth_l1"
    if entry == IOU_LOSS:
        return "iou_loss"
    raise ValueError(f"unknown loss entry: {entry!r}")


def _evaluate_pair(entry, pred: OrientedBox, gt: OrientedBox,
                   raw_delta: RegressionDelta) -> float:
    """One loss value for a (prediction, ground truth) pair.

    The smooth-L1 baseline is evaluated on the raw parameter offsets of the
    sweep (unwrapped), which is what exposes its angle-parameterization
    artifacts; the Gaussian losses and IoU see only the geometry.
    """
    if isinstance(entry, LossConfig):
        return loss_from_distance(gwd_squared_params(pred.params(), gt.params()), entry)
    if entry == SMOOTH_L1:
        return smooth_l1(raw_delta, _ZERO)
    if entry == IOU_LOSS:
        return 1.0 - rotated_iou(pred, gt)
    raise ValueError(f"unknown loss entry: {entry!r}")


_ZERO = RegressionDelta(0.0, 0.0, 0.0, 0.0, 0.0)

_PARAM_NAMES = {
    SweepKind.ANGLE_DIFF: "angle_deg",
    SweepKind.ASPECT_RATIO: "aspect_ratio",
    SweepKind.CENTER_SHIFT: "center_shift",
}


def run_sweep(spec: SweepSpec) -> Table:
    """Evaluate every configured loss along the sweep grid.

    Returns one row per grid point: the parameter value (degrees for the
    angle sweep), one column per loss, and the exact IoU of the pair.
    """
    base = spec.base_box
    columns = [_PARAM_NAMES[spec.kind]]
    columns += [loss_label(entry) for entry in spec.losses]
    columns.append("iou")

    rows = []
    span = spec.stop - spec.start
    for i in range(spec.steps):
        value = spec.start + span * i / (spec.steps - 1)
        if spec.kind is SweepKind.ANGLE_DIFF:
            gt = base
            pred = make_box(base.x, base.y, base.w, base.h, base.theta + value,
                            base.convention)
            delta = RegressionDelta(0.0, 0.0, 0.0, 0.0, value)
            param_out = math.degrees(value)
        elif spec.kind is SweepKind.ASPECT_RATIO:
            area = base.w * base.h
            w = math.sqrt(area * value)
            h = math.sqrt(area / value)
            gt = make_box(base.x, base.y, w, h, base.theta, base.convention)
            pred = make_box(base.x, base.y, w, h, base.theta + spec.relative_angle,
                            base.convention)
            delta = RegressionDelta(0.0, 0.0, 0.0, 0.0, spec.relative_angle)
            param_out = value
        else:
            gt = base
            pred = make_box(base.x + value, base.y, base.w, base.h, base.theta,
                            base.convention)
            delta = RegressionDelta(value / base.w, 0.0, 0.0, 0.0, 0.0)
            param_out = value

        row = [param_out]
        row += [_evaluate_pair(entry, pred, gt, delta) for entry in spec.losses]
        row.append(rotated_iou(pred, gt))
        rows.append(tuple(row))
    return Table(tuple(columns), rows)


# --- boundary fixtures ------------------------------------------------------
#
# Each case is (anchor, ground truth, raw parameters of the regression
# endpoint that reaches the target by the direct route). The endpoint's
# angle may fall outside the convention range; it is kept raw for the delta
# encoding and folded only when materialized as a box.

def _case1():
    gt = make_box(0.0, 0.0, 10.0, 70.0, math.radians(-25.0), Convention.OPENCV)
    # the same rectangle written with exchanged edges and a quarter-turn shift
    twin = (0.0, 0.0, 70.0, 10.0, math.radians(-115.0))
    return gt, gt, twin


def _case2():
    anchor = make_box(0.0, 0.0, 70.0, 10.0, math.radians(-90.0), Convention.OPENCV)
    gt = make_box(0.0, 0.0, 10.0, 70.0, math.radians(-25.0), Convention.OPENCV)
    endpoint = (0.0, 0.0, 70.0, 10.0, math.radians(-115.0))
    return anchor, gt, endpoint


def _case3():
    anchor = make_box(0.0, 0.0, 45.0, 44.0, 0.0, Convention.LONGEDGE)
    gt = make_box(0.0, 0.0, 45.0, 43.0, math.radians(-60.0), Convention.LONGEDGE)
    endpoint = (0.0, 0.0, 45.0, 44.0, math.radians(30.0))
    return anchor, gt, endpoint


BOUNDARY_CASES = {"case1": _case1, "case2": _case2, "case3": _case3}

DEFAULT_BOUNDARY_TAUS = (1.0, 2.0, 3.0, 5.0)


def _raw_delta(params, anchor: OrientedBox) -> RegressionDelta:
    x, y, w, h, theta = params
    return RegressionDelta((x - anchor.x) / anchor.w,
                           (y - anchor.y) / anchor.h,
                           math.log(w / anchor.w),
                           math.log(h / anchor.h),
                           theta - anchor.theta)


def run_boundary_cases(taus: tuple = DEFAULT_BOUNDARY_TAUS,
                       transform: Transform = Transform.SQRT) -> Table:
    """Evaluate smooth L1 and the fitted Gaussian losses on the three
    built-in boundary fixtures.

    For each case the direct-route endpoint is compared against the ground
    truth: smooth L1 on the unwrapped encoded deltas, the Gaussian losses
    and IoU on the folded boxes.
    """
    rows = []
    for name, fixture in BOUNDARY_CASES.items():
        anchor, gt, endpoint = fixture()
        pred_delta = _raw_delta(endpoint, anchor)
        gt_delta = encode_deltas(gt, anchor)
        pred_box = decode_deltas(pred_delta, anchor)
        iou = rotated_iou(pred_box, gt)
        rows.append((name, "smooth_l1", smooth_l1(pred_delta, gt_delta), iou))
        d2 = gwd_squared_params(pred_box.params(), gt.params())
        for tau in taus:
            cfg = LossConfig(transform, tau)
            rows.append((name, cfg.label(), loss_from_distance(d2, cfg), iou))
    return Table(("case", "loss", "value", "iou"), rows)


# --- descent ----------------------------------------------------------------

DEFAULT_LEARNING_RATE = 5e-4
DEFAULT_MAX_ITERS = 3000
STALL_WINDOW = 50
STALL_IMPROVEMENT = 1e-10


@dataclass(frozen=True)
class DescentSpec:
    """Plain gradient descent from an anchor toward a ground truth.

    Gaussian losses descend on the raw box parameters (extents in log
    space, so iterates stay valid boxes); the smooth-L1 baseline descends
    on the five encoded deltas. The defaults are tuned so the comparison
    runs in seconds.
    """

    anchor: OrientedBox
    ground_truth: OrientedBox
    loss: "LossConfig | str" = field(default_factory=lambda: LossConfig(Transform.SQRT, 2.0))
    learning_rate: float = DEFAULT_LEARNING_RATE
    max_iters: int = DEFAULT_MAX_ITERS
    record_every: int = 50
    beta: float = DEFAULT_BETA

    def __post_init__(self):
        if self.learning_rate <= 0.0:
            raise ValueError("learning_rate must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")


@dataclass(frozen=True)
class TrajectoryPoint:
    step: int
    box: OrientedBox
    loss: float
    iou: float


@dataclass(frozen=True)
class Trajectory:
    points: tuple

    def final(self) -> TrajectoryPoint:
        return self.points[-1]

    def to_table(self) -> Table:
        rows = []
        for p in self.points:
            b = p.box
            rows.append((p.step, b.x, b.y, b.w, b.h, math.degrees(b.theta),
                         p.loss, p.iou))
        return Table(("step", "x", "y", "w", "h", "theta_deg", "loss", "iou"), rows)


def run_descent(spec: DescentSpec) -> Trajectory:
    """Descend the configured loss and record the visited boxes.

    Stops at ``max_iters`` or once the loss has not improved by more than
    ``1e-10`` for 50 consecutive steps.
    """
    if isinstance(spec.loss, LossConfig):
        return _descend_gwd(spec)
    if spec.loss == SMOOTH_L1:
        return _descend_smooth_l1(spec)
    raise ValueError(f"descent supports LossConfig or {SMOOTH_L1!r}, got {spec.loss!r}")


def _descend_gwd(spec: DescentSpec) -> Trajectory:
    cfg = spec.loss
    gt = spec.ground_truth.params()
    x, y = spec.anchor.x, spec.anchor.y
    u, v = math.log(spec.anchor.w), math.log(spec.anchor.h)
    t = spec.anchor.theta
    lr = spec.learning_rate

    def current_loss():
        return loss_from_distance(gwd_squared_params((x, y, math.exp(u), math.exp(v), t), gt), cfg)

    def materialize(step, loss):
        box = make_box(x, y, math.exp(u), math.exp(v), t, spec.anchor.convention)
        return TrajectoryPoint(step, box, loss, rotated_iou(box, spec.ground_truth))

    loss = current_loss()
    points = [TrajectoryPoint(0, spec.anchor, loss,
                              rotated_iou(spec.anchor, spec.ground_truth))]
    best = loss
    stall = 0
    step = 0
    for step in range(1, spec.max_iters + 1):
        w, h = math.exp(u), math.exp(v)
        params = (x, y, w, h, t)
        d2 = gwd_squared_params(params, gt)
        scale = loss_slope(d2, cfg)
        g = gwd_gradient_params(params, gt)
        x -= lr * scale * g[0]
        y -= lr * scale * g[1]
        u -= lr * scale * g[2] * w
        v -= lr * scale * g[3] * h
        t -= lr * scale * g[4]
        # |log extent| > 150 guarantees overflow in the squared entries
        if not all(math.isfinite(p) for p in (x, y, u, v, t)) \
                or abs(u) > 150.0 or abs(v) > 150.0:
            raise Diverged(f"non-finite iterate at step {step}; lower the learning rate")
        loss = current_loss()
        if not math.isfinite(loss):
            raise Diverged(f"non-finite loss at step {step}; lower the learning rate")
        if step % spec.record_every == 0:
            points.append(materialize(step, loss))
        if best - loss >= STALL_IMPROVEMENT:
            best = loss
            stall = 0
        else:
            stall += 1
            if stall >= STALL_WINDOW:
                break
    if points[-1].step != step:
        points.append(materialize(step, loss))
    return Trajectory(tuple(points))


def _descend_smooth_l1(spec: DescentSpec) -> Trajectory:
    target = encode_deltas(spec.ground_truth, spec.anchor)
    delta = RegressionDelta(0.0, 0.0, 0.0, 0.0, 0.0)
    lr = spec.learning_rate

    def materialize(step, loss):
        box = decode_deltas(delta, spec.anchor)
        return TrajectoryPoint(step, box, loss, rotated_iou(box, spec.ground_truth))

    loss = smooth_l1(delta, target, spec.beta)
    points = [materialize(0, loss)]
    best = loss
    stall = 0
    step = 0
    for step in range(1, spec.max_iters + 1):
        g = smooth_l1_gradient(delta, target, spec.beta)
        fields = [p - lr * gi for p, gi in zip(delta.as_tuple(), g)]
        if not all(math.isfinite(p) for p in fields):
            raise Diverged(f"non-finite iterate at step {step}; lower the learning rate")
        delta = RegressionDelta(*fields)
        loss = smooth_l1(delta, target, spec.beta)
        if step % spec.record_every == 0:
            points.append(materialize(step, loss))
        if best - loss >= STALL_IMPROVEMENT:
            best = loss
            stall = 0
        else:
            stall += 1
            if stall >= STALL_WINDOW:
                break
    if points[-1].step != step:
        points.append(materialize(step, loss))
    return Trajectory(tuple(points))

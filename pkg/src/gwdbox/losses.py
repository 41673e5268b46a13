"""Distance-to-loss transforms, delta encoding, and the smooth-L1 baseline.

Three loss forms sit on top of the squared Gaussian Wasserstein distance:

* ``RAW``     - the squared distance itself,
* ``FITTED``  - 1 - 1/(tau + f(d^2)), an IoU-like bounded loss requiring
  tau >= 1,
* ``DIRECT``  - f(d^2) alone.

``f`` is either sqrt or the shifted logarithm log(1 + d^2). The shift keeps
f(0) = 0 and f >= 0, so every form attains its floor at a perfect
prediction (the fitted form's floor is 1 - 1/tau, nonzero for tau > 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .gaussian import box_to_gaussian, gwd_squared
from .geometry import NonFinite, OrientedBox, make_box

#: Smooth-L1 knee, the conventional detection default.
DEFAULT_BETA = 1.0 / 9.0


class EmptyBatch(ValueError):
    """Raised when a batch objective is evaluated on no pairs."""


class Transform(Enum):
    SQRT = "sqrt"
    LOG = "log"


class Form(Enum):
    RAW = "raw"
    FITTED = "fitted"
    DIRECT = "direct"


@dataclass(frozen=True)
class LossConfig:
    """Choice of nonlinear transform, modulation constant, and loss form."""

    transform: Transform = Transform.SQRT
    tau: float = 1.0
    form: Form = Form.FITTED

    def __post_init__(self):
        if self.form is Form.FITTED and self.tau < 1.0:
            raise ValueError(f"fitted form requires tau >= 1, got {self.tau}")

    def floor(self) -> float:
        """Loss value at a perfect prediction (d^2 = 0)."""
        return 1.0 - 1.0 / self.tau if self.form is Form.FITTED else 0.0

    def label(self) -> str:
        if self.form is Form.RAW:
            return "gwd_raw"
        return f"gwd_{self.transform.value}_tau{self.tau:g}_{self.form.value}"


def apply_transform(transform: Transform, d2: float) -> float:
    d2 = max(d2, 0.0)
    if transform is Transform.SQRT:
        return math.sqrt(d2)
    return math.log1p(d2)


def transform_slope(transform: Transform, d2: float) -> float:
    """df/d(d^2); zero at the sqrt kink, where d^2 = 0 is the minimum."""
    if transform is Transform.SQRT:
        return 0.0 if d2 <= 0.0 else 0.5 / math.sqrt(d2)
    return 1.0 / (1.0 + max(d2, 0.0))


def loss_from_distance(d2: float, cfg: LossConfig) -> float:
    """Apply the configured form to a squared distance."""
    if cfg.form is Form.RAW:
        return max(d2, 0.0)
    f = apply_transform(cfg.transform, d2)
    if cfg.form is Form.DIRECT:
        return f
    return 1.0 - 1.0 / (cfg.tau + f)


def loss_slope(d2: float, cfg: LossConfig) -> float:
    """d(loss)/d(d^2) for the configured form."""
    if cfg.form is Form.RAW:
        return 1.0
    slope = transform_slope(cfg.transform, d2)
    if cfg.form is Form.DIRECT:
        return slope
    denom = cfg.tau + apply_transform(cfg.transform, d2)
    return slope / (denom * denom)


def gwd_loss(b_pred: OrientedBox, b_gt: OrientedBox, cfg: LossConfig) -> float:
    """Gaussian Wasserstein loss between a prediction and a ground truth."""
    d2 = gwd_squared(box_to_gaussian(b_pred), box_to_gaussian(b_gt))
    return loss_from_distance(d2, cfg)


@dataclass(frozen=True)
class RegressionDelta:
    """Encoded box offsets relative to an anchor (dimensionless)."""

    tx: float
    ty: float
    tw: float
    th: float
    ttheta: float

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.tx, self.ty, self.tw, self.th, self.ttheta)


ZERO_DELTA = RegressionDelta(0.0, 0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class RegressionWeights:
    """Trade-off weights of the multi-task objective; the classification
    weight is carried for configuration fidelity only."""

    lambda1: float = 1.0
    lambda2: float = 2.0

    def __post_init__(self):
        if self.lambda1 <= 0.0 or self.lambda2 <= 0.0:
            raise ValueError("weights must be positive")


def encode_deltas(box: OrientedBox, anchor: OrientedBox) -> RegressionDelta:
    """Standard detection encoding of a box against an anchor.

    The angle offset is the raw difference theta - theta_a, deliberately
    unwrapped: the wrap-around only happens when decoding, which is exactly
    what produces the boundary discontinuity under study.
    """
    if box.convention is not anchor.convention:
        raise ValueError("boxes must share a convention to be encoded")
    return RegressionDelta((box.x - anchor.x) / anchor.w,
                           (box.y - anchor.y) / anchor.h,
                           math.log(box.w / anchor.w),
                           math.log(box.h / anchor.h),
                           box.theta - anchor.theta)


def decode_deltas(delta: RegressionDelta, anchor: OrientedBox) -> OrientedBox:
    """Inverse of :func:`encode_deltas`; the angle is folded back into the
    anchor's convention range."""
    for v in delta.as_tuple():
        if not math.isfinite(v):
            raise NonFinite(f"delta field is not finite: {v!r}")
    try:
        w = anchor.w * math.exp(delta.tw)
        h = anchor.h * math.exp(delta.th)
    except OverflowError:
        raise NonFinite("extent overflow while decoding deltas") from None
    if not (math.isfinite(w) and math.isfinite(h)):
        raise NonFinite("extent overflow while decoding deltas")
    return make_box(anchor.x + delta.tx * anchor.w,
                    anchor.y + delta.ty * anchor.h,
                    w, h,
                    anchor.theta + delta.ttheta,
                    anchor.convention)


def smooth_l1(pred: RegressionDelta, target: RegressionDelta, beta: float = DEFAULT_BETA) -> float:
    """Componentwise smooth L1 summed over the five offsets."""
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    total = 0.0
    for p, t in zip(pred.as_tuple(), target.as_tuple()):
        e = abs(p - t)
        total += 0.5 * e * e / beta if e < beta else e - 0.5 * beta
    return total


def smooth_l1_gradient(pred: RegressionDelta, target: RegressionDelta,
                       beta: float = DEFAULT_BETA) -> tuple[float, float, float, float, float]:
    """Gradient of :func:`smooth_l1` with respect to the prediction."""
    grad = []
    for p, t in zip(pred.as_tuple(), target.as_tuple()):
        e = p - t
        grad.append(e / beta if abs(e) < beta else math.copysign(1.0, e))
    return tuple(grad)


def regression_objective(pairs: list[tuple[OrientedBox, OrientedBox]],
                         cfg: LossConfig,
                         weights: RegressionWeights = RegressionWeights()) -> float:
    """Weighted mean loss over (prediction, ground-truth) pairs, all
    treated as foreground."""
    if not pairs:
        raise EmptyBatch("regression objective needs at least one pair")
    total = sum(gwd_loss(pred, gt, cfg) for pred, gt in pairs)
    return weights.lambda1 * total / len(pairs)

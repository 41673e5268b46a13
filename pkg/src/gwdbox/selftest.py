"""Built-in invariant suite: a quick self-check runnable from the CLI.

Covers the covariance-root symmetries (edge swap, half-turn, near-square
continuity), the axis-aligned closed form, and an analytic-vs-numeric
gradient check on random pairs. Deterministic: the RNG seed is fixed.
"""

from __future__ import annotations

import math
import random

from .gaussian import (
    gaussian_from_params,
    gwd_gradient_params,
    gwd_squared,
    gwd_squared_commutative,
    gwd_squared_params,
)
from .geometry import Convention, make_box

SEED = 1107


def _random_params(rng, min_gap=0.0):
    while True:
        w = rng.uniform(1.0, 100.0)
        h = rng.uniform(1.0, 100.0)
        if abs(w - h) / max(w, h) > min_gap:
            break
    return (rng.uniform(-50.0, 50.0), rng.uniform(-50.0, 50.0),
            w, h, rng.uniform(-math.pi, math.pi))


def _root_gap(p, q) -> float:
    s1 = gaussian_from_params(*p).sigma_root
    s2 = gaussian_from_params(*q).sigma_root
    return max(abs(s1.a - s2.a), abs(s1.b - s2.b), abs(s1.d - s2.d))


def check_edge_swap(rng, n=2000) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(n):
        x, y, w, h, t = _random_params(rng)
        worst = max(worst, _root_gap((x, y, w, h, t), (x, y, h, w, t - math.pi / 2)))
    return worst <= 1e-12, f"max covariance-root gap {worst:.3e} over {n} boxes"


def check_half_turn(rng, n=2000) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(n):
        x, y, w, h, t = _random_params(rng)
        worst = max(worst, _root_gap((x, y, w, h, t), (x, y, w, h, t - math.pi)))
    return worst <= 1e-12, f"max covariance-root gap {worst:.3e} over {n} boxes"


def check_near_square(rng) -> tuple[bool, str]:
    gaps = (10.0, 1.0, 0.1, 0.01)
    values = []
    for gap in gaps:
        p = (0.0, 0.0, 1.0 + gap, 1.0, 0.3)
        q = (0.0, 0.0, 1.0 + gap, 1.0, 0.3 - math.pi / 2)
        values.append(gwd_squared_params(p, q))
    decreasing = all(a > b for a, b in zip(values, values[1:]))
    ok = decreasing and values[-1] < 1e-4
    return ok, "squared distances " + ", ".join(f"{v:.3e}" for v in values)


def check_axis_aligned(rng, n=1000) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(n):
        boxes = []
        for _ in range(2):
            a = rng.uniform(1.0, 100.0)
            b = rng.uniform(1.0, 100.0)
            boxes.append(make_box(rng.uniform(-50, 50), rng.uniform(-50, 50),
                                  max(a, b), min(a, b), 0.0, Convention.LONGEDGE))
        b1, b2 = boxes
        full = gwd_squared(*(gaussian_from_params(*b.params()) for b in (b1, b2)))
        closed = gwd_squared_commutative(b1, b2)
        worst = max(worst, abs(full - closed))
    return worst <= 1e-9, f"max |matrix - closed form| {worst:.3e} over {n} pairs"


def finite_difference_gradient(p1, p2, rel_step=1e-5):
    """Central differences of the squared distance in p1."""
    grad = []
    for i in range(5):
        step = rel_step * max(1.0, abs(p1[i]))
        hi = list(p1)
        lo = list(p1)
        hi[i] += step
        lo[i] -= step
        grad.append((gwd_squared_params(tuple(hi), p2) -
                     gwd_squared_params(tuple(lo), p2)) / (2.0 * step))
    return tuple(grad)


def check_gradient(rng, n=100) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(n):
        p1 = _random_params(rng, min_gap=0.01)
        p2 = _random_params(rng, min_gap=0.01)
        analytic = gwd_gradient_params(p1, p2)
        numeric = finite_difference_gradient(p1, p2)
        for a, f in zip(analytic, numeric):
            worst = max(worst, abs(a - f) / max(abs(a), abs(f), 1.0))
    return worst <= 1e-5, f"max relative gradient error {worst:.3e} over {n} pairs"


CHECKS = (
    ("edge-swap-invariance", check_edge_swap),
    ("half-turn-invariance", check_half_turn),
    ("near-square-continuity", check_near_square),
    ("axis-aligned-closed-form", check_axis_aligned),
    ("gradient-vs-finite-differences", check_gradient),
)


def run_selftest(write=print) -> bool:
    """Run every check; one PASS/FAIL line each. True if all passed."""
    rng = random.Random(SEED)
    all_ok = True
    for name, check in CHECKS:
        ok, detail = check(rng)
        all_ok = all_ok and ok
        write(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    write(f"selftest: {'all checks passed' if all_ok else 'FAILURES detected'}")
    return all_ok

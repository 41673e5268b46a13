"""Experiment config files: INI-style key=value sections, one per experiment.

Example::

    [fig_angle]
    kind = angle
    base = 0,0,40,10,0,le
    range = 0,90,200
    losses = gwd(transform=sqrt,tau=2,form=fitted), smooth_l1, iou

    [case2_gwd]
    kind = descent
    anchor = 0,0,70,10,-90
    ground_truth = 0,0,10,70,-25
    loss = gwd(transform=sqrt,tau=2,form=fitted)

Angles and angle ranges are given in degrees and converted at this
boundary. Output files are named after the section and written under the
directory supplied on the command line.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass

from .geometry import parse_box_literal
from .harness import (
    DEFAULT_BOUNDARY_TAUS,
    DEFAULT_LEARNING_RATE,
    DEFAULT_MAX_ITERS,
    DEFAULT_STEPS,
    IOU_LOSS,
    SMOOTH_L1,
    DescentSpec,
    SweepKind,
    SweepSpec,
    default_sweep,
)
from .losses import Form, LossConfig, Transform


@dataclass(frozen=True)
class BoundarySpec:
    taus: tuple = DEFAULT_BOUNDARY_TAUS
    transform: Transform = Transform.SQRT


@dataclass(frozen=True)
class Experiment:
    name: str
    spec: object  # SweepSpec | BoundarySpec | DescentSpec


def parse_loss_entry(text: str):
    """Parse one loss entry: ``smooth_l1``, ``iou``, or ``gwd(...)`` with
    ``transform=sqrt|log``, ``tau=<float>``, ``form=raw|fitted|direct``."""
    text = text.strip()
    if text == SMOOTH_L1:
        return SMOOTH_L1
    if text == IOU_LOSS:
        return IOU_LOSS
    if text == "gwd":
        return LossConfig()
    if not (text.startswith("gwd(") and text.endswith(")")):
        raise ValueError(f"unknown loss entry {text!r}")
    kwargs = {}
    body = text[4:-1].strip()
    for item in filter(None, (part.strip() for part in body.split(","))):
        if "=" not in item:
            raise ValueError(f"expected key=value inside gwd(...), got {item!r}")
        key, value = (s.strip() for s in item.split("=", 1))
        if key == "transform":
            kwargs["transform"] = Transform(value)
        elif key == "tau":
            kwargs["tau"] = float(value)
        elif key == "form":
            kwargs["form"] = Form(value)
        else:
            raise ValueError(f"unknown gwd(...) key {key!r}")
    return LossConfig(**kwargs)


def _parse_losses(text: str) -> tuple:
    # split on commas that are not inside gwd(...) parentheses
    entries, depth, current = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            entries.append("".join(current))
            current = []
        else:
            current.append(ch)
    entries.append("".join(current))
    parsed = tuple(parse_loss_entry(e) for e in entries if e.strip())
    if not parsed:
        raise ValueError("empty loss list")
    return parsed


def _parse_range(text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) not in (2, 3):
        raise ValueError(f"range needs start,stop[,steps], got {text!r}")
    start, stop = float(parts[0]), float(parts[1])
    steps = int(parts[2]) if len(parts) == 3 else DEFAULT_STEPS
    return start, stop, steps


_SWEEP_KINDS = {k.value: k for k in SweepKind}


def _sweep_from_section(section) -> SweepSpec:
    kind = _SWEEP_KINDS[section["kind"]]
    spec = default_sweep(kind)
    base = parse_box_literal(section["base"]) if "base" in section else spec.base_box
    if "range" in section:
        start, stop, steps = _parse_range(section["range"])
        if kind is SweepKind.ANGLE_DIFF:
            start, stop = math.radians(start), math.radians(stop)
    else:
        start, stop, steps = spec.start, spec.stop, spec.steps
    losses = _parse_losses(section["losses"]) if "losses" in section else spec.losses
    rel = math.radians(float(section["relative_angle"])) if "relative_angle" in section \
        else spec.relative_angle
    return SweepSpec(kind, base, start, stop, steps, losses, rel)


def _boundary_from_section(section) -> BoundarySpec:
    taus = DEFAULT_BOUNDARY_TAUS
    if "taus" in section:
        taus = tuple(float(t) for t in section["taus"].split(","))
    transform = Transform(section.get("transform", Transform.SQRT.value))
    return BoundarySpec(taus, transform)


def _descent_from_section(section) -> DescentSpec:
    for key in ("anchor", "ground_truth"):
        if key not in section:
            raise ValueError(f"descent section needs a {key!r} box literal")
    loss = parse_loss_entry(section.get("loss", "gwd(transform=sqrt,tau=2,form=fitted)"))
    if loss == IOU_LOSS:
        raise ValueError("descent needs a differentiable loss (gwd or smooth_l1)")
    return DescentSpec(anchor=parse_box_literal(section["anchor"]),
                       ground_truth=parse_box_literal(section["ground_truth"]),
                       loss=loss,
                       learning_rate=float(section.get("learning_rate", DEFAULT_LEARNING_RATE)),
                       max_iters=int(section.get("max_iters", DEFAULT_MAX_ITERS)),
                       record_every=int(section.get("record_every", 50)))


def load_experiments(path) -> list:
    """Parse a config file into a list of named experiments."""
    cp = configparser.ConfigParser(interpolation=None)
    with open(path, encoding="utf-8") as fh:
        cp.read_file(fh)
    experiments = []
    for name in cp.sections():
        section = cp[name]
        if "kind" not in section:
            raise ValueError(f"section [{name}] is missing the 'kind' key")
        kind = section["kind"].strip()
        if kind in _SWEEP_KINDS:
            spec = _sweep_from_section(section)
        elif kind == "boundary":
            spec = _boundary_from_section(section)
        elif kind == "descent":
            spec = _descent_from_section(section)
        else:
            raise ValueError(f"section [{name}] has unknown kind {kind!r}")
        experiments.append(Experiment(name, spec))
    return experiments

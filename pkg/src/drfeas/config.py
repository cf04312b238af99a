"""JSON run-configuration parsing for ad-hoc problems.

Schema (version 1)::

    {
      "version": 1,                      # optional; only 1 is accepted
      "A": {"type": "hyperplane", "u": [0, 1], "eta": 0},
      "B": {"type": "finite", "points": [[0, 1], [1, 2]]},
      "x0": [2, -1],
      "options": {"max_iter": 10000, "fix_tol": 1e-11,
                  "div_threshold": 1e8, "cycle_max_period": 12, "seed": 0}
    }

Set types and their keys:
  hyperplane {u, eta} | halfspace {u, eta} | affine {L, v} |
  ball {center, radius} | epigraph {f} | finite {points} | ray {theta} |
  cone {theta1, theta2} | orthant {dim} | polyhedron {halfspaces} |
  union {components} | ball_intersection {balls}
Function types for "f":
  linear {a, c} | quadratic {c} | lower_cap {theta}

Unknown keys anywhere are rejected; dimensions of A, B, and x0 must agree.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .engine import ClassifyOptions, IterateOptions
from .functions import ConvexFunction, LinearFn, LowerCapFn, QuadraticFn
from .linalg import as_vector
from .sets import (
    AffineSubspace,
    Ball,
    BallIntersection,
    Cone2D,
    DisjointUnion,
    Epigraph,
    FiniteSet,
    Halfspace,
    Hyperplane,
    Orthant,
    Polyhedron,
    Ray2D,
    SetDescriptor,
)

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


@dataclass(frozen=True)
class RunConfig:
    A: SetDescriptor
    B: SetDescriptor
    x0: np.ndarray
    options: IterateOptions
    classify_options: ClassifyOptions
    seed: int | None


def _require_keys(obj: dict, allowed: set, required: set, where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise ConfigError(f"{where}: missing required key(s) {sorted(missing)}")


def _parse_function(obj, where: str) -> ConvexFunction:
    if not isinstance(obj, dict) or "type" not in obj:
        raise ConfigError(f"{where}: expected an object with a 'type' key")
    kind = obj["type"]
    try:
        if kind == "linear":
            _require_keys(obj, {"type", "a", "c"}, {"a"}, where)
            return LinearFn(a=tuple(obj["a"]), c=float(obj.get("c", 0.0)))
        if kind == "quadratic":
            _require_keys(obj, {"type", "c"}, set(), where)
            return QuadraticFn(c=float(obj.get("c", 0.0)))
        if kind == "lower_cap":
            _require_keys(obj, {"type", "theta"}, set(), where)
            return LowerCapFn(theta=float(obj.get("theta", 0.0)))
    except ConfigError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{where}: {e}") from e
    raise ConfigError(f"{where}: unknown function type {kind!r}")


def parse_set(obj, where: str) -> SetDescriptor:
    """Build one SetDescriptor from its JSON object form."""
    if not isinstance(obj, dict) or "type" not in obj:
        raise ConfigError(f"{where}: expected an object with a 'type' key")
    kind = obj["type"]
    try:
        if kind == "hyperplane":
            _require_keys(obj, {"type", "u", "eta"}, {"u", "eta"}, where)
            return Hyperplane(u=obj["u"], eta=obj["eta"])
        if kind == "halfspace":
            _require_keys(obj, {"type", "u", "eta"}, {"u", "eta"}, where)
            return Halfspace(u=obj["u"], eta=obj["eta"])
        if kind == "affine":
            _require_keys(obj, {"type", "L", "v"}, {"L", "v"}, where)
            return AffineSubspace(L=obj["L"], v=obj["v"])
        if kind == "ball":
            _require_keys(obj, {"type", "center", "radius"}, {"center", "radius"}, where)
            return Ball(center=obj["center"], radius=obj["radius"])
        if kind == "epigraph":
            _require_keys(obj, {"type", "f"}, {"f"}, where)
            return Epigraph(f=_parse_function(obj["f"], f"{where}.f"))
        if kind == "finite":
            _require_keys(obj, {"type", "points"}, {"points"}, where)
            return FiniteSet(points=tuple(tuple(p) for p in obj["points"]))
        if kind == "ray":
            _require_keys(obj, {"type", "theta"}, {"theta"}, where)
            return Ray2D(theta=obj["theta"])
        if kind == "cone":
            _require_keys(obj, {"type", "theta1", "theta2"}, {"theta1", "theta2"}, where)
            return Cone2D(theta1=obj["theta1"], theta2=obj["theta2"])
        if kind == "orthant":
            _require_keys(obj, {"type", "dim"}, {"dim"}, where)
            return Orthant(n=int(obj["dim"]))
        if kind == "polyhedron":
            _require_keys(obj, {"type", "halfspaces"}, {"halfspaces"}, where)
            hs = []
            for i, h in enumerate(obj["halfspaces"]):
                at = f"{where}.halfspaces[{i}]"
                _require_keys(h, {"type", "u", "eta"}, {"u", "eta"}, at)
                if h.get("type", "halfspace") != "halfspace":
                    raise ConfigError(f"{at}: entries must be halfspaces, got {h['type']!r}")
                hs.append(Halfspace(u=h["u"], eta=h["eta"]))
            return Polyhedron(halfspaces=tuple(hs))
        if kind == "union":
            _require_keys(obj, {"type", "components"}, {"components"}, where)
            comps = tuple(
                parse_set(c, f"{where}.components[{i}]")
                for i, c in enumerate(obj["components"])
            )
            return DisjointUnion(components=comps)
        if kind == "ball_intersection":
            _require_keys(obj, {"type", "balls"}, {"balls"}, where)
            balls = []
            for i, b in enumerate(obj["balls"]):
                at = f"{where}.balls[{i}]"
                _require_keys(b, {"type", "center", "radius"}, {"center", "radius"}, at)
                if b.get("type", "ball") != "ball":
                    raise ConfigError(f"{at}: entries must be balls, got {b['type']!r}")
                balls.append(Ball(center=b["center"], radius=b["radius"]))
            return BallIntersection(balls=tuple(balls))
    except ConfigError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{where}: {e}") from e
    raise ConfigError(f"{where}: unknown set type {kind!r}")


_OPTION_KEYS = {"max_iter", "fix_tol", "div_threshold", "cycle_max_period", "seed"}


def parse_config(text: str) -> RunConfig:
    """Parse and validate a version-1 JSON run configuration."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON (line {e.lineno}, column {e.colno}): {e.msg}") from e
    if not isinstance(doc, dict):
        raise ConfigError("config root must be an object")
    _require_keys(doc, {"version", "A", "B", "x0", "options"}, set(), "config")
    version = doc.get("version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported config version {version!r}; this build reads version 1")
    if "A" not in doc:
        raise ConfigError("A required")
    if "B" not in doc:
        raise ConfigError("B required")
    if "x0" not in doc:
        raise ConfigError("x0 required")
    A = parse_set(doc["A"], "A")
    B = parse_set(doc["B"], "B")
    try:
        x0 = as_vector(doc["x0"])
    except (TypeError, ValueError) as e:
        raise ConfigError(f"x0: {e}") from e

    dims = {"A": A.dim, "B": B.dim, "x0": x0.size}
    known = {k: d for k, d in dims.items() if d is not None}
    if len(set(known.values())) > 1:
        raise ConfigError(f"dimension mismatch: {known}")

    raw_opts = doc.get("options", {})
    if not isinstance(raw_opts, dict):
        raise ConfigError("options must be an object")
    _require_keys(raw_opts, _OPTION_KEYS, set(), "options")
    seed = raw_opts.get("seed")
    if seed is not None and not isinstance(seed, int):
        raise ConfigError(f"options.seed must be an integer, got {seed!r}")
    try:
        options = IterateOptions(
            max_iter=int(raw_opts.get("max_iter", 10_000)),
            fix_tol=float(raw_opts.get("fix_tol", 1e-11)),
            div_threshold=float(raw_opts.get("div_threshold", 1e8)),
        )
        classify_options = ClassifyOptions(
            cycle_max_period=int(raw_opts.get("cycle_max_period", 12))
        )
    except ValueError as e:
        raise ConfigError(f"options: {e}") from e
    return RunConfig(
        A=A, B=B, x0=x0, options=options, classify_options=classify_options, seed=seed
    )


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError(f"cannot read config {path!r}: {e}") from e
    return parse_config(text)

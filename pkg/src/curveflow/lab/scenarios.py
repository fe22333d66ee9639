"""Scenario definitions and the flat key-value configuration format.

One scenario per section; every knob is written out explicitly in the file so
a config fully determines a run with no hidden defaults.  Parsing validates
everything up front: syntax problems report line numbers, semantic problems
name the offending field.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from importlib import resources

from ..errors import ConfigError, InvalidInputError
from ..flow1d import FlowConfig, SpeedLaw

KIND_CURVE = "curve-flow"
KIND_AXI = "axi-flow"
KIND_RESCALE = "rescale-analysis"
KIND_ORACLE = "oracle-check"
KINDS = (KIND_CURVE, KIND_AXI, KIND_RESCALE, KIND_ORACLE)

# shape name -> required parameter names
CURVE_SHAPES = {
    "circle": ("radius",),
    "ellipse": ("a", "b"),
    "rectangle": ("width", "height"),
    "peanut": ("base_radius", "amplitude"),
    "spiral": ("inner_radius", "outer_radius", "winding"),
    "nested_pair": ("outer_radius", "a", "b"),
    "grim_reaper": ("half_width",),
}
AXI_SHAPES = {
    "sphere": ("r0",),
    "torus": ("ring_r", "tube_r"),
    "dumbbell": ("lobe_r", "tube_r", "tube_len"),
    "cylinder": ("radius", "period"),
}
SHAPES_BY_KIND = {
    KIND_CURVE: CURVE_SHAPES,
    KIND_AXI: AXI_SHAPES,
    KIND_RESCALE: AXI_SHAPES,
    KIND_ORACLE: {"selfcheck": ()},
}

ANALYSES_BY_KIND = {
    KIND_CURVE: ("radius-law", "area-law", "roundness", "convexification",
                 "eccentricity", "norm-length", "pair-distance", "translate"),
    KIND_AXI: ("radius-law", "neck"),
    KIND_RESCALE: ("blowup",),
    KIND_ORACLE: ("selfcheck",),
}

# keys every flow scenario must spell out (reproducibility over brevity)
FLOW_KEYS = ("n", "cfl_factor", "resample_every", "stop_area_fraction")
OPTION_KEYS = ("duration", "probe_count", "dial_powers", "save_snapshots")


@dataclass
class Scenario:
    name: str
    kind: str
    shape: str
    shape_params: dict[str, float] = field(default_factory=dict)
    n: int = 0
    law: SpeedLaw = field(default_factory=SpeedLaw)
    config: FlowConfig = field(default_factory=FlowConfig)
    analyses: tuple[str, ...] = ()
    checks: dict[str, float | str] = field(default_factory=dict)
    options: dict[str, str] = field(default_factory=dict)


def _fail(scenario: str, message: str):
    raise ConfigError(f"scenario [{scenario}]: {message}")


# analyses tied to one specific shape, in either direction
_SHAPE_ONLY = {
    "translate": "grim_reaper",
    "pair-distance": "nested_pair",
}
_RADIUS_SHAPES = {KIND_CURVE: "circle", KIND_AXI: "sphere"}


def _check_analysis_shapes(name, kind, shape, analyses):
    for analysis, needed in _SHAPE_ONLY.items():
        if analysis in analyses and shape != needed:
            _fail(name, f"analysis {analysis!r} requires shape {needed!r}")
        if shape == needed and any(a != analysis for a in analyses):
            _fail(name, f"shape {needed!r} supports only the {analysis!r} analysis")
    if "radius-law" in analyses and _RADIUS_SHAPES.get(kind) != shape:
        _fail(name, "analysis 'radius-law' requires shape "
                    f"{_RADIUS_SHAPES.get(kind, '<none>')!r} for {kind}")


def _get_float(items: dict[str, str], scenario: str, key: str) -> float:
    raw = items.pop(key, None)
    if raw is None:
        _fail(scenario, f"missing required key {key}")
    try:
        return float(raw)
    except ValueError:
        _fail(scenario, f"{key} must be a number, got {raw!r}")


def _get_int(items: dict[str, str], scenario: str, key: str) -> int:
    val = _get_float(items, scenario, key)
    if val != int(val):
        _fail(scenario, f"{key} must be an integer, got {val}")
    return int(val)


def _parse_scenario(name: str, items: dict[str, str]) -> Scenario:
    items = dict(items)
    kind = items.pop("kind", None)
    if kind is None:
        _fail(name, "missing required key kind")
    if kind not in KINDS:
        _fail(name, f"kind must be one of {', '.join(KINDS)}; got {kind!r}")

    shape = items.pop("shape", None)
    if shape is None:
        _fail(name, "missing required key shape")
    shapes = SHAPES_BY_KIND[kind]
    if shape not in shapes:
        _fail(name, f"shape for {kind} must be one of "
                    f"{', '.join(sorted(shapes))}; got {shape!r}")

    raw_analyses = items.pop("analyses", None)
    if raw_analyses is None:
        _fail(name, "missing required key analyses")
    analyses = tuple(a.strip() for a in raw_analyses.split(",") if a.strip())
    if not analyses:
        _fail(name, "analyses must list at least one analysis")
    allowed = ANALYSES_BY_KIND[kind]
    for a in analyses:
        if a not in allowed:
            _fail(name, f"analysis {a!r} not available for {kind} "
                        f"(choose from {', '.join(allowed)})")
    if len(set(analyses)) != len(analyses):
        _fail(name, "analyses must not repeat")
    _check_analysis_shapes(name, kind, shape, analyses)

    shape_params = {}
    for pname in shapes[shape]:
        shape_params[pname] = _get_float(items, name, f"shape.{pname}")
        if not shape_params[pname] > 0:
            _fail(name, f"shape.{pname} must be positive")

    checks: dict[str, float | str] = {}
    for key in [k for k in items if k.startswith("check.")]:
        raw = items.pop(key)
        try:
            checks[key[len("check."):]] = float(raw)
        except ValueError:
            checks[key[len("check."):]] = raw.strip()

    options = {k: items.pop(k) for k in list(items) if k in OPTION_KEYS}

    law = SpeedLaw()
    config = FlowConfig()
    n = 0
    if kind in (KIND_CURVE, KIND_AXI, KIND_RESCALE):
        n = _get_int(items, name, "n")
        if n < 8:
            _fail(name, "n must be at least 8")
        if kind == KIND_CURVE:
            p = _get_float(items, name, "law.p")
            try:
                law = SpeedLaw(p)
            except InvalidInputError as exc:
                _fail(name, str(exc))
        flow_kwargs = {}
        if shape == "grim_reaper":
            for key in ("cfl_factor", "resample_every"):
                if key in items:
                    flow_kwargs[key] = _get_float(items, name, key)
            if "duration" not in options:
                _fail(name, "missing required key duration")
        else:
            flow_kwargs["cfl_factor"] = _get_float(items, name, "cfl_factor")
            flow_kwargs["resample_every"] = int(_get_float(items, name, "resample_every"))
            flow_kwargs["stop_area_fraction"] = _get_float(items, name, "stop_area_fraction")
        if "resample_every" in flow_kwargs:
            flow_kwargs["resample_every"] = int(flow_kwargs["resample_every"])
        try:
            config = FlowConfig(**flow_kwargs)
        except InvalidInputError as exc:
            _fail(name, str(exc))

    if items:
        stray = ", ".join(sorted(items))
        _fail(name, f"unknown key(s): {stray}")

    return Scenario(
        name=name, kind=kind, shape=shape, shape_params=shape_params,
        n=n, law=law, config=config, analyses=analyses,
        checks=checks, options=options,
    )


def parse_config(text: str) -> list[Scenario]:
    """Parse a configuration document into validated scenarios."""
    parser = configparser.ConfigParser(interpolation=None, delimiters=("=",))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.DuplicateSectionError as exc:
        raise ConfigError(
            f"duplicate scenario name {exc.section!r}"
            + (f" at line {exc.lineno}" if exc.lineno else "")
        ) from exc
    except configparser.Error as exc:
        raise ConfigError(f"syntax error: {exc}") from exc
    scenarios = []
    for section in parser.sections():
        scenarios.append(_parse_scenario(section, dict(parser.items(section))))
    return scenarios


def parse_config_file(path) -> list[Scenario]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def builtin_catalog_text() -> str:
    return resources.files("curveflow.lab").joinpath("catalog.cfg").read_text()


def builtin_catalog() -> list[Scenario]:
    return parse_config(builtin_catalog_text())

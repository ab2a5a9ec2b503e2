"""Run configuration read from TOML.

Keys (all optional; defaults in brackets)::

    [potential]
    terms = [{kind = "linear-u", coefficient = 1.0},
             {kind = "re-poly", coefficient = 0.3, degree = 2}]

    [domain]
    u_min = -1.0    u_max = 1.0    v_min = -1.0    v_max = 1.0
    nu = 65         nv = 65        base_index = [32, 32]   # [centre]

    [run]
    lambdas = [0.25, 0.75, 1.0]
    refinement_levels = 3
    substeps = 1
    output_dir = "out"

    [export]
    formats = ["obj", "json"]
    model = "poincare"

Dotted keys (``domain.nu = 33``) are equivalent to the section form.
"""
from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import FlatFrontError
from .frames import GridDomain
from .potential import HarmonicPotential, Term, default_potential

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

EXPORT_FORMATS = ("obj", "csv", "json")
MODELS = ("poincare", "raw")
DEFAULT_LAMBDAS = (0.25, 0.75, 1.0)

_ALLOWED = {
    "potential": {"terms"},
    "domain": {"u_min", "u_max", "v_min", "v_max", "nu", "nv", "base_index"},
    "run": {"lambdas", "refinement_levels", "substeps", "output_dir"},
    "export": {"formats", "model"},
}


class ConfigError(FlatFrontError):
    """Unparseable or invalid configuration."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


@dataclass(frozen=True)
class RunConfig:
    potential: HarmonicPotential = field(default_factory=default_potential)
    domain: GridDomain = field(default_factory=GridDomain)
    lambdas: tuple[float, ...] = DEFAULT_LAMBDAS
    refinement_levels: int = 3
    substeps: int = 1
    output_dir: str = "out"
    export_formats: tuple[str, ...] = ("obj", "json")
    projection_model: str = "poincare"

    def validate(self, for_validation: bool = False) -> RunConfig:
        for lam in self.lambdas:
            if lam == 0.5:
                raise ConfigError("run.lambdas contains the degenerate parameter lambda = 0.5")
        if self.refinement_levels < 1:
            raise ConfigError("run.refinement_levels must be >= 1")
        if self.substeps < 1:
            raise ConfigError("run.substeps must be >= 1")
        bad = set(self.export_formats) - set(EXPORT_FORMATS)
        if bad:
            raise ConfigError(f"export.formats: unknown format(s) {sorted(bad)}")
        if self.projection_model not in MODELS:
            raise ConfigError(f"export.model must be one of {MODELS}")
        if for_validation and min(self.domain.nu, self.domain.nv) < 9:
            raise ConfigError("validation runs need domain.nu, domain.nv >= 9")
        return self

    def with_overrides(self, lambdas=None, refine=None, out=None, model=None) -> RunConfig:
        cfg = self
        if lambdas is not None:
            cfg = replace(cfg, lambdas=tuple(float(x) for x in lambdas))
        if refine is not None:
            cfg = replace(cfg, refinement_levels=int(refine))
        if out is not None:
            cfg = replace(cfg, output_dir=str(out))
        if model is not None:
            cfg = replace(cfg, projection_model=model)
        return cfg

    def to_dict(self) -> dict:
        return {
            "potential": {"terms": self.potential.to_spec()},
            "domain": self.domain.to_dict(),
            "run": {"lambdas": [float(x) for x in self.lambdas],
                    "refinement_levels": self.refinement_levels,
                    "substeps": self.substeps},
            "export": {"formats": list(self.export_formats), "model": self.projection_model},
        }


def _locate(text: str, key: str) -> tuple[int | None, int | None]:
    """Line/column (1-based) of the first assignment to ``key`` in ``text``."""
    pat = re.compile(r"(^|[\s.])" + re.escape(key) + r"\s*=")
    for n, line in enumerate(text.splitlines(), 1):
        m = pat.search(line)
        if m:
            return n, m.start() + len(m.group(1)) + 1
    return None, None


def _tomli_position(exc: Exception) -> tuple[int | None, int | None]:
    line = getattr(exc, "lineno", None)
    col = getattr(exc, "colno", None)
    if line is None:
        m = re.search(r"line (\d+), column (\d+)", str(exc))
        if m:
            line, col = int(m.group(1)), int(m.group(2))
    return line, col


def _message(exc: Exception) -> str:
    msg = getattr(exc, "msg", None) or str(exc)
    return re.sub(r"\s*\(at line \d+, column \d+\)", "", msg)


def parse_config(text: str) -> RunConfig:
    """Parse TOML text into a validated :class:`RunConfig`."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line, col = _tomli_position(exc)
        raise ConfigError(f"config parse error: {_message(exc)}", line, col) from None

    for section, body in data.items():
        if section not in _ALLOWED:
            raise ConfigError(f"unknown section {section!r}", *_locate(text, section))
        if not isinstance(body, dict):
            raise ConfigError(f"{section!r} must be a table", *_locate(text, section))
        for key in body:
            if key not in _ALLOWED[section]:
                raise ConfigError(f"unknown key {section}.{key}", *_locate(text, key))

    def get(section, key, default):
        return data.get(section, {}).get(key, default)

    def fail(key, msg):
        return ConfigError(f"{key}: {msg}", *_locate(text, key.split(".")[-1]))

    cfg = RunConfig()
    try:
        terms = get("potential", "terms", None)
        potential = (cfg.potential if terms is None
                     else HarmonicPotential(tuple(Term.from_dict(t) for t in terms)))
    except (TypeError, ValueError) as exc:
        raise fail("potential.terms", str(exc)) from None

    dom_keys = {k: get("domain", k, None) for k in _ALLOWED["domain"]}
    dom_kw = {k: v for k, v in dom_keys.items() if v is not None}
    if "base_index" in dom_kw:
        dom_kw["base_index"] = tuple(int(x) for x in dom_kw["base_index"])
    try:
        domain = GridDomain(**dom_kw)
    except (TypeError, ValueError) as exc:
        key = next(iter(dom_kw), "domain")
        raise fail(f"domain.{key}", str(exc)) from None

    lambdas = get("run", "lambdas", list(cfg.lambdas))
    if not isinstance(lambdas, list) or not all(isinstance(x, (int, float)) for x in lambdas):
        raise fail("run.lambdas", "expected a list of numbers")
    levels = get("run", "refinement_levels", cfg.refinement_levels)
    substeps = get("run", "substeps", cfg.substeps)
    for key, val in (("run.refinement_levels", levels), ("run.substeps", substeps)):
        if not isinstance(val, int) or isinstance(val, bool):
            raise fail(key, "expected an integer")
    formats = get("export", "formats", list(cfg.export_formats))
    if not isinstance(formats, list):
        raise fail("export.formats", "expected a list of strings")

    out = RunConfig(
        potential=potential,
        domain=domain,
        lambdas=tuple(float(x) for x in lambdas),
        refinement_levels=levels,
        substeps=substeps,
        output_dir=str(get("run", "output_dir", cfg.output_dir)),
        export_formats=tuple(formats),
        projection_model=str(get("export", "model", cfg.projection_model)),
    )
    try:
        return out.validate()
    except ConfigError as exc:
        key = {"degenerate": "lambdas", "refinement": "refinement_levels",
               "substeps": "substeps", "formats": "formats", "model": "model"}
        for word, k in key.items():
            if word in str(exc):
                raise ConfigError(str(exc), *_locate(text, k)) from None
        raise


def load_config(path: str | Path) -> RunConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))

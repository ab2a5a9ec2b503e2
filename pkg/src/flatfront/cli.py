"""Command line front end: ``flatfront build | deform | validate | export``.

Exit codes: 0 success, 1 a validation bound failed, 2 configuration error
(including lambda = 1/2), 3 inadmissible potential, 4 I/O failure,
5 transport diverged.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .config import ConfigError, RunConfig, load_config
from .errors import (
    DegenerateParameter,
    FlatFrontError,
    NotHarmonic,
    PotentialOverflow,
    TransportDiverged,
)
from .export import export_mesh, write_report
from .frames import build_front
from .validation import diagnostics, failing_criteria, run_validation

log = logging.getLogger("flatfront")

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_HARMONIC, EXIT_IO, EXIT_DIVERGED = range(6)


def lambda_tag(lam: float) -> str:
    return format(float(lam), "g")


def _mesh_formats(cfg: RunConfig, fmt: str | None) -> list[str]:
    if fmt:
        return [fmt]
    return [f for f in cfg.export_formats if f in ("obj", "csv")]


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_meshes(cfg: RunConfig, fronts: list[tuple[str, object]], formats: list[str]) -> None:
    out = _out_dir(cfg)
    for name, front in fronts:
        for fmt in formats:
            path = export_mesh(front, out / f"{name}.{fmt}", fmt, cfg.projection_model)
            log.info("wrote %s", path)


def run_build(cfg: RunConfig, fmt: str | None = None) -> int:
    front = build_front(cfg.potential, cfg.domain, 0.0, substeps=cfg.substeps)
    report = diagnostics(cfg, "build", lambdas=[], levels=1, criteria=False)
    _write_meshes(cfg, [("front_base", front)], _mesh_formats(cfg, fmt))
    if "json" in cfg.export_formats:
        write_report(report, _out_dir(cfg) / "report.json")
    print(f"base front {cfg.domain.nu}x{cfg.domain.nv}: "
          f"{report['base']['singular_samples']} singular samples, "
          f"flatness deviation {report['base']['flatness_deviation']:.3g}")
    return EXIT_OK


def _deformed_fronts(cfg: RunConfig) -> list[tuple[str, object]]:
    fronts = [("front_base", build_front(cfg.potential, cfg.domain, 0.0, cfg.substeps))]
    for lam in cfg.lambdas:
        # meshes come from the frame integrated at lam, which is bit-identical
        # to the base front at lam = 0; the Calapso route is the cross-check
        fronts.append((f"front_lambda_{lambda_tag(lam)}",
                       build_front(cfg.potential, cfg.domain, lam, cfg.substeps)))
    return fronts


def run_deform(cfg: RunConfig, fmt: str | None = None) -> int:
    report = diagnostics(cfg, "deform", levels=1, criteria=False)
    _write_meshes(cfg, _deformed_fronts(cfg), _mesh_formats(cfg, fmt))
    if "json" in cfg.export_formats:
        write_report(report, _out_dir(cfg) / "report.json")
    for rec in report["lambdas"]:
        lv = rec["level0"]
        print(f"lambda {lambda_tag(rec['lambda'])} ({rec['branch']}): "
              f"pipeline agreement {rec['metrics']['pipeline_agreement'][0]:.3g}, "
              f"flatness deviation {lv['flatness_deviation_ambient']:.3g}")
    return EXIT_OK


def run_validate(cfg: RunConfig) -> int:
    cfg.validate(for_validation=True)
    report = run_validation(cfg)
    write_report(report, _out_dir(cfg) / "report.json")
    for c in report["criteria"]:
        state = {True: "PASS", False: "FAIL", None: "SKIP"}[c["passed"]]
        print(f"[{state}] criterion {c['id']}: {c['title']}")
    bad = failing_criteria(report)
    for line in bad:
        print(f"failed {line}", file=sys.stderr)
    return EXIT_VALIDATION if bad else EXIT_OK


def run_export(cfg: RunConfig, fmt: str | None = None) -> int:
    formats = _mesh_formats(cfg, fmt) or ["obj"]
    _write_meshes(cfg, _deformed_fronts(cfg), formats)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="TOML run configuration")
    common.add_argument("--out", help="output directory (overrides run.output_dir)")
    common.add_argument("--lambda", dest="lambdas", type=float, action="append",
                        metavar="V", help="deformation parameter; repeatable, overrides config")
    common.add_argument("--refine", type=int, metavar="N", help="number of refinement levels")
    common.add_argument("--format", choices=("obj", "csv"), help="mesh format")
    common.add_argument("--model", choices=("poincare", "raw"), help="vertex model for OBJ")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="flatfront",
                                     description="Flat fronts in hyperbolic space and their "
                                                 "Lie sphere geometric deformation.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common], help="build the base front")
    sub.add_parser("deform", parents=[common], help="deform the base front for each lambda")
    sub.add_parser("validate", parents=[common], help="run the acceptance diagnostics")
    sub.add_parser("export", parents=[common], help="write meshes only")
    return parser


def _resolve(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    cfg = cfg.with_overrides(args.lambdas, args.refine, args.out, args.model)
    if args.format and args.command != "validate":
        formats = tuple(f for f in cfg.export_formats if f == "json") + (args.format,)
        cfg = replace(cfg, export_formats=formats)
    return cfg.validate()


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _resolve(args)
        if args.command == "build":
            return run_build(cfg, args.format)
        if args.command == "deform":
            return run_deform(cfg, args.format)
        if args.command == "validate":
            return run_validate(cfg)
        return run_export(cfg, args.format)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DegenerateParameter as exc:
        print(f"config error: degenerate parameter: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PotentialOverflow as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NotHarmonic as exc:
        print(f"inadmissible potential: {exc}", file=sys.stderr)
        return EXIT_HARMONIC
    except TransportDiverged as exc:
        print(f"transport diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FlatFrontError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: eye expansion, MLS shrink, or both, plus ``--bench``.

Exit codes: 0 success, 2 bad arguments, 3 I/O or format failure,
4 landmark validation failure, 5 degenerate MLS configuration.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass
from typing import Optional

from .bench import bench
from .errors import (
    DegenerateConfigurationError,
    DegenerateGeometryError,
    ImageFormatError,
    LandmarkFormatError,
)
from .expansion import CenterScheme, ExpansionParams, expand_eyes
from .imaging import load_png, save_png
from .landmarks import load_landmarks, validate_against_image
from .mls import Method, MlsParams, deform_image
from .shrink import ShrinkConfig, shrink_control_pairs

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_VALIDATION = 4
EXIT_DEGENERATE = 5

log = logging.getLogger("facewarp")


@dataclass
class ShrinkSettings:
    config: ShrinkConfig
    mls: MlsParams


@dataclass
class WarpConfig:
    input_image: str
    landmarks: str
    output: Optional[str]
    expansion: Optional[ExpansionParams] = None
    shrink: Optional[ShrinkSettings] = None
    threads: int = 1
    bench: bool = False
    reps: int = 5
    bench_json: Optional[str] = None


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="facewarp",
        description="Deform a face image from 106-point landmarks.",
    )
    p.add_argument("--input", help="input PNG (8-bit RGB/RGBA)")
    p.add_argument("--landmarks", help="landmark JSON file")
    p.add_argument("--output", help="output PNG")
    p.add_argument("--expand-a", type=float, help="eye expansion strength in [-100, 100]")
    p.add_argument("--center-scheme", choices=[s.value for s in CenterScheme], default="landmark")
    p.add_argument("--shrink-method", choices=[m.value for m in Method])
    p.add_argument("--alpha", type=float, default=1.0, help="MLS weight exponent (default 1)")
    p.add_argument("--strength", type=float, help="shrink distance in pixels (default: jaw width / 60)")
    p.add_argument("--grid", type=int, default=4, help="MLS grid spacing in pixels (default 4)")
    p.add_argument("--border-anchors", type=int, default=4, help="anchors per image edge (default 4)")
    p.add_argument("--axis-epsilon", type=float, default=1.0, help="midline half-width in pixels")
    p.add_argument("--bench", action="store_true", help="time affine/similarity/rigid shrink")
    p.add_argument("--reps", type=int, default=5, help="benchmark repetitions (>= 3)")
    p.add_argument("--bench-json", help="also write the benchmark report to this file")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--config", help="JSON file whose keys override the flags")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


_CONFIG_KEYS = {
    "input", "landmarks", "output", "expand_a", "center_scheme", "shrink_method", "alpha",
    "strength", "grid", "border_anchors", "axis_epsilon", "bench", "reps", "bench_json",
    "threads", "gains",
}  # fmt: skip


def _apply_config_file(ns: argparse.Namespace) -> None:
    with open(ns.config, "rb") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{ns.config}: malformed JSON ({exc.msg})") from None
    if not isinstance(doc, dict):
        raise UsageError(f"{ns.config}: config must be a JSON object")
    unknown = set(doc) - _CONFIG_KEYS
    if unknown:
        raise UsageError(f"{ns.config}: unknown keys {sorted(unknown)}")
    for key, value in doc.items():
        setattr(ns, key, value)


def config_from_args(ns: argparse.Namespace) -> WarpConfig:
    if ns.config:
        _apply_config_file(ns)
    if not ns.input or not ns.landmarks:
        raise UsageError("--input and --landmarks are required")
    if not ns.bench and not ns.output:
        raise UsageError("--output is required unless --bench is given")
    if not ns.bench and ns.expand_a is None and ns.shrink_method is None:
        raise UsageError("nothing to do: give --expand-a and/or --shrink-method")
    if ns.threads < 1:
        raise UsageError("--threads must be >= 1")
    try:
        expansion = None
        if ns.expand_a is not None:
            expansion = ExpansionParams(float(ns.expand_a), CenterScheme(ns.center_scheme))
        shrink = None
        if ns.shrink_method is not None or ns.bench:
            shrink = ShrinkSettings(
                ShrinkConfig(
                    strength=ns.strength,
                    axis_epsilon=ns.axis_epsilon,
                    border_anchors=ns.border_anchors,
                    group_gains=getattr(ns, "gains", None) or {},
                ),
                MlsParams(ns.alpha, Method(ns.shrink_method or "rigid"), ns.grid),
            )
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None
    if ns.bench and ns.reps < 3:
        raise UsageError("--reps must be at least 3")
    return WarpConfig(
        ns.input, ns.landmarks, ns.output, expansion, shrink,
        ns.threads, ns.bench, ns.reps, ns.bench_json,
    )  # fmt: skip


def _load_inputs(cfg: WarpConfig):
    img = load_png(cfg.input_image)
    lm = load_landmarks(cfg.landmarks)
    h, w = img.shape[:2]
    if lm.width is not None and lm.height is not None and (lm.width, lm.height) != (w, h):
        raise LandmarkFormatError(
            f"landmarks were recorded for {lm.width}x{lm.height} but the image is {w}x{h}"
        )
    issues = validate_against_image(lm, w, h)
    if cfg.expansion is None:
        issues = [i for i in issues if i.kind != "degenerate_eye"]
    if issues:
        raise LandmarkFormatError("; ".join(i.message for i in issues))
    return img, lm


def run_pipeline(cfg: WarpConfig) -> int:
    """Expansion first, then shrinking; writes the output PNG and prints a summary."""
    img, lm = _load_inputs(cfg)
    h, w = img.shape[:2]
    parts = []
    out = img
    if cfg.expansion is not None:
        start = time.perf_counter()
        out = expand_eyes(out, lm, cfg.expansion, threads=cfg.threads)
        parts.append(
            f"expand a={cfg.expansion.a:g} center={cfg.expansion.scheme.value} "
            f"{time.perf_counter() - start:.3f}s"
        )
    if cfg.shrink is not None:
        start = time.perf_counter()
        cps = shrink_control_pairs(lm, cfg.shrink.config, w, h)
        out = deform_image(out, cps, cfg.shrink.mls, threads=cfg.threads)
        m = cfg.shrink.mls
        parts.append(
            f"shrink {m.method.value} alpha={m.alpha:g} grid={m.grid_spacing} "
            f"controls={len(cps)} {time.perf_counter() - start:.3f}s"
        )
    save_png(out, cfg.output)
    print(f"{cfg.output}: {w}x{h}; " + "; ".join(parts))
    return EXIT_OK


def run_bench(cfg: WarpConfig) -> int:
    img, lm = _load_inputs(cfg)
    report = bench(
        img, lm, cfg.shrink.config, cfg.shrink.mls, reps=cfg.reps, threads=cfg.threads
    )
    print(report.table())
    print(report.to_json())
    if cfg.bench_json:
        with open(cfg.bench_json, "w", encoding="utf-8") as fh:
            fh.write(report.to_json() + "\n")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)  # exits with status 2 on bad flags
    logging.basicConfig(
        level=logging.DEBUG if ns.verbose else logging.WARNING,
        format="facewarp: %(levelname)s: %(message)s",
    )
    try:
        cfg = config_from_args(ns)
        return run_bench(cfg) if cfg.bench else run_pipeline(cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"facewarp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LandmarkFormatError, DegenerateGeometryError) as exc:
        print(f"facewarp: invalid landmarks: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except DegenerateConfigurationError as exc:
        print(f"facewarp: degenerate MLS configuration: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (OSError, ImageFormatError) as exc:
        name, reason = getattr(exc, "filename", None), getattr(exc, "strerror", None)
        detail = f"{name}: {reason}" if name and reason else str(exc)
        print(f"facewarp: I/O error: {detail}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

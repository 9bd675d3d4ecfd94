"""Command-line entry point: ``threebox <scenario> [options]``.

Scenarios: ``weak-values``, ``scan``, ``fig2``, ``two-pointer``.  Options may
also come from a line-based ``key = value`` config file passed with
``--config``; command-line flags override file values.

Exit codes: 0 success, 1 computation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import experiment as exp
from .railspace import PRESETS, RailState, inner, make_state, preset
from .weakcalc import abl_probability, weak_probabilities

SCENARIOS = ("weak-values", "scan", "fig2", "two-pointer")
POLARIZERS = ("none", "block-v", "block-h")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    scenario: str
    states: str = "generalized"
    pre: Optional[tuple[complex, ...]] = None
    post: Optional[tuple[complex, ...]] = None
    rail: str = "C"
    k_min: float = -3.0
    k_max: float = 3.0
    steps: int = 121
    k_c: float = -0.69
    points: int = 801
    theta_deg: float = 9.6
    visibility: float = 1.0
    polarizer: str = "none"
    pixel_scale: float = exp.DEFAULT_PIXELS_PER_SIGMA
    output: Optional[str] = None

    def resolve_states(self) -> tuple[RailState, RailState]:
        if self.pre is not None or self.post is not None:
            base_pre, base_post = preset(self.states)
            pre = make_state(self.pre) if self.pre is not None else base_pre
            post = make_state(self.post) if self.post is not None else base_post
            return pre, post
        return preset(self.states)


_CONVERTERS = {
    "scenario": str, "states": str, "rail": str, "polarizer": str, "output": str,
    "k_min": float, "k_max": float, "k_c": float, "theta_deg": float,
    "visibility": float, "pixel_scale": float,
    "steps": int, "points": int,
}


def parse_amplitudes(text: str) -> tuple[complex, ...]:
    """Parse a comma-separated amplitude list such as ``0.5,0.5,-0.7071`` or ``1,1j,0``."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    return tuple(complex(p.replace(" ", "")) for p in parts)


def format_amplitudes(state: RailState) -> str:
    """Inverse of ``parse_amplitudes`` at full precision."""
    out = []
    for a in state.amplitudes:
        out.append(repr(a.real) if a.imag == 0 else repr(a).replace(" ", ""))
    return ",".join(out)


def _convert(key: str, raw: str):
    if key in ("pre", "post"):
        try:
            amps = parse_amplitudes(raw)
        except ValueError:
            raise UsageError(f"{key}: malformed amplitude list {raw!r}") from None
        if len(amps) < 2:
            raise UsageError(f"{key}: need at least 2 amplitudes")
        return amps
    conv = _CONVERTERS[key]
    try:
        return conv(raw)
    except ValueError:
        raise UsageError(f"{key}: malformed number {raw!r}") from None


def parse_config_text(text: str) -> dict:
    """Read ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONVERTERS and key not in ("pre", "post"):
            raise UsageError(f"config line {lineno}: unknown key {key!r}")
        values[key] = _convert(key, raw)
    return values


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="threebox", description="Three-box weak measurement simulator")
    p.add_argument("scenario", nargs="?", help="one of: " + ", ".join(SCENARIOS))
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--states", help="state preset: " + ", ".join(sorted(PRESETS)))
    p.add_argument("--pre", help="explicit pre-selected amplitudes, comma separated")
    p.add_argument("--post", help="explicit post-selected amplitudes, comma separated")
    p.add_argument("--rail")
    p.add_argument("--k-min")
    p.add_argument("--k-max")
    p.add_argument("--steps")
    p.add_argument("--k-c", help="rail-C displacement for fig2, in sigma")
    p.add_argument("--points", help="profile grid points for fig2")
    p.add_argument("--theta-deg")
    p.add_argument("--visibility")
    p.add_argument("--polarizer", help="none, block-v or block-h")
    p.add_argument("--pixel-scale", help="pixels per sigma")
    p.add_argument("--output", "-o", help="CSV path; '-' or omitted writes to stdout")
    return p


def parse_config(argv: Sequence[str], config_text: Optional[str] = None) -> RunConfig:
    args = _build_parser().parse_args(list(argv))
    values = {}
    if args.config is not None:
        try:
            with open(args.config, encoding="utf-8") as fh:
                config_text = fh.read()
        except OSError as exc:
            raise UsageError(f"config: cannot read {args.config!r}: {exc}") from None
    if config_text is not None:
        values.update(parse_config_text(config_text))
    for key, raw in vars(args).items():
        if key == "config" or raw is None:
            continue
        values[key] = _convert(key, raw)

    scenario = values.pop("scenario", None)
    if scenario is None:
        raise UsageError("scenario: missing required key")
    if scenario not in SCENARIOS:
        raise UsageError(f"scenario: unknown scenario {scenario!r}")
    cfg = RunConfig(scenario=scenario, **values)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig):
    if cfg.states not in PRESETS:
        raise UsageError(f"states: unknown preset {cfg.states!r}")
    if not 0.0 <= cfg.visibility <= 1.0:
        raise UsageError("visibility: visibility out of range")
    if cfg.polarizer not in POLARIZERS:
        raise UsageError(f"polarizer: expected one of {POLARIZERS}, got {cfg.polarizer!r}")
    if cfg.scenario in ("scan", "two-pointer"):
        if not cfg.k_min < cfg.k_max:
            raise UsageError("k_min: must be below k_max")
        if cfg.steps < 2:
            raise UsageError("steps: need at least 2")
    if cfg.scenario == "two-pointer" and (cfg.theta_deg == 0 or abs(cfg.theta_deg) >= 90):
        raise UsageError("theta_deg: must be nonzero with magnitude below 90")
    if cfg.scenario == "fig2" and cfg.points < 2:
        raise UsageError("points: need at least 2")
    if not cfg.pixel_scale > 0:
        raise UsageError("pixel_scale: must be positive")
    try:
        pre, post = cfg.resolve_states()
    except ValueError as exc:
        raise UsageError(f"pre/post: {exc}") from None
    if pre.dim != post.dim:
        raise UsageError("pre/post: dimension mismatch")
    if cfg.rail not in pre.labels:
        raise UsageError(f"rail: unknown rail {cfg.rail!r}")


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.17e}"


def _csv_text(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _weak_values_summary(pre: RailState, post: RailState) -> list[str]:
    lines = [f"pre  = {format_amplitudes(pre)}", f"post = {format_amplitudes(post)}"]
    ov = inner(post, pre)
    lines.append(f"overlap <post|pre> = {ov.real:.12g}" + (f" {ov.imag:+.12g}j" if ov.imag else ""))
    try:
        wps = weak_probabilities(pre, post)
    except ValueError as exc:
        lines.append(f"weak values undefined: {exc}")
        return lines
    for label, wv in zip(pre.labels, wps):
        im = f" {wv.imag:+.6g}j" if abs(wv.imag) > 1e-12 else ""
        lines.append(f"P_{label}W={wv.real:+.6g}{im}  ABL(P_{label})={abl_probability(pre, post, label):.6g}")
    lines.append(f"sum of weak probabilities = {sum(wps).real:.12g}")
    return lines


def run(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    pre, post = cfg.resolve_states()
    summary = _weak_values_summary(pre, post)

    if cfg.scenario == "weak-values":
        wps = weak_probabilities(pre, post)
        rows = [(lab, w.real, w.imag, abl_probability(pre, post, lab))
                for lab, w in zip(pre.labels, wps)]
        text = _csv_text(["rail", "weak_p_re", "weak_p_im", "abl_p"], rows)
    elif cfg.scenario == "scan":
        spec = exp.ScanSpec(cfg.rail, cfg.k_min, cfg.k_max, cfg.steps,
                            exp.VisibilityModel(cfg.visibility))
        series = exp.scan_single_rail(spec, pre, post)
        text = _csv_text(
            ["k_sigma", "mean_shift_sigma", "inferred_p", "success_prob", "weak_regime"],
            [(r.K, r.mean_shift, r.inferred, r.success_probability, r.weak_regime) for r in series])
        n_weak = sum(r.weak_regime for r in series)
        summary.append(f"scan rail {cfg.rail}: {len(series)} points, {n_weak} in weak regime (|K| < "
                       f"{exp.WEAK_REGIME_LIMIT} sigma), {len(series) - n_weak} beyond")
        summary.append(f"strong-limit ABL probability for rail {cfg.rail}: "
                       f"{abl_probability(pre, post, cfg.rail):.6g}")
    elif cfg.scenario == "fig2":
        prof = exp.fig2_profiles(cfg.k_c, exp.PixelScale(cfg.pixel_scale), cfg.points,
                                 cfg.visibility, states=(pre, post))
        cols = ["x_pixels", "i_rail_a", "i_rail_b", "i_rail_c", "i_postselected"]
        text = _csv_text(cols, zip(*(prof[c] for c in cols)))
        x = prof["x_pixels"]
        summary.append(f"rail C mean = {exp.profile_mean(x, prof['i_rail_c']):.4g} px, "
                       f"post-selected mean = {exp.profile_mean(x, prof['i_postselected']):.4g} px")
    else:
        theta = math.radians(cfg.theta_deg)
        polarizer = None if cfg.polarizer == "none" else cfg.polarizer[-1].upper()
        k_b = np.linspace(cfg.k_min, cfg.k_max, cfg.steps)
        series = exp.two_pointer_scan(k_b, theta, pre, post, polarizer, visibility=cfg.visibility)
        text = _csv_text(
            ["k_b_sigma", "mean_shift_sigma", "inferred_p_b", "inferred_p_c", "success_prob"],
            [(r.K, r.mean_shift, r.inferred, r.inferred_p_c, r.success_probability) for r in series])
        bad = [r for r in series if r.error]
        if bad:
            summary.append(f"{len(bad)} rows failed: {bad[0].error}")
        summary.append(f"polarization rotation {cfg.theta_deg} deg on rail C, polarizer {cfg.polarizer}")

    to_stdout = cfg.output in (None, "-")
    if to_stdout:
        stdout.write(text)
        print("\n".join(summary), file=sys.stderr)
    else:
        try:
            with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {cfg.output!r}: {exc}", file=sys.stderr)
            return 1
        print("\n".join(summary), file=stdout)
        print(f"wrote {cfg.output}", file=stdout)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    try:
        return run(cfg)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

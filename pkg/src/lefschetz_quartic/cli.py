"""Command line entry point: verify-setup, tables, cycles, plot.

Exit codes: 0 success, 2 setup or configuration failure, 3 tracking
failure, 4 surface or relation failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__, hiprec, tracker
from .errors import ConfigError, MonodromyError, SurfaceError, TrackingError
from .pencil import PencilConfig, katz_dual_degree
from .pipeline import ModelOptions, MonodromyModel

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

log = logging.getLogger("lefschetz_quartic")

SCHEMA_VERSION = 1
EXIT_OK, EXIT_SETUP, EXIT_TRACKING, EXIT_RELATION = 0, 2, 3, 4


# ---------------------------------------------------------------- configuration

@dataclass
class RunConfig:
    c1: Fraction = Fraction(7, 8)
    c2: Fraction = Fraction(3, 4)
    lasso_radius_factor: float = 0.25
    basepoint: complex = tracker.DEFAULT_BASEPOINT
    output_dir: str = "out"
    track: tracker.TrackOptions = field(default_factory=tracker.TrackOptions)
    cluster_radius: float = 1e-5
    mu_waypoints: Optional[list] = None

    @property
    def pencil(self) -> PencilConfig:
        return PencilConfig(self.c1, self.c2)

    def model_options(self, workers: int = 1) -> ModelOptions:
        return ModelOptions(
            basepoint=self.basepoint,
            lasso_radius_factor=self.lasso_radius_factor,
            track=self.track,
            waypoints=self.mu_waypoints,
            cluster_radius=self.cluster_radius,
            workers=workers,
        )


_TOP_KEYS = {"c1", "c2", "lasso_radius_factor", "basepoint", "output_dir", "tracking", "collision", "paths"}
_TRACK_KEYS = {"initial_step", "max_step", "min_step", "contract", "terminal_floor"}
_COLLISION_KEYS = {"eps_collide", "cluster_radius"}


def _rational(x, name) -> Fraction:
    try:
        if isinstance(x, float):
            return Fraction(x).limit_denominator(10**12)
        return Fraction(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{name}: not a rational number: {x!r}") from exc


def _positive(x, name) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not x > 0:
        raise ConfigError(f"{name} must be a positive number")
    return float(x)


def _point(x, name) -> complex:
    if not (isinstance(x, list) and len(x) == 2 and all(isinstance(t, (int, float)) for t in x)):
        raise ConfigError(f"{name} must be a [re, im] pair")
    return complex(x[0], x[1])


def parse_config(data: dict) -> RunConfig:
    """Validate a parsed TOML document; unknown keys are errors."""
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
    cfg = RunConfig()
    if "c1" in data:
        cfg.c1 = _rational(data["c1"], "c1")
    if "c2" in data:
        cfg.c2 = _rational(data["c2"], "c2")
    if "lasso_radius_factor" in data:
        f = _positive(data["lasso_radius_factor"], "lasso_radius_factor")
        if f >= 0.5:
            raise ConfigError("lasso_radius_factor must be below 0.5")
        cfg.lasso_radius_factor = f
    if "basepoint" in data:
        cfg.basepoint = _point(data["basepoint"], "basepoint")
    if "output_dir" in data:
        if not isinstance(data["output_dir"], str):
            raise ConfigError("output_dir must be a string")
        cfg.output_dir = data["output_dir"]
    tr = data.get("tracking", {})
    if not isinstance(tr, dict) or set(tr) - _TRACK_KEYS:
        raise ConfigError(f"bad [tracking] table; allowed keys {sorted(_TRACK_KEYS)}")
    opts = tracker.TrackOptions()
    for k, val in tr.items():
        setattr(opts, k, _positive(val, f"tracking.{k}"))
    if opts.contract >= 0.5:
        raise ConfigError("tracking.contract must be below 0.5")
    col = data.get("collision", {})
    if not isinstance(col, dict) or set(col) - _COLLISION_KEYS:
        raise ConfigError(f"bad [collision] table; allowed keys {sorted(_COLLISION_KEYS)}")
    if "eps_collide" in col:
        opts.eps_collide = _positive(col["eps_collide"], "collision.eps_collide")
    if "cluster_radius" in col:
        cfg.cluster_radius = _positive(col["cluster_radius"], "collision.cluster_radius")
    cfg.track = opts
    paths = data.get("paths", {})
    if not isinstance(paths, dict) or set(paths) - {"mu"}:
        raise ConfigError("bad [paths] table; only 'mu' is allowed")
    if "mu" in paths:
        mu = paths["mu"]
        if not isinstance(mu, list) or len(mu) != 36:
            raise ConfigError("paths.mu must list 36 waypoint lists")
        cfg.mu_waypoints = [tuple(_point(p, f"paths.mu[{i}]") for p in wp) for i, wp in enumerate(mu)]
        for i, wp in enumerate(cfg.mu_waypoints):
            if len(wp) < 2:
                raise ConfigError(f"paths.mu[{i}] needs at least two waypoints")
    return cfg


def load_config(path: Optional[str]) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
    return parse_config(data)


# ---------------------------------------------------------------- report serialization

def _num(x: float) -> float:
    return float(f"{float(x):.12g}")


def jsonable(obj):
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _num(obj.real), "im": _num(obj.imag)}
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in obj]
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(jsonable(report), sort_keys=True, indent=2) + "\n"


def setup_section(model: MonodromyModel, full: bool = True) -> dict:
    rep = model.setup
    out = {
        "c1": model.cfg.c1,
        "c2": model.cfg.c2,
        "transversal": rep.transversal,
        "tame_at_infinity": rep.tame_ok,
        "assumption_value": rep.assumption_value,
        "katz_degree": rep.katz_degree,
        "katz_small_degrees": {"2": katz_dual_degree(2), "3": katz_dual_degree(3)},
        "q_at_base": rep.q_at_base,
    }
    if full and rep.ok:
        q0 = abs(hiprec.Q_value_mp(model.cfg, 0.0))
        ratios = [float(abs(hiprec.Q_value_mp(model.cfg, hiprec.exact_dual_point(model.cfg, p.factor_index, p.v)))
                        / q0) for p in model.dual_points]
        out["max_relative_Q_at_dual_points"] = max(ratios)
        out["infinity_permutation"] = str(model.infinity_permutation())
    return out


def setup_failures(section: dict) -> list[str]:
    reasons = []
    if not section["transversal"]:
        reasons.append("transversality: the line meets the dual surface non-transversally")
    if not section["tame_at_infinity"]:
        reasons.append("tame_at_infinity: the assumption |c1|^4 + |c2|^4 < 1 or its genericity conditions fail")
    if section["katz_degree"] != 36:
        reasons.append("katz_degree: dual degree is not 36")
    if section["transversal"] and section["tame_at_infinity"] and abs(section["q_at_base"]) == 0:
        reasons.append("q_at_base: the base fiber is singular")
    if section.get("max_relative_Q_at_dual_points", 0.0) >= 1e-8:
        reasons.append("dual_points: Q does not vanish at the computed dual points")
    if section.get("infinity_permutation", "()") != "()":
        reasons.append("infinity: the cover branches over infinity")
    return reasons


def tables_section(model: MonodromyModel) -> dict:
    chi = model.chi_table()
    pairs = model.collision_table()
    certs = [model.collision_certificate(i) for i in range(1, 37)]
    return {
        "dual_points": [p.v for p in model.dual_points],
        "a_roots": list(model.a_roots),
        "chi_table": [str(p) for p in chi],
        "collision_table": [[i, d, e] for i, (d, e) in enumerate(pairs, start=1)],
        "collision_certificates": [
            {"distinct_roots": n, "fiber_points": sorted(set(f))} for n, f in certs
        ],
    }


def cycles_section(model: MonodromyModel) -> dict:
    hb = model.homology
    rel = model.relation
    deck = model.deck_symmetry
    return {
        "surface": {"V": model.ribbon.V, "E": model.ribbon.E, "F": model.ribbon.F,
                    "euler": model.ribbon.euler, "genus": model.ribbon.genus},
        "intersection_form": hb.J.tolist(),
        "classes": [list(c.coords) for c in model.classes],
        "relation": rel.to_dict(),
        "mod2_order": model.mod2_order,
        "deck_symmetry": None if deck is None else deck[0].tolist(),
    }


# ---------------------------------------------------------------- SVG

PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
           "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939"]


class Canvas:
    """1200x1200 SVG with a square data window, imaginary axis pointing up."""

    size = 1200
    pad = 60

    def __init__(self, lo: complex, hi: complex):
        span = max(hi.real - lo.real, hi.imag - lo.imag)
        self.lo = lo
        self.scale = (self.size - 2 * self.pad) / span
        self.items: list[str] = []

    def xy(self, z: complex) -> tuple[float, float]:
        x = self.pad + (z.real - self.lo.real) * self.scale
        y = self.size - self.pad - (z.imag - self.lo.imag) * self.scale
        return round(x, 2), round(y, 2)

    def polyline(self, pts, color, width=1.5):
        coords = " ".join("%.2f,%.2f" % self.xy(complex(z)) for z in pts)
        self.items.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="{width}"/>')

    def marker(self, z, color, label=None, r=5):
        x, y = self.xy(complex(z))
        self.items.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{r}" fill="{color}"/>')
        if label:
            self.items.append(f'<text x="{x + 8:.2f}" y="{y - 8:.2f}" font-size="18" '
                              f'font-family="sans-serif">{label}</text>')

    def axes(self):
        for z0, z1 in ((complex(self.lo.real, 0), complex(self.lo.real + 1e3, 0)),
                       (complex(0, self.lo.imag), complex(0, self.lo.imag + 1e3))):
            (x0, y0), (x1, y1) = self.xy(z0), self.xy(z1)
            x1, y1 = min(x1, self.size), max(y1, 0)
            self.items.append(f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x1:.2f}" y2="{y1:.2f}" '
                              'stroke="#bbbbbb" stroke-width="1"/>')

    def text(self, s: str):
        self.items.append(f'<text x="20" y="34" font-size="22" font-family="sans-serif">{s}</text>')

    def render(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.size}" height="{self.size}" '
                f'viewBox="0 0 {self.size} {self.size}">')
        return "\n".join([head, '<rect width="100%" height="100%" fill="white"/>'] + self.items + ["</svg>"]) + "\n"


def _window(points, margin=0.1):
    pts = np.asarray(points, dtype=complex)
    lo = complex(pts.real.min(), pts.imag.min())
    hi = complex(pts.real.max(), pts.imag.max())
    pad = margin * max(hi.real - lo.real, hi.imag - lo.imag, 1e-9)
    return lo - complex(pad, pad), hi + complex(pad, pad)


def plot_roots(model: MonodromyModel) -> str:
    a = model.a_roots
    c = Canvas(*_window(list(a) + [0j], 0.15))
    c.axes()
    c.text("branch points a_1..a_12 of G at v = 0")
    for j, z in enumerate(a):
        c.marker(z, PALETTE[j], f"a{j + 1}")
    return c.render()


def plot_track(model: MonodromyModel, i: int) -> str:
    tr = model.track(i)
    P = tr.positions
    c = Canvas(*_window(P.ravel(), 0.08))
    c.axes()
    d, e = tr.collision
    c.text(f"branch points along mu_{i}; collision of a{d} and a{e}")
    for j in range(P.shape[1]):
        c.polyline(P[:, j], PALETTE[j])
        c.marker(P[0, j], PALETTE[j], f"a{j + 1}", r=4)
    za, zb = P[-1, d - 1], P[-1, e - 1]
    c.polyline([za, zb], "#000000", width=6)
    c.marker(za, "#000000", r=6)
    return c.render()


def plot_arcs(model: MonodromyModel) -> str:
    tracks = [model.track(i) for i in range(1, 10)]
    pts = np.concatenate([tr.positions.ravel() for tr in tracks])
    c = Canvas(*_window(pts, 0.08))
    c.axes()
    c.text("colliding branch points along mu_1..mu_9")
    for k, tr in enumerate(tracks):
        d, e = tr.collision
        color = PALETTE[k]
        c.polyline(tr.positions[:, d - 1], color, 2)
        c.polyline(tr.positions[:, e - 1], color, 2)
        c.marker(tr.positions[-1, d - 1], color, f"{k + 1}", r=5)
    for j, z in enumerate(model.a_roots):
        c.marker(z, "#000000", f"a{j + 1}", r=3)
    return c.render()


# ---------------------------------------------------------------- commands

def _write(out: Path, name: str, text: str) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    p = out / name
    p.write_text(text)
    return p


def cmd_verify_setup(model: MonodromyModel) -> tuple[int, dict]:
    section = setup_section(model, full=True)
    reasons = setup_failures(section)
    section["failures"] = reasons
    return (EXIT_SETUP if reasons else EXIT_OK), section


def cmd_tables(model: MonodromyModel) -> dict:
    return tables_section(model)


def cmd_cycles(model: MonodromyModel) -> dict:
    report = {"schema_version": SCHEMA_VERSION, "version": __version__}
    report["setup"] = setup_section(model)
    report.update(tables_section(model))
    report.update(cycles_section(model))
    return report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lefschetz-quartic",
                                description="Vanishing cycles of a pencil of Fermat quartic sections.")
    p.add_argument("--config", help="TOML run configuration")
    p.add_argument("--out", help="output directory (overrides the config)")
    p.add_argument("--threads", type=int, default=1, help="worker processes for path tracking")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("verify-setup", help="check the line and the base fiber")
    sub.add_parser("tables", help="dual points, branch points, chi and collision tables")
    sub.add_parser("cycles", help="full pipeline through the relation check")
    pl = sub.add_parser("plot", help="write SVG figures")
    pl.add_argument("--what", default="roots", help="roots, tracks:<i> or arcs")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_SETUP
    out = Path(args.out or cfg.output_dir)
    model = MonodromyModel(cfg.pencil, cfg.model_options(max(1, args.threads)))
    timings: dict[str, float] = {}

    try:
        t0 = time.perf_counter()
        code, section = cmd_verify_setup(model)
        timings["setup"] = time.perf_counter() - t0
        if code != EXIT_OK:
            for r in section["failures"]:
                print(f"setup failure: {r}", file=sys.stderr)
            if args.command == "verify-setup":
                _write(out, "setup.json", dumps(section))
            return code
        if args.command == "verify-setup":
            path = _write(out, "setup.json", dumps(section))
            print(f"setup ok; wrote {path}")
            return EXIT_OK
        if args.command == "tables":
            t0 = time.perf_counter()
            tables = cmd_tables(model)
            timings["tables"] = time.perf_counter() - t0
            path = _write(out, "tables.json", dumps({"schema_version": SCHEMA_VERSION, **tables}))
            for j, s in enumerate(tables["chi_table"], start=1):
                print(f"chi l{j} {s}")
            for i, d, e in tables["collision_table"]:
                print(f"mu{i} ({d},{e})")
            print(f"wrote {path}")
        elif args.command == "cycles":
            t0 = time.perf_counter()
            report = cmd_cycles(model)
            timings["cycles"] = time.perf_counter() - t0
            path = _write(out, "report.json", dumps(report))
            rel = report["relation"]
            print(f"relation identity: {rel['product_is_identity']} (sign {rel['sign_convention_used']})")
            print(f"mod-2 order: {report['mod2_order']}")
            print(f"wrote {path}")
        elif args.command == "plot":
            what = args.what
            if what == "roots":
                path = _write(out, "roots.svg", plot_roots(model))
            elif what == "arcs":
                path = _write(out, "arcs.svg", plot_arcs(model))
            elif what.startswith("tracks:"):
                try:
                    i = int(what.split(":", 1)[1])
                except ValueError:
                    i = 0
                if not 1 <= i <= 36:
                    print("tracks:<i> needs 1 <= i <= 36", file=sys.stderr)
                    return EXIT_SETUP
                path = _write(out, f"tracks_{i}.svg", plot_track(model, i))
            else:
                print(f"unknown plot {what!r}", file=sys.stderr)
                return EXIT_SETUP
            print(f"wrote {path}")
        _write(out, "timings.json", json.dumps({k: round(v, 3) for k, v in timings.items()},
                                               sort_keys=True) + "\n")
    except TrackingError as exc:
        print(f"tracking failure: {exc}", file=sys.stderr)
        return EXIT_TRACKING
    except SurfaceError as exc:
        print(f"surface failure: {exc}", file=sys.stderr)
        return EXIT_RELATION
    except MonodromyError as exc:
        if type(exc).__name__ in ("NeverCloses", "FormViolation", "ExplosionGuard"):
            print(f"relation failure: {exc}", file=sys.stderr)
            return EXIT_RELATION
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_TRACKING
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

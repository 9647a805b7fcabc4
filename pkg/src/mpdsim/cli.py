"""Command-line front end: scenario configs in, CSV/manifest artifacts out.

Configs are JSON documents validated against a schema before any
computation. Slit indices are 1-based in configs and CSV, lengths are
micrometers, times nanoseconds. Outputs are deterministic: identical config
and version produce byte-identical CSV.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass
from importlib import metadata
from multiprocessing import Pool

import jsonschema
import numpy as np

from . import coherence as coh
from . import histories as hist
from . import lgi, qpi
from .geometry import InvalidSetupError, PhysicalSetup, PlaneSpec
from .presets import PRESETS, preset
from .units import Constants

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INVALID = 2
EXIT_ORACLE = 3

_RANGE = {
    "type": "object",
    "properties": {
        "start": {"type": "number"},
        "stop": {"type": "number"},
        "step": {"type": "number", "exclusiveMinimum": 0},
    },
    "required": ["start", "stop", "step"],
    "additionalProperties": False,
}
_VALUES = {"oneOf": [_RANGE, {"type": "array", "items": {"type": "number"}}]}

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "analysis": {"enum": ["lgi-sweep", "lgi-point", "qpi-search",
                              "qpi-point", "coherence", "probabilities"]},
        "constants": {
            "type": "object",
            "properties": {
                "wavelength": {"type": "number", "exclusiveMinimum": 0},
                "c": {"type": "number", "exclusiveMinimum": 0},
            },
            "additionalProperties": False,
        },
        "setup": {
            "type": "object",
            "properties": {
                "sigma0": {"type": "number", "exclusiveMinimum": 0},
                "planes": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "type": "object",
                        "properties": {
                            "slit_centers": {"type": "array",
                                             "items": {"type": "number"}},
                            "beta": {"type": "number", "exclusiveMinimum": 0},
                        },
                        "required": ["slit_centers", "beta"],
                        "additionalProperties": False,
                    },
                },
                "times": {"type": "array", "minItems": 1,
                          "items": {"type": "number", "exclusiveMinimum": 0}},
            },
            "required": ["sigma0", "planes", "times"],
            "additionalProperties": False,
        },
        "sweep": {
            "type": "object",
            "properties": {
                "axis": {"enum": ["ds", "sigma0", "beta"]},
                "values": _VALUES,
                "beta_pairs": {"type": "array",
                               "items": {"type": "array", "minItems": 2,
                                         "maxItems": 2,
                                         "items": {"type": "number"}}},
                "ds_grid": _VALUES,
                "beta1_grid": _VALUES,
                "beta2_grid": _VALUES,
                "scenario": {
                    "type": "object",
                    "properties": {k: {"type": "number"} for k in
                                   ("sigma0", "beta1", "beta2", "dx", "ds",
                                    "t01", "t12")},
                    "required": ["sigma0", "beta1", "beta2", "dx", "ds",
                                 "t01", "t12"],
                    "additionalProperties": False,
                },
            },
            "required": ["axis", "scenario"],
            "additionalProperties": False,
        },
        "signs": {
            "type": "object",
            "properties": {
                "q1": {"type": "array", "minItems": 3, "maxItems": 3,
                       "items": {"enum": [-1, 1]}},
                "q2": {"type": "array", "minItems": 4, "maxItems": 4,
                       "items": {"enum": [-1, 1]}},
            },
            "required": ["q1", "q2"],
            "additionalProperties": False,
        },
        "search": {
            "type": "object",
            "properties": {"x21": _VALUES, "x31": _VALUES},
            "additionalProperties": False,
        },
        "point": {
            "type": "object",
            "properties": {"x21": {"type": "number"}, "x31": {"type": "number"}},
            "required": ["x21", "x31"],
            "additionalProperties": False,
        },
        "coherence": {
            "type": "object",
            "properties": {
                "kind": {"enum": ["lgi", "qpi"]},
                "x21": {"type": "number"},
                "x31": {"type": "number"},
            },
            "required": ["kind"],
            "additionalProperties": False,
        },
        "histories": {
            "type": "array",
            "items": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "properties": {
                        "kind": {"enum": ["slit-projection",
                                          "slit-set-superposition",
                                          "measurement"]},
                        "plane": {"type": "integer", "minimum": 1},
                        "slits": {"type": "array",
                                  "items": {"type": "integer", "minimum": 1}},
                    },
                    "required": ["kind", "plane"],
                    "additionalProperties": False,
                },
            },
        },
        "grid_step": {"type": "number", "exclusiveMinimum": 0},
    },
    "additionalProperties": False,
}


class ConfigError(ValueError):
    """Invalid configuration with field-level diagnostics."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated configuration plus the requested analysis."""

    analysis: str
    raw: dict
    grid_step: float
    threads: int


def _values_list(spec) -> list[float]:
    if isinstance(spec, dict):
        n = int(np.floor((spec["stop"] - spec["start"]) / spec["step"] + 1e-9)) + 1
        return [spec["start"] + i * spec["step"] for i in range(max(n, 0))]
    return [float(v) for v in spec]


def _constants(cfg: dict) -> Constants:
    c = cfg.get("constants", {})
    kwargs = {}
    if "wavelength" in c:
        kwargs["wavelength"] = c["wavelength"]
    if "c" in c:
        kwargs["c"] = c["c"]
    return Constants(**kwargs)


def _setup(cfg: dict) -> PhysicalSetup:
    s = cfg["setup"]
    planes = tuple(PlaneSpec(tuple(p["slit_centers"]), p["beta"])
                   for p in s["planes"])
    return PhysicalSetup(s["sigma0"], planes, tuple(s["times"]),
                         constants=_constants(cfg))


def _scenario(cfg: dict) -> lgi.LgiScenario:
    sc = cfg["sweep"]["scenario"]
    return lgi.LgiScenario(constants=_constants(cfg), **sc)


def _signs(cfg: dict) -> lgi.SignAssignment | None:
    if "signs" not in cfg:
        return None
    return lgi.SignAssignment(tuple(cfg["signs"]["q1"]), tuple(cfg["signs"]["q2"]))


def validate(config: dict) -> list[str]:
    """Schema, unit and physics diagnostics without running any analysis."""
    diags: list[str] = []
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    for err in sorted(validator.iter_errors(config), key=lambda e: list(e.path)):
        path = "/".join(str(p) for p in err.path) or "<root>"
        diags.append(f"schema: {path}: {err.message}")
    if diags:
        return diags
    if "setup" in config:
        try:
            import warnings
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                setup = _setup(config)
            for w in caught:
                diags.append(f"warning: {w.message}")
            for j, f in setup.overlap_violations():
                diags.append(
                    f"overlap: plane {j + 1} slit gains overlap by {f:.2e}, "
                    f"breaking the mutual-exclusivity bound"
                )
            for rep, label in _coherence_reports(config, setup):
                for stage, ok in enumerate(rep.feasible):
                    if not ok:
                        diags.append(
                            f"coherence: {label} stage {stage + 1} infeasible "
                            f"(D_c={rep.dc_values[stage]:.1f} < "
                            f"D={rep.d_setup[stage]:.1f})"
                        )
        except (InvalidSetupError, ValueError) as exc:
            diags.append(f"setup: {exc}")
    return diags


def _coherence_reports(config: dict, setup: PhysicalSetup):
    if setup.n_planes >= 3 and setup.planes[1].n_slits == 1 \
            and setup.planes[2].n_slits == 1:
        yield coh.check_qpi_coherence(
            setup, setup.planes[1].slit_centers[0], setup.planes[2].slit_centers[0]
        ), "three-plane"
    elif setup.n_planes == 2 and all(p.n_slits == 3 for p in setup.planes):
        yield coh.check_lgi_coherence(setup), "two-plane"


# ---------------------------------------------------------------------------
# CSV / manifest output
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return f"{float(v):.12g}"


def _write_csv(path: str, header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    with open(path, "w", encoding="ascii", newline="\n") as f:
        f.write(text)
    return hashlib.sha256(text.encode("ascii")).hexdigest()


def _version() -> str:
    try:
        return metadata.version("mpdsim")
    except metadata.PackageNotFoundError:
        return "unknown"


def _write_outputs(out_dir: str, config: ScenarioConfig, header, rows,
                   summary: list[str], grid_stats: dict, t_start: float) -> None:
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "results.csv")
    digest = _write_csv(csv_path, header, rows)
    manifest = {
        "tool": "mpdsim",
        "version": _version(),
        "analysis": config.analysis,
        "config": config.raw,
        "grid": grid_stats,
        "rows": len(rows),
        "csv_sha256": digest,
        "wall_time_s": round(time.monotonic() - t_start, 3),
    }
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="ascii") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    with open(os.path.join(out_dir, "summary.txt"), "w", encoding="ascii") as f:
        f.write("\n".join(summary) + "\n")
    for line in summary:
        print(line)


# ---------------------------------------------------------------------------
# Analyses
# ---------------------------------------------------------------------------

_LGI_COLS = ["ka", "kv", "violation", "ds_opt",
             "q1_1", "q1_2", "q1_3", "q2_1", "q2_2", "q2_3", "q2_4",
             "signaling_1", "signaling_2", "signaling_3", "signaling_4",
             "gamma_c"]


def _lgi_row(row: lgi.SweepRow) -> list:
    r = row.report
    return ([r.ka, r.kv, r.violation, row.ds_opt]
            + list(r.signs.q1) + list(r.signs.q2)
            + list(r.signaling) + [r.gamma_c])


def _sigma_task(args):
    scenario, s0, ds_grid, b1_grid, b2_grid = args
    return lgi.sweep(scenario, "sigma0", [s0], ds_values=ds_grid,
                     beta1_values=b1_grid, beta2_values=b2_grid)[0]


def _run_lgi_sweep(config: ScenarioConfig, out_dir: str, t_start: float) -> int:
    sw = config.raw["sweep"]
    scenario = _scenario(config.raw)
    axis = sw["axis"]
    if axis == "beta":
        values = [tuple(p) for p in sw.get("beta_pairs", [])]
        if not values and "values" in sw:
            raise ConfigError("beta axis requires beta_pairs")
    else:
        if "values" not in sw:
            raise ConfigError(f"{axis} axis requires values")
        values = _values_list(sw["values"])
    if not values:
        raise ConfigError("empty range")
    grids = dict(
        ds_values=_values_list(sw["ds_grid"]) if "ds_grid" in sw else None,
        beta1_values=_values_list(sw["beta1_grid"]) if "beta1_grid" in sw else None,
        beta2_values=_values_list(sw["beta2_grid"]) if "beta2_grid" in sw else None,
    )
    if axis == "sigma0" and config.threads > 1:
        ds_grid = grids["ds_values"] if grids["ds_values"] is not None else lgi.DS_GRID
        b1 = grids["beta1_values"] if grids["beta1_values"] is not None else lgi.BETA1_GRID
        b2 = grids["beta2_values"] if grids["beta2_values"] is not None else lgi.BETA2_GRID
        tasks = [(scenario, s0, np.asarray(ds_grid, dtype=float), list(b1), list(b2))
                 for s0 in values]
        with Pool(config.threads) as pool:
            rows = pool.map(_sigma_task, tasks)  # ordered reduction
    else:
        rows = lgi.sweep(scenario, axis, values, **grids)

    best = max(rows, key=lambda r: r.report.violation)
    _oracle_check(scenario, best)
    axis_cols = list(rows[0].axis.keys())
    header = axis_cols + _LGI_COLS
    csv_rows = [[r.axis[c] for c in axis_cols] + _lgi_row(r) for r in rows]
    summary = [
        f"lgi-sweep over {axis}: {len(rows)} points",
        f"max violation {best.report.violation:.6g} at "
        + ", ".join(f"{k}={v:g}" for k, v in best.axis.items())
        + f", ds_opt={best.ds_opt:g} (K_A={best.report.ka:.6g}, "
          f"K_V={best.report.kv:.6g})",
    ]
    _write_outputs(out_dir, config, header, csv_rows, summary,
                   {"ds_points": len(grids["ds_values"] or lgi.DS_GRID)}, t_start)
    return EXIT_OK


def _oracle_check(scenario: lgi.LgiScenario, row: lgi.SweepRow) -> None:
    """Dual-route verification of a sweep row at quadrature resolution."""
    import dataclasses
    point = dataclasses.replace(
        scenario, ds=row.ds_opt,
        sigma0=row.axis.get("sigma0", scenario.sigma0),
        beta1=row.axis.get("beta1", scenario.beta1),
        beta2=row.axis.get("beta2", scenario.beta2),
    )
    lgi.cross_check(point.setup(), row.report.signs)


def _run_lgi_point(config: ScenarioConfig, out_dir: str, t_start: float) -> int:
    setup = _setup(config.raw)
    signs = _signs(config.raw)
    if signs is None:
        report = lgi.optimize_signs(setup)
        signs = report.signs
    report = lgi.cross_check(setup, signs)
    row = [report.ka, report.kv, report.violation] \
        + list(signs.q1) + list(signs.q2) + list(report.signaling) \
        + [report.gamma_c]
    header = _LGI_COLS[:3] + _LGI_COLS[4:]
    summary = [f"lgi-point: K_A={report.ka:.6g} K_V={report.kv:.6g} "
               f"violation={report.violation:.6g}"]
    _write_outputs(out_dir, config, header, [row], summary,
                   {"quad_step": lgi.LGI_QUAD_STEP}, t_start)
    return EXIT_OK


_QPI_COLS = ["x21", "x31_opt", "constructive_margin", "destructive_margin",
             "p1_12", "p1_1", "p1_2", "p12_121", "p12_11", "p12_21",
             "p123_1211", "p123_111", "p123_211",
             "verdict1", "verdict2", "verdict3"]


def _qpi_row(r: qpi.QpiReport) -> list:
    return ([r.x21, r.x31, r.constructive_margin, r.destructive_margin]
            + [r.probs[k] for k in _QPI_COLS[4:13]]
            + list(r.verdicts))


def _run_qpi_search(config: ScenarioConfig, out_dir: str, t_start: float) -> int:
    setup = _setup(config.raw)
    search = config.raw.get("search", {})
    x21 = _values_list(search["x21"]) if "x21" in search else None
    x31 = _values_list(search["x31"]) if "x31" in search else None
    if (x21 is not None and not x21) or (x31 is not None and not x31):
        raise ConfigError("empty range")
    cands = qpi.find_destructive(setup, x21, x31, step=config.grid_step)
    rows = [_qpi_row(r) for r in cands]
    if cands:
        best = qpi.best_candidate(cands)
        summary = [
            f"qpi-search: {len(cands)} constructive placements",
            f"best destructive margin {best.destructive_margin:.6g} at "
            f"x21={best.x21:g}, x31={best.x31:g}; verdicts="
            + "/".join(str(v).lower() for v in best.verdicts),
        ]
    else:
        summary = ["qpi-search: no constructive placements in range"]
    _write_outputs(out_dir, config, _QPI_COLS, rows, summary,
                   {"step": config.grid_step}, t_start)
    return EXIT_OK


def _run_qpi_point(config: ScenarioConfig, out_dir: str, t_start: float) -> int:
    setup = _setup(config.raw)
    pt = config.raw["point"]
    report = qpi.qpi_probabilities(setup, pt["x21"], pt["x31"],
                                   step=config.grid_step)
    summary = [f"qpi-point: destructive margin {report.destructive_margin:.6g}, "
               f"verdicts=" + "/".join(str(v).lower() for v in report.verdicts)]
    _write_outputs(out_dir, config, _QPI_COLS, [_qpi_row(report)], summary,
                   {"step": config.grid_step}, t_start)
    return EXIT_OK


def _run_coherence(config: ScenarioConfig, out_dir: str, t_start: float) -> int:
    setup = _setup(config.raw)
    c = config.raw.get("coherence", {"kind": "lgi"})
    if c["kind"] == "qpi":
        if "x21" not in c or "x31" not in c:
            raise ConfigError("coherence kind qpi requires x21 and x31")
        report = coh.check_qpi_coherence(setup, c["x21"], c["x31"])
    else:
        report = coh.check_lgi_coherence(setup)
    rows = [[f"stage_{i + 1}", dc, d, ok]
            for i, (dc, d, ok) in enumerate(zip(report.dc_values, report.d_setup,
                                                report.feasible))]
    summary = [f"coherence ({c['kind']}): "
               + ("all stages feasible" if report.all_feasible
                  else "INFEASIBLE stage(s) present")]
    _write_outputs(out_dir, config, ["parameter", "D_c", "D_setup", "feasible"],
                   rows, summary, {}, t_start)
    return EXIT_OK


def _parse_history(events: list[dict]) -> hist.HistorySpec:
    specs = []
    for ev in events:
        kind = hist.EventKind(ev["kind"])
        slits = tuple(s - 1 for s in ev.get("slits", ()))  # 1-based at boundary
        specs.append(hist.EventSpec(kind, ev["plane"], slits))
    return hist.HistorySpec(tuple(specs))


def _history_label(h: hist.HistorySpec) -> str:
    parts = []
    for ev in h.events:
        if ev.kind is hist.EventKind.MEASUREMENT:
            parts.append(f"M{ev.plane}")
        elif ev.kind is hist.EventKind.SLIT_PROJECTION:
            parts.append(f"P{ev.plane}.{ev.slits[0] + 1}")
        else:
            parts.append(f"S{ev.plane}." + "+".join(str(s + 1) for s in ev.slits))
    return " ".join(parts)


def _run_probabilities(config: ScenarioConfig, out_dir: str, t_start: float) -> int:
    setup = _setup(config.raw)
    if "histories" not in config.raw or not config.raw["histories"]:
        raise ConfigError("probabilities analysis requires a histories list")
    rows = []
    for events in config.raw["histories"]:
        h = _parse_history(events)
        w = hist.history_weight(setup, None, h)
        rows.append([_history_label(h), w.weight, w.possible, w.reason or ""])
    summary = [f"probabilities: {len(rows)} histories evaluated"]
    _write_outputs(out_dir, config, ["history", "weight", "possible", "reason"],
                   rows, summary, {"step": config.grid_step}, t_start)
    return EXIT_OK


_RUNNERS = {
    "lgi-sweep": _run_lgi_sweep,
    "lgi-point": _run_lgi_point,
    "qpi-search": _run_qpi_search,
    "qpi-point": _run_qpi_point,
    "coherence": _run_coherence,
    "probabilities": _run_probabilities,
}

_NEEDS_SETUP = {"lgi-point", "qpi-search", "qpi-point", "coherence", "probabilities"}


def run(config: ScenarioConfig, out_dir: str) -> int:
    """Execute the configured analysis, writing results.csv, manifest.json
    and summary.txt into out_dir."""
    t_start = time.monotonic()
    return _RUNNERS[config.analysis](config, out_dir, t_start)


# ---------------------------------------------------------------------------
# Argument handling
# ---------------------------------------------------------------------------

def _resolve_threads(flag: int | None) -> int:
    if flag is not None:
        return max(1, flag)
    env = os.environ.get("MPD_SIM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ConfigError(f"MPD_SIM_THREADS is not an integer: {env!r}") from exc
    return os.cpu_count() or 1


def _load_config(args) -> dict:
    cfg: dict = {}
    if args.preset:
        cfg = preset(args.preset)
    if args.config:
        with open(args.config, encoding="utf-8") as f:
            cfg.update(json.load(f))
    if not cfg:
        raise ConfigError("provide --config and/or --preset")
    return cfg


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpdsim",
        description="Multiplane-diffraction quantum-path simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in [*_RUNNERS, "validate"]:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON configuration file")
        p.add_argument("--preset", choices=sorted(PRESETS),
                       help="bundled configuration name")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--threads", type=int, default=None,
                       help="worker pool size (default: MPD_SIM_THREADS or "
                            "hardware parallelism)")
        p.add_argument("--grid-step", type=float, default=None,
                       help="quadrature sampling period in micrometers")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        raw = _load_config(args)
        if args.grid_step is not None:
            raw["grid_step"] = args.grid_step
        diags = validate(raw)
        if args.command == "validate":
            for d in diags:
                print(d)
            print(f"{len(diags)} diagnostic(s)")
            hard = [d for d in diags if not d.startswith(("warning", "coherence"))]
            return EXIT_INVALID if hard else EXIT_OK
        hard = [d for d in diags if d.startswith(("schema", "setup"))]
        if hard:
            for d in hard:
                print(d, file=sys.stderr)
            return EXIT_INVALID
        analysis = raw.get("analysis")
        if analysis is None:
            raw["analysis"] = args.command
        elif analysis != args.command:
            print(f"config requests analysis {analysis!r} but subcommand is "
                  f"{args.command!r}", file=sys.stderr)
            return EXIT_INVALID
        if args.command in _NEEDS_SETUP and "setup" not in raw:
            print("config needs a setup section", file=sys.stderr)
            return EXIT_INVALID
        config = ScenarioConfig(
            analysis=args.command,
            raw=raw,
            grid_step=raw.get("grid_step", hist.DEFAULT_STEP),
            threads=_resolve_threads(args.threads),
        )
        return run(config, args.out)
    except lgi.OracleMismatchError as exc:
        print(f"oracle mismatch: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except (ConfigError, InvalidSetupError, KeyError, ValueError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

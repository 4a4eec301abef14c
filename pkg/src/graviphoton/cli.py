"""Config-file-driven command line front end.

``graviphoton run <config.json>`` executes one task described by a JSON
scenario file and emits a table; ``graviphoton validate <config.json>``
checks the same file without executing anything and lists every violation
it can find.  All floating point output uses 17 significant digits so that
values survive a round trip through text.

Config layout (keys carry their units as suffixes)::

    {
      "task": "redshift" | "overlap" | "qber-sweep" | "qfi-sweep",
      "body": {"mass_kg": 5.9722e24},            # or {"r_s_m": ...}
      "emitter": {"type": "static", "radius_m": 6.371e6},
      "receiver": {"type": "orbit", "radius_m": 6.871e6},
      "photon": {"kind": "gaussian", "omega0_rad_s": ..., "sigma_rad_s": ...},
      "sweep": {"sigma_rad_s": [...]},           # qber-sweep only
      "estimation": {"squeezing_r": 0.3, "theta_rad": [...], "probe_count": 1},
      "output": {"format": "csv", "path": "table.csv"}
    }

Exit codes: 0 success, 2 malformed config, 3 domain violation, 4 numerical
failure.  Errors are written to stderr as a single JSON line.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .errors import ConfigParseError, DomainError, GraviphotonError, NumericalError
from .metrology import (
    QFI_SWEEP_CSV_COLUMNS,
    SensingChannel,
    build_sensing_channel,
    qfi_finite_difference,
)
from .protocols import (
    QBER_SWEEP_CSV_COLUMNS,
    _check_sigma_grid,
    _redshift_between,
    qber_at_chi,
)
from .spacetime import (
    ObserverPath,
    SchwarzschildGeometry,
    circular_orbit_angular_velocity,
)
from .wavepacket import (
    GaussianProfile,
    mixing_angle,
    overlap,
    profile_from_record,
    redshift_transform,
)

TASKS = ("redshift", "overlap", "qber-sweep", "qfi-sweep")

_TASK_BLOCKS = {
    "redshift": ("body", "emitter", "receiver"),
    "overlap": ("body", "emitter", "receiver", "photon"),
    "qber-sweep": ("body", "emitter", "receiver", "photon", "sweep"),
    "qfi-sweep": ("estimation",),
}

_TOP_KEYS = ("task", "body", "emitter", "receiver", "photon", "sweep", "estimation", "output")

REDSHIFT_CSV_COLUMNS = ("chi", "chi_squared", "z")
OVERLAP_CSV_COLUMNS = (
    "chi",
    "chi_squared",
    "overlap_re",
    "overlap_im",
    "overlap_mag",
    "mixing_theta_rad",
    "mixing_phi_rad",
)


# ---------------------------------------------------------------------------
# parsing


def _reject_constant(token):
    raise ConfigParseError(f"non-finite literal {token!r} is not allowed in configs")


def load_config(path: str) -> dict:
    """Read and JSON-decode a config file; any failure is a parse error."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigParseError(f"cannot read config {path!r}: {exc}") from exc
    try:
        cfg = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"config {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigParseError("config root must be a JSON object")
    return cfg


def _require_dict(cfg, key):
    block = cfg[key]
    if not isinstance(block, dict):
        raise ConfigParseError(f"block {key!r} must be a JSON object")
    return block


def _number(block, path, key, *, optional=False, default=None):
    if key not in block:
        if optional:
            return default
        raise ConfigParseError(f"{path} is missing key {key!r}")
    val = block[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigParseError(f"{path}.{key} must be a number")
    return float(val)


def _number_list(block, path, key):
    if key not in block:
        raise ConfigParseError(f"{path} is missing key {key!r}")
    val = block[key]
    if not isinstance(val, list):
        raise ConfigParseError(f"{path}.{key} must be a list of numbers")
    out = []
    for i, x in enumerate(val):
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise ConfigParseError(f"{path}.{key}[{i}] must be a number")
        out.append(float(x))
    return out


def _check_keys(block, path, allowed):
    for key in block:
        if key not in allowed:
            raise ConfigParseError(
                f"unknown key {key!r} in {path}; allowed keys: {', '.join(allowed)}"
            )


def check_structure(cfg: dict) -> str:
    """Shape-level validation of a decoded config; returns the task name.

    Everything checked here is about presence, spelling and JSON types.
    Value-level rules (positivity, horizon bounds, grid ordering) are left
    to the block builders so that ``validate`` can report them together.
    """
    _check_keys(cfg, "config", _TOP_KEYS)
    if "task" not in cfg:
        raise ConfigParseError("config is missing key 'task'")
    task = cfg["task"]
    if task not in TASKS:
        raise ConfigParseError(
            f"task must be one of {', '.join(TASKS)}; got {task!r}"
        )
    for block in _TASK_BLOCKS[task]:
        if block not in cfg:
            raise ConfigParseError(f"task {task!r} requires block {block!r}")

    if "body" in cfg:
        body = _require_dict(cfg, "body")
        _check_keys(body, "body", ("mass_kg", "r_s_m"))
        if ("mass_kg" in body) == ("r_s_m" in body):
            raise ConfigParseError(
                "body requires exactly one of 'mass_kg' or 'r_s_m'"
            )
        key = "mass_kg" if "mass_kg" in body else "r_s_m"
        _number(body, "body", key)
    for name in ("emitter", "receiver"):
        if name in cfg:
            obs = _require_dict(cfg, name)
            _check_keys(obs, name, ("type", "radius_m"))
            if obs.get("type") not in ("static", "orbit"):
                raise ConfigParseError(
                    f"{name}.type must be 'static' or 'orbit', got {obs.get('type')!r}"
                )
            _number(obs, name, "radius_m")
    if "photon" in cfg:
        photon = _require_dict(cfg, "photon")
        if "kind" not in photon:
            raise ConfigParseError("photon is missing key 'kind'")
    if "sweep" in cfg:
        sweep = _require_dict(cfg, "sweep")
        _check_keys(sweep, "sweep", ("sigma_rad_s",))
        _number_list(sweep, "sweep", "sigma_rad_s")
    if "estimation" in cfg:
        est = _require_dict(cfg, "estimation")
        _check_keys(est, "estimation", ("squeezing_r", "theta_rad", "probe_count"))
        _number(est, "estimation", "squeezing_r")
        _number_list(est, "estimation", "theta_rad")
        if "probe_count" in est:
            pc = est["probe_count"]
            if isinstance(pc, bool) or not isinstance(pc, int):
                raise ConfigParseError("estimation.probe_count must be an integer")
    if "output" in cfg:
        out = _require_dict(cfg, "output")
        _check_keys(out, "output", ("format", "path"))
        if "format" in out and out["format"] not in ("csv", "json"):
            raise ConfigParseError(
                f"output.format must be 'csv' or 'json', got {out['format']!r}"
            )
        if "path" in out and not isinstance(out["path"], str):
            raise ConfigParseError("output.path must be a string")
    return task


def _build_body(body: dict) -> SchwarzschildGeometry:
    if "mass_kg" in body:
        return SchwarzschildGeometry.from_mass(body["mass_kg"])
    return SchwarzschildGeometry(body["r_s_m"])


def _build_observer(obs: dict) -> ObserverPath:
    return ObserverPath(obs["type"], obs["radius_m"])


def _build_estimation(est: dict):
    channel = SensingChannel(squeezing_r=float(est["squeezing_r"]))
    thetas = [float(t) for t in est["theta_rad"]]
    if not thetas:
        raise DomainError("estimation.theta_rad must not be empty")
    for t in thetas:
        if not (0.0 <= t <= math.pi / 2.0):
            raise DomainError(
                f"estimation.theta_rad entries must lie in [0, pi/2], got {t!r}"
            )
    probe_count = int(est.get("probe_count", 1))
    if probe_count < 1:
        raise DomainError(f"probe_count must be >= 1, got {probe_count}")
    return channel, thetas, probe_count


_BLOCK_BUILDERS = {
    "body": _build_body,
    "emitter": _build_observer,
    "receiver": _build_observer,
    "photon": profile_from_record,
    "sweep": lambda sweep: _check_sigma_grid(sweep["sigma_rad_s"]),
    "estimation": _build_estimation,
}


def build_blocks(cfg: dict) -> dict:
    """Construct domain objects for every block present in the config.

    Unused blocks are built too: a config is either wholly valid or not,
    independently of which task happens to reference a block.
    """
    built = {}
    for name, builder in _BLOCK_BUILDERS.items():
        if name in cfg:
            built[name] = builder(cfg[name])
    return built


def collect_violations(cfg: dict, task: str) -> list:
    """Value-level violations as ``(field_path, error_class, message)``."""
    found = []
    built = {}
    for name, builder in _BLOCK_BUILDERS.items():
        if name not in cfg:
            continue
        try:
            built[name] = builder(cfg[name])
        except DomainError as exc:
            found.append((name, type(exc).__name__, str(exc)))
    if task in ("redshift", "overlap", "qber-sweep"):
        emitter = built.get("emitter")
        if emitter is not None and emitter.kind != "static":
            found.append(
                (
                    "emitter",
                    "DomainError",
                    f"no redshift formula for emitter kind {emitter.kind!r}",
                )
            )
        geometry = built.get("body")
        if geometry is not None:
            for name in ("emitter", "receiver"):
                obs = built.get(name)
                if obs is None:
                    continue
                try:
                    if obs.kind == "static":
                        geometry.lapse_squared(obs.radius_m)
                    else:
                        circular_orbit_angular_velocity(geometry, obs.radius_m)
                except DomainError as exc:
                    found.append((name, type(exc).__name__, str(exc)))
    if task == "qber-sweep":
        photon = built.get("photon")
        if photon is not None and not isinstance(photon, GaussianProfile):
            found.append(
                (
                    "photon",
                    "DomainError",
                    "bandwidth sweeps need an analytic width parameter; "
                    f"got a {getattr(photon, 'kind', '?')} profile",
                )
            )
    return found


# ---------------------------------------------------------------------------
# table computation


def _qber_row(args):
    omega0, sigma_swept, phase, chi_value = args
    profile = GaussianProfile(omega0, sigma_swept, phase)
    rep = qber_at_chi(profile, chi_value, sigma_rad_s=sigma_swept)
    return [sigma_swept, rep.chi.z, rep.overlap_magnitude, rep.visibility, rep.qber]


def _qfi_row(args):
    squeezing_r, theta, probe_count, timed = args
    t0 = time.perf_counter()
    _, channel = build_sensing_channel(SensingChannel(squeezing_r=squeezing_r))
    rep = qfi_finite_difference(
        lambda t: channel(t), theta, probe_count=probe_count
    )
    elapsed_ms = (time.perf_counter() - t0) * 1e3 if timed else None
    return [rep.theta, rep.qfi, rep.cramer_rao_bound, rep.step_used, elapsed_ms]


def _map_rows(worker, arg_list, jobs: int):
    if jobs <= 1 or len(arg_list) <= 1:
        return [worker(a) for a in arg_list]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, arg_list))


def execute_task(task: str, built: dict, *, jobs: int = 1, timings: bool = False):
    """Compute the task's table; returns ``(columns, rows, summary)``."""
    if task == "redshift":
        chi = _redshift_between(built["body"], built["emitter"], built["receiver"])
        rows = [[chi.chi, chi.chi_squared, chi.z]]
        return REDSHIFT_CSV_COLUMNS, rows, f"chi={_fmt(chi.chi)}"
    if task == "overlap":
        chi = _redshift_between(built["body"], built["emitter"], built["receiver"])
        profile = built["photon"]
        shifted = redshift_transform(profile, chi)
        theta_val = overlap(profile, shifted)
        mix_theta, mix_phi = mixing_angle(profile, shifted)
        magnitude = min(abs(theta_val), 1.0)
        rows = [
            [
                chi.chi,
                chi.chi_squared,
                theta_val.real,
                theta_val.imag,
                magnitude,
                mix_theta,
                mix_phi,
            ]
        ]
        return OVERLAP_CSV_COLUMNS, rows, f"overlap_mag={_fmt(magnitude)}"
    if task == "qber-sweep":
        chi = _redshift_between(built["body"], built["emitter"], built["receiver"])
        profile = built["photon"]
        if not isinstance(profile, GaussianProfile):
            raise DomainError(
                "bandwidth sweeps need an analytic width parameter; "
                f"got a {getattr(profile, 'kind', '?')} profile"
            )
        args = [
            (profile.omega0_rad_s, s, profile.phase_rad, chi.chi)
            for s in built["sweep"]
        ]
        rows = _map_rows(_qber_row, args, jobs)
        qbers = [row[4] for row in rows]
        summary = (
            f"rows={len(rows)} qber_min={_fmt(min(qbers))} qber_max={_fmt(max(qbers))}"
        )
        return QBER_SWEEP_CSV_COLUMNS, rows, summary
    if task == "qfi-sweep":
        channel, thetas, probe_count = built["estimation"]
        args = [(channel.squeezing_r, t, probe_count, timings) for t in thetas]
        rows = _map_rows(_qfi_row, args, jobs)
        qfis = [row[1] for row in rows]
        summary = f"rows={len(rows)} qfi_max={_fmt(max(qfis))}"
        return QFI_SWEEP_CSV_COLUMNS, rows, summary
    raise ConfigParseError(f"unknown task {task!r}")


# ---------------------------------------------------------------------------
# emission


def _fmt(value) -> str:
    if value is None:
        return ""
    return "%.17g" % float(value)


def render_csv(columns, rows) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    return "\n".join(lines) + "\n"


def render_json(task, columns, rows) -> str:
    """Fixed-shape JSON: ``{"task", "columns", "rows"}``.

    Floats are printed with 17 significant digits; non-finite values and
    absent cells become ``null`` (JSON has no spelling for infinities).
    """
    def cell(v):
        if v is None or not math.isfinite(float(v)):
            return "null"
        return _fmt(v)

    row_text = ",\n    ".join(
        "[" + ", ".join(cell(v) for v in row) + "]" for row in rows
    )
    return (
        "{\n"
        f'  "task": {json.dumps(task)},\n'
        f'  "columns": {json.dumps(list(columns))},\n'
        '  "rows": [\n'
        f"    {row_text}\n"
        "  ]\n"
        "}\n"
    )


def _emit(text: str, path):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigParseError(f"cannot write output path {path!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# commands


def _cmd_run(args) -> int:
    t_start = time.perf_counter()
    cfg = load_config(args.config)
    task = check_structure(cfg)
    built = build_blocks(cfg)
    columns, rows, summary = execute_task(
        task, built, jobs=args.jobs, timings=args.timings
    )
    out_cfg = cfg.get("output", {})
    path = args.output if args.output is not None else out_cfg.get("path")
    fmt = args.format if args.format is not None else out_cfg.get("format", "csv")
    text = render_csv(columns, rows) if fmt == "csv" else render_json(task, columns, rows)
    _emit(text, path)
    runtime = time.perf_counter() - t_start
    summary_line = f"task={task} {summary} runtime_s={runtime:.3f}\n"
    # keep stdout machine-readable when the table itself goes there
    stream = sys.stderr if path is None else sys.stdout
    stream.write(summary_line)
    return 0


def _cmd_validate(args) -> int:
    cfg = load_config(args.config)
    task = check_structure(cfg)
    violations = collect_violations(cfg, task)
    for field_path, err_class, message in violations:
        sys.stdout.write(f"{field_path}: {err_class}: {message}\n")
    sys.stderr.write(f"task={task} violations={len(violations)}\n")
    return 0 if not violations else 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graviphoton",
        description="Redshifted-photon link analysis from JSON scenario files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="execute a scenario and emit its table")
    run_p.add_argument("config", help="path to a JSON scenario file")
    run_p.add_argument("--output", default=None, help="override output.path")
    run_p.add_argument(
        "--format", default=None, choices=("csv", "json"), help="override output.format"
    )
    run_p.add_argument(
        "--jobs", type=int, default=1, help="worker processes for sweep rows"
    )
    run_p.add_argument(
        "--timings",
        action="store_true",
        help="fill per-row runtime columns (breaks byte-for-byte determinism)",
    )
    run_p.set_defaults(func=_cmd_run)
    val_p = sub.add_parser("validate", help="check a scenario file without running it")
    val_p.add_argument("config", help="path to a JSON scenario file")
    val_p.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GraviphotonError as exc:
        sys.stderr.write(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n"
        )
        if isinstance(exc, ConfigParseError):
            return 2
        if isinstance(exc, DomainError):
            return 3
        if isinstance(exc, NumericalError):
            return 4
        return 4


if __name__ == "__main__":
    sys.exit(main())

"""Command line entry point.

    crestwave simulate      --config run.json --out runs/a
    crestwave verify        --set suite=identities --set trials=100
    crestwave scan-angles   --set r_list=[1.5,2.5] --out scan
    crestwave energy-report --set snapshot=runs/a/snapshots/t=1.json

Every subcommand takes an optional JSON config, repeatable ``--set
key=value`` overrides (dotted keys reach nested tables, values are read as
JSON when they parse and as strings otherwise), ``--out``, ``--jobs`` and
``--seed``. Exit status is 0 on success, 1 when a run fails or a check does
not pass, and 2 for usage or configuration errors, in which case nothing is
written.
"""

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import spectral as sp
from . import verify as vf
from .artifacts import FORMAT_VERSION, DirectorySink, energy_svg, read_snapshot
from .energy import characterization, energy
from .evolution import RunConfig, StepError, run
from .initdata import ICDescriptor, make_ic
from .state import controlled_quantities, derive

SUITES = ("identities", "commutators", "inequalities", "taylor", "all")


class ConfigError(Exception):
    pass


def _json_error(text, exc, source):
    lines = text.splitlines() or [""]
    line = lines[min(exc.lineno, len(lines)) - 1]
    return (f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}\n"
            f"    {line}\n    {' ' * (exc.colno - 1)}^")


def load_config(path):
    """Read a JSON config; parse errors carry the offending line."""
    if path is None:
        return {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(_json_error(text, exc, path)) from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return cfg


def apply_overrides(cfg, pairs):
    """Apply ``key=value`` strings to ``cfg`` in place and return it."""
    for pair in pairs:
        key, sep, raw = pair.partition("=")
        if not sep or not key:
            raise ConfigError(f"--set expects key=value, got {pair!r}")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = cfg
        *parents, leaf = key.split(".")
        for p in parents:
            node = node.setdefault(p, {})
            if not isinstance(node, dict):
                raise ConfigError(f"--set {key}: {p} is not a table")
        node[leaf] = value
    return cfg


def _take(cfg, defaults, what):
    extra = set(cfg) - set(defaults)
    if extra:
        raise ConfigError(f"unknown {what} keys: {sorted(extra)}")
    return {**defaults, **cfg}


def _write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2, default=_jsonable) + "\n")


def _jsonable(x):
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"cannot serialize {type(x).__name__}")


# simulate

def _run_config(cfg, seed):
    cfg = dict(cfg)
    svg = bool(cfg.pop("svg", False))
    if seed is not None:
        cfg["seed"] = seed
    try:
        return RunConfig.from_dict(cfg), svg
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def cmd_simulate(cfg, args):
    rc, svg = _run_config(cfg, args.seed)
    try:
        s0 = make_ic(rc.grid_n, rc.ic)
        s0.grid.index_of(rc.anchor_alpha0)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    out = Path(args.out)
    sink = DirectorySink(out)
    _write_json(out / "config.json", {"format_version": FORMAT_VERSION, **rc.to_dict()})
    code = 0
    try:
        result = run(rc, sink, state=s0)
    except StepError as exc:
        result = exc.result
        print(f"run failed: {exc}", file=sys.stderr)
        code = 1
    finally:
        sink.close()
    _write_json(out / "summary.json", {"format_version": FORMAT_VERSION, **result.summary()})
    if svg and len(result.energies) > 1:
        reps = result.energies
        series = {"total": [e.total for e in reps]}
        for name in ("ea_1", "ea_23", "ea_4", "eb_1", "eb_2", "eb_3", "anchor"):
            series[name] = [getattr(e, name) for e in reps]
        (out / "energy.svg").write_text(energy_svg(result.times, series))
    s = result.summary()
    print(f"{s['status']}: t={s['t_final']:.6g} steps={s['steps']} "
          f"min_A1={s['min_A1']:.6g} max_holo_drift={s['max_holo_drift']:.3g}")
    return code


# verify

VERIFY_DEFAULTS = {"suite": "identities", "trials": None, "n": 256, "seed": 0}


def _taylor_suite(n, seed):
    states = [make_ic(n, ICDescriptor("random", seed=seed + i)) for i in range(10)]
    report = vf.check_taylor(states)
    crest = [make_ic(m, ICDescriptor("crest", r=2.5)) for m in (n // 2, n, 2 * n)]
    report.records += vf.check_taylor(crest, crest=1.0).records
    return report


def _run_suite(name, n, trials, seed, jobs):
    if name == "identities":
        return vf.check_identities(n, trials or 100, seed, jobs=jobs)
    if name == "commutators":
        return vf.check_commutator_identities(trials or 20, seed, n, jobs=jobs)
    if name == "inequalities":
        return vf.check_inequalities(n, trials or 100, seed, jobs=jobs)
    return _taylor_suite(n, seed)


def cmd_verify(cfg, args):
    c = _take(cfg, VERIFY_DEFAULTS, "verify")
    if args.seed is not None:
        c["seed"] = args.seed
    if c["suite"] not in SUITES:
        raise ConfigError(f"unknown suite {c['suite']!r}; choose from {', '.join(SUITES)}")
    try:
        n = int(c["n"])
        trials = None if c["trials"] is None else int(c["trials"])
        seed = int(c["seed"])
        sp.PeriodicGrid(n)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    if trials is not None and trials < 1:
        raise ConfigError("trials must be positive")
    names = SUITES[:-1] if c["suite"] == "all" else (c["suite"],)
    reports = [_run_suite(name, n, trials, seed, args.jobs) for name in names]
    ok = all(r.passed for r in reports)
    for r in reports:
        for rec in r.records:
            mark = "pass" if rec.passed else "FAIL"
            print(f"{mark}  {r.suite:12s} {rec.check_id:30s} {rec.value:.3e}  n={rec.n}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _write_json(out / "verify.json", {"format_version": FORMAT_VERSION, "passed": ok,
                                          "reports": [r.to_dict() for r in reports]})
    return 0 if ok else 1


# scan-angles

SCAN_DEFAULTS = {"r_list": [1.5, 2.5], "n_list": [128, 256, 512, 1024, 2048],
                 "diverge": 1.3, "converge": 1.1, "seed": 0}


def cmd_scan(cfg, args):
    c = _take(cfg, SCAN_DEFAULTS, "scan-angles")
    try:
        r_list = [float(r) for r in c["r_list"]]
        n_list = [int(n) for n in c["n_list"]]
        for n in n_list:
            sp.PeriodicGrid(n)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    if not r_list:
        raise ConfigError("r_list is empty")
    if any(not r > 1 for r in r_list):
        raise ConfigError("every crest exponent r must exceed 1")
    if len(n_list) < 2:
        raise ConfigError("n_list needs at least two resolutions")
    rows = vf.crest_angle_scan(r_list, n_list, args.jobs, c["diverge"], c["converge"])
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "scan.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["r", "n", "norm1", "norm2", "classification"])
        for r, n, a, b, label in rows:
            w.writerow([repr(r), n, repr(a), repr(b), label])
    for r, n, a, b, label in rows:
        print(f"r={r:<6g} n={n:<5d} norm1={a:.6g} norm2={b:.6g} {label}")
    return 0


# energy-report

REPORT_DEFAULTS = {"snapshot": None, "grid_n": 256, "ic": {"kind": "flat"},
                   "anchor_alpha0": 0.0, "seed": 0}


def cmd_energy_report(cfg, args):
    c = _take(cfg, REPORT_DEFAULTS, "energy-report")
    if args.seed is not None:
        c["seed"] = args.seed
    try:
        if c["snapshot"] is not None:
            s = read_snapshot(c["snapshot"])
            source = str(c["snapshot"])
        else:
            ic = dict(c["ic"])
            if ic.get("kind") == "random":
                ic.setdefault("seed", int(c["seed"]))
            s = make_ic(int(c["grid_n"]), ic)
            source = "initial condition"
        alpha0 = float(c["anchor_alpha0"])
        s.grid.index_of(alpha0)
    except (OSError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    d = derive(s)
    rep = energy(s, d, alpha0)
    doc = {
        "format_version": FORMAT_VERSION,
        "source": source,
        "t": s.t,
        "grid_n": s.n,
        "energy": {k: getattr(rep, k) for k in ("ea_1", "ea_23", "ea_4", "eb_1", "eb_2",
                                                "eb_3", "anchor", "total", "minA1")},
        "characterization": {k: float(v) for k, v in
                             zip(characterization(s, d).__dataclass_fields__,
                                 characterization(s, d).values())},
        "controlled": controlled_quantities(s, d),
    }
    for k, v in doc["energy"].items():
        print(f"{k:8s} {v:.10g}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _write_json(out / "energy_report.json", doc)
    return 0


COMMANDS = {"simulate": cmd_simulate, "verify": cmd_verify, "scan-angles": cmd_scan,
            "energy-report": cmd_energy_report}


def build_parser():
    ap = argparse.ArgumentParser(prog="crestwave",
                                 description="Water waves between walls in conformal coordinates.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, out_default in (("simulate", "out"), ("verify", None),
                              ("scan-angles", "out"), ("energy-report", None)):
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON configuration file")
        p.add_argument("--out", default=out_default, help="output directory")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config entry (repeatable, dotted keys)")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--seed", type=int)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return 2
    try:
        cfg = apply_overrides(load_config(args.config), args.set)
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        ap.print_usage(sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

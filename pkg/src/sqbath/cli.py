"""Command-line front end.

    sqbath list
    sqbath run <config-file> [--set key=value ...]
    sqbath run <experiment> [--set key=value ...] [--out DIR] [--format csv|json-lines]
    sqbath validate <config-file>

Config files are UTF-8 ``key = value`` lines with ``#`` comments. The keys
``experiment``, ``output.dir``, ``output.format`` and ``seed`` configure the run;
every other key (dotted keys allowed, e.g. ``drive.omega_over_gamma``) is an
experiment parameter. Exit codes: 0 success, 2 configuration error, 3 numerical
failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ._version import __version__
from .errors import InvariantError, NumericalError
from .experiments import CATALOG, ExperimentResult, ExperimentSpec, describe, run, validate

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3
RESERVED = ("experiment", "output.dir", "output.format", "seed")


class ConfigError(InvariantError):
    pass


@dataclass
class RunConfig:
    experiment: str
    overrides: dict = field(default_factory=dict)
    outdir: str = "."
    fmt: str = "csv"
    seed: Optional[int] = None

    def to_spec(self) -> ExperimentSpec:
        return ExperimentSpec.from_overrides(self.experiment, self.overrides, self.outdir, self.fmt, self.seed)


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Ordered ``key -> raw string`` map; duplicate keys are an error."""
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{n}: expected key=value, got {line!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"{source}:{n}: empty key")
        if key in out:
            raise ConfigError(f"{source}:{n}: duplicate key {key!r}")
        out[key] = val
    return out


def _parse_set(items) -> dict:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        k, v = (s.strip() for s in item.split("=", 1))
        out[k] = v
    return out


def _parse_seed(raw) -> Optional[int]:
    if raw is None:
        return None
    try:
        seed = int(str(raw).strip())
    except ValueError:
        raise ConfigError(f"seed must be a 64-bit unsigned integer, got {raw!r}") from None
    if not 0 <= seed < 2**64:
        raise ConfigError(f"seed must be a 64-bit unsigned integer, got {raw!r}")
    return seed


def load_config(path: str, sets: Optional[dict] = None) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    kv = parse_config_text(text, path)
    kv.update(sets or {})
    if "experiment" not in kv:
        raise ConfigError(f"{path}: missing required key 'experiment'")
    params = {k: v for k, v in kv.items() if k not in RESERVED}
    return RunConfig(kv["experiment"], params, kv.get("output.dir", "."),
                     kv.get("output.format", "csv"), _parse_seed(kv.get("seed")))


def config_text(cfg: RunConfig) -> str:
    """Serialize a run configuration; ``load_config`` reads it back to the same spec."""
    lines = [f"experiment = {cfg.experiment}", f"output.dir = {cfg.outdir}", f"output.format = {cfg.fmt}"]
    if cfg.seed is not None:
        lines.append(f"seed = {cfg.seed}")
    for k, v in cfg.overrides.items():
        if isinstance(v, (list, tuple)):
            v = ",".join(repr(float(x)) for x in v)
        lines.append(f"{k} = {v}")
    return "\n".join(lines) + "\n"


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, complex):
        return {"re": _jsonable(x.real), "im": _jsonable(x.imag)}
    if hasattr(x, "item"):
        x = x.item()
        return _jsonable(x)
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if hasattr(v, "item"):
        return _cell(v.item())
    return str(v)


def write_result(result: ExperimentResult, outdir: str, fmt: str) -> list[Path]:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    name = result.spec.name
    if fmt == "csv":
        table = out / f"{name}.csv"
        buf = io.StringIO()
        buf.write(f"# experiment={name} version={__version__}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(result.columns)
        for row in result.rows:
            w.writerow([_cell(v) for v in row])
    else:
        table = out / f"{name}.jsonl"
        buf = io.StringIO()
        buf.write(json.dumps({"experiment": name, "version": __version__}) + "\n")
        for row in result.rows:
            buf.write(json.dumps(dict(zip(result.columns, _jsonable(list(row))))) + "\n")
    table.write_text(buf.getvalue(), encoding="utf-8")
    summary = {"experiment": name, "version": __version__, "spec": _jsonable(result.spec.to_dict()),
               "results": _jsonable(result.summary),
               # the only field allowed to differ between identical runs
               "generated_at": time.strftime("%Y-%m-%dT%H:%M:%S%z")}
    path = out / f"{name}.summary.json"
    path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return [table, path]


def _threads(arg: Optional[int]) -> int:
    if arg is not None:
        n = arg
    else:
        raw = os.environ.get("SQBATH_THREADS", "1")
        try:
            n = int(raw)
        except ValueError:
            raise ConfigError(f"SQBATH_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"thread count must be a positive integer, got {n}")
    return n


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sqbath", description="Squeezed-bath atom simulations.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="show the experiment catalog with defaults")
    r = sub.add_parser("run", help="run an experiment from a config file or by name")
    r.add_argument("target", help="config file or experiment name")
    r.add_argument("--set", dest="sets", action="append", default=[], metavar="KEY=VALUE")
    r.add_argument("--out", dest="outdir", default=None)
    r.add_argument("--format", dest="fmt", choices=("csv", "json-lines"), default=None)
    r.add_argument("--seed", default=None)
    r.add_argument("--threads", type=int, default=None)
    v = sub.add_parser("validate", help="check a config file without computing")
    v.add_argument("config")
    v.add_argument("--set", dest="sets", action="append", default=[], metavar="KEY=VALUE")
    return ap


def _run_config(args) -> RunConfig:
    sets = _parse_set(args.sets)
    if args.target in CATALOG:
        cfg = RunConfig(args.target, sets)
    elif Path(args.target).is_file():
        cfg = load_config(args.target, sets)
    else:
        raise ConfigError(f"{args.target!r} is neither an experiment ({', '.join(CATALOG)}) nor a config file")
    if args.outdir is not None:
        cfg.outdir = args.outdir
    if args.fmt is not None:
        cfg.fmt = args.fmt
    if args.seed is not None:
        cfg.seed = _parse_seed(args.seed)
    return cfg


def cmd_list(out) -> int:
    for name, desc, defaults in describe():
        print(f"{name}: {desc}", file=out)
        for k, v in defaults.items():
            if v is not None:
                print(f"    {k} = {','.join(repr(x) for x in v) if isinstance(v, list) else v}", file=out)
    return EXIT_OK


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        if args.command == "list":
            return cmd_list(sys.stdout)
        if args.command == "validate":
            spec = load_config(args.config, _parse_set(args.sets)).to_spec()
            validate(spec)
            print(f"{args.config}: ok ({spec.name})")
            return EXIT_OK
        cfg = _run_config(args)
        workers = _threads(args.threads)
        spec = cfg.to_spec()
        result = run(spec, workers=workers)
        for p in write_result(result, cfg.outdir, cfg.fmt):
            print(p)
        return EXIT_OK
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except InvariantError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

"""Config parsing, dispatch and byte-stable output files."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from ..errors import ConfigInvalid, GappedEntError
from .experiments import REGISTRY, get_experiment

log = logging.getLogger("gapped_ent")

EXIT_OK = 0
EXIT_ASSERTION_FAILED = 1
EXIT_CONFIG_INVALID = 2
EXIT_EXPERIMENT_ERROR = 3
MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    output_path: str = "results"

    @classmethod
    def from_dict(cls, doc: Any) -> "ExperimentConfig":
        if not isinstance(doc, dict):
            raise ConfigInvalid("config must be a JSON object")
        unknown = sorted(set(doc) - {"experiment", "params", "seed", "output_path"})
        if unknown:
            raise ConfigInvalid(f"unknown config keys: {unknown}")
        if "experiment" not in doc or not isinstance(doc["experiment"], str):
            raise ConfigInvalid("config needs a string 'experiment'")
        params = doc.get("params", {})
        if not isinstance(params, dict):
            raise ConfigInvalid("'params' must be an object")
        out = doc.get("output_path", "results")
        if not isinstance(out, str):
            raise ConfigInvalid("'output_path' must be a string")
        return cls(doc["experiment"], params, check_seed(doc.get("seed", 0)), out)

    def validated(self) -> "ExperimentConfig":
        exp = get_experiment(self.experiment)
        return ExperimentConfig(self.experiment, exp.validate(self.params), check_seed(self.seed), self.output_path)


def check_seed(seed: Any) -> int:
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed <= MAX_SEED:
        raise ConfigInvalid(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return seed


@dataclass
class ResultBundle:
    config: ExperimentConfig
    columns: list[str]
    rows: list[dict]
    pass_flags: dict[str, bool]
    extremes: dict
    wall_time: float

    @property
    def passed(self) -> bool:
        return all(self.pass_flags.values())

    def summary(self) -> dict:
        """JSON summary; wall time is left out so reruns are byte-identical."""
        return {
            "experiment": self.config.experiment,
            "seed": self.config.seed,
            "params": self.config.params,
            "passed": self.passed,
            "assertions": self.pass_flags,
            "extremes": self.extremes,
            "rows": len(self.rows),
        }


def format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def to_csv(columns: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def to_json(doc: dict) -> str:
    return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"


def run(config: ExperimentConfig, write: bool = True) -> ResultBundle:
    """Validate, execute and (optionally) write ``<out>/<experiment>.csv`` and ``.json``."""
    config = config.validated()
    exp = REGISTRY[config.experiment]
    start = time.perf_counter()
    output = exp.runner(config.params, config.seed)
    bundle = ResultBundle(
        config,
        output.columns,
        output.rows,
        {k: bool(v) for k, v in output.assertions.items()},
        output.extremes,
        time.perf_counter() - start,
    )
    if write:
        out = Path(config.output_path)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{config.experiment}.csv").write_bytes(to_csv(bundle.columns, bundle.rows).encode())
        (out / f"{config.experiment}.json").write_bytes(to_json(bundle.summary()).encode())
    return bundle


def list_experiments() -> list[dict]:
    return [REGISTRY[name].describe() for name in sorted(REGISTRY)]


def _parse_assignment(text: str) -> tuple[str, Any]:
    key, sep, raw = text.partition("=")
    if not sep or not key:
        raise ConfigInvalid(f"--set expects key=value, got {text!r}")
    try:
        return key, json.loads(raw)
    except json.JSONDecodeError:
        return key, raw


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gapped-ent", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run one experiment")
    run_p.add_argument("--config", type=Path, help="JSON config file")
    run_p.add_argument("--experiment", help="experiment name (overrides the config)")
    run_p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override one parameter; VALUE is parsed as JSON when possible")
    run_p.add_argument("--seed", type=int, help="unsigned 64-bit seed (overrides the config)")
    run_p.add_argument("--out", help="output directory (overrides the config)")
    list_p = sub.add_parser("list", help="list experiments and their parameters")
    list_p.add_argument("--json", action="store_true", help="emit the registry as JSON")
    return parser


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    doc: dict = {}
    if args.config is not None:
        try:
            doc = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigInvalid(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigInvalid("config must be a JSON object")
    if args.experiment is not None:
        doc["experiment"] = args.experiment
    params = dict(doc.get("params", {}) or {})
    for item in args.set:
        key, value = _parse_assignment(item)
        params[key] = value
    doc["params"] = params
    if args.seed is not None:
        doc["seed"] = args.seed
    if args.out is not None:
        doc["output_path"] = args.out
    return ExperimentConfig.from_dict(doc)


def _print_listing(as_json: bool) -> None:
    listing = list_experiments()
    if as_json:
        sys.stdout.write(to_json({"experiments": listing}))
        return
    for entry in listing:
        print(f"{entry['name']}: {entry['description']}")
        for name, spec in entry["params"].items():
            print(f"    {name} ({spec['type']}, default {json.dumps(spec['default'])}): {spec['help']}")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.command == "list":
        _print_listing(args.json)
        return EXIT_OK
    try:
        config = _config_from_args(args)
        bundle = run(config)
    except ConfigInvalid as exc:
        print(f"config invalid: {exc}", file=sys.stderr)
        return EXIT_CONFIG_INVALID
    except GappedEntError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_EXPERIMENT_ERROR
    for name, ok in bundle.pass_flags.items():
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    print(f"{bundle.config.experiment}: {'passed' if bundle.passed else 'FAILED'} "
          f"({len(bundle.rows)} rows, {bundle.wall_time:.1f} s) -> {bundle.config.output_path}")
    return EXIT_OK if bundle.passed else EXIT_ASSERTION_FAILED

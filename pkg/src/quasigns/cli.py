"""Command line runner for the verification suites.

    quasigns run --config cfg.json --seed 7 --out out/
    quasigns dynamics --out out/

Exit status: 0 all checks passed, 1 some check failed, 2 invalid config.
"""

from __future__ import annotations

import argparse
import copy
import csv
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .suites import DEFAULTS, RNG_ALGORITHM, RUNNERS, SUITE_ORDER

SUITE_CHOICES = SUITE_ORDER + ("all",)


class ConfigError(Exception):
    def __init__(self, errors: list):
        super().__init__("; ".join(errors))
        self.errors = errors


@dataclass
class SuiteConfig:
    suites: list
    seed: int
    tolerances: dict
    sections: dict
    out: Path

    def to_dict(self) -> dict:
        return {"suites": self.suites, "seed": self.seed, "tolerances": self.tolerances,
                **self.sections}


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _merge(defaults: dict, given: dict, path: str, errors: list) -> dict:
    out = copy.deepcopy(defaults)
    for key, val in given.items():
        where = f"{path}.{key}" if path else key
        if key not in defaults:
            errors.append(f"{where}: unknown key")
            continue
        ref = defaults[key]
        if isinstance(ref, dict):
            if not isinstance(val, dict):
                errors.append(f"{where}: expected an object")
            else:
                out[key] = _merge(ref, val, where, errors)
        elif ref is None:
            out[key] = val
        elif _is_number(ref):
            if not _is_number(val):
                errors.append(f"{where}: expected a number")
            elif isinstance(ref, int) and not isinstance(val, int):
                errors.append(f"{where}: expected an integer")
            else:
                out[key] = val
        elif isinstance(ref, list):
            if not isinstance(val, list):
                errors.append(f"{where}: expected a list")
            else:
                out[key] = val
        else:
            out[key] = val
    return out


def _validate(cfg: dict, errors: list):
    suites = cfg["suites"]
    if not suites:
        errors.append("suites: empty suite list")
    for s in suites:
        if s not in SUITE_CHOICES:
            errors.append(f"suites: unknown suite {s!r}")
    if cfg["seed"] < 0:
        errors.append("seed: must be >= 0")
    for key, val in cfg["tolerances"].items():
        if val <= 0:
            errors.append(f"tolerances.{key}: must be positive")
    dyn = cfg["dynamics"]
    if dyn["J"] < 1 or dyn["d"] < 1:
        errors.append("dynamics: need J >= 1 and d >= 1")
    if not 0 <= dyn["k"] <= dyn["J"]:
        errors.append("dynamics.k: must lie in 0..J")
    if len(dyn["weights"]) != 2 or not all(_is_number(w) and w > 0 for w in dyn["weights"]):
        errors.append("dynamics.weights: need two positive numbers")
    lam = dyn["lambda"]
    if lam is not None and (not isinstance(lam, list) or len(lam) != 2 * dyn["J"] + 1):
        errors.append("dynamics.lambda: need 2J+1 numbers")
    kern = cfg["catalog"]["kernel"]
    if kern is not None:
        missing = {"x_grid", "t_grid", "samples"} - set(kern)
        extra = set(kern) - {"kind", "x_grid", "t_grid", "samples", "dx_samples"}
        for key in sorted(missing):
            errors.append(f"catalog.kernel.{key}: missing")
        for key in sorted(extra):
            errors.append(f"catalog.kernel.{key}: unknown key")


def load_config(path: str | None, suite: str | None = None, seed: int | None = None,
                out: str | None = None, tol: float | None = None) -> SuiteConfig:
    """Merge a JSON document over the defaults; raises ConfigError with every problem found."""
    errors = []
    given = {}
    if path is not None:
        try:
            given = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError([f"config: {exc}"]) from exc
        if not isinstance(given, dict):
            raise ConfigError(["config: top level must be an object"])
    cfg = _merge(DEFAULTS, given, "", errors)
    if suite is not None and suite != "run":
        cfg["suites"] = [suite]
    if seed is not None:
        cfg["seed"] = seed
    if tol is not None:
        cfg["tolerances"]["rtol"] = tol
    if not errors:
        _validate(cfg, errors)
    if errors:
        raise ConfigError(errors)
    suites = list(SUITE_ORDER) if "all" in cfg["suites"] else [s for s in SUITE_ORDER if s in cfg["suites"]]
    sections = {name: cfg[name] for name in SUITE_ORDER}
    return SuiteConfig(suites, int(cfg["seed"]), cfg["tolerances"], sections, Path(out or "."))


def suite_rng(seed: int, suite: str) -> np.random.Generator:
    """Independent stream per suite, so one suite alone matches its part of ``all``."""
    return np.random.default_rng([seed, SUITE_ORDER.index(suite)])


def run(config: SuiteConfig) -> tuple[dict, dict]:
    """Execute the selected suites; returns (report, timing)."""
    report = {"schema": 1, "rng": {"algorithm": RNG_ALGORITHM, "seed": config.seed},
              "config": config.to_dict(), "suites": {}}
    timing = {}
    tables = {}
    for name in config.suites:
        t0 = time.perf_counter()
        checks, files = RUNNERS[name](config.sections[name], suite_rng(config.seed, name),
                                      config.tolerances)
        timing[name] = time.perf_counter() - t0
        passed = sum(c["passed"] for c in checks)
        report["suites"][name] = {"checks": checks,
                                  "summary": {"checks": len(checks), "passed": passed,
                                              "failed": len(checks) - passed}}
        tables.update(files)
    total = sum(s["summary"]["checks"] for s in report["suites"].values())
    passed = sum(s["summary"]["passed"] for s in report["suites"].values())
    report["summary"] = {"checks": total, "passed": passed, "failed": total - passed,
                         "all_passed": passed == total}
    timing["total"] = sum(timing.values())
    return report, {"timing": timing, "tables": tables}


def write_outputs(report: dict, extra: dict, out: Path):
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    (out / "timing.json").write_text(json.dumps({k: round(v, 6) for k, v in extra["timing"].items()},
                                                indent=2) + "\n")
    for fname, (header, rows) in extra["tables"].items():
        with open(out / fname, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for row in rows:
                w.writerow([repr(v) if isinstance(v, float) else v for v in row])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quasigns",
                                     description="Run the quasi-GNS verification suites.")
    parser.add_argument("suite", choices=("run",) + SUITE_CHOICES,
                        help="suite to run; 'run' uses the suites listed in the config")
    parser.add_argument("--config", help="JSON config (merged over the defaults)")
    parser.add_argument("--seed", type=int, help="RNG seed (overrides the config)")
    parser.add_argument("--out", default="quasigns-out", help="output directory")
    parser.add_argument("--tol", type=float, help="relative tolerance for inequality checks")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config, args.suite, args.seed, args.out, args.tol)
    except ConfigError as exc:
        for line in exc.errors:
            print(f"config error: {line}", file=sys.stderr)
        return 2
    report, extra = run(config)
    write_outputs(report, extra, config.out)
    for name, suite in report["suites"].items():
        for c in suite["checks"]:
            status = "PASS" if c["passed"] else "FAIL"
            print(f"{status} {name}.{c['name']}" + ("" if c["passed"] else f"  [{c['anchor']}]"))
    s = report["summary"]
    print(f"{s['passed']}/{s['checks']} checks passed in {extra['timing']['total']:.2f}s")
    return 0 if s["all_passed"] else 1


if __name__ == "__main__":
    sys.exit(main())

"""Command line entry point and report assembly.

    spincalogero list
    spincalogero verify CONFIG [--cutoff 5 --k 1/2:-2 ...]
    spincalogero report CONFIG --format json --out report.json

Checks run in a process pool sized by ``SPINCALOGERO_WORKERS`` (default: the
available CPUs).  Records are assembled in check order, so the report does not
depend on scheduling.
"""

from __future__ import annotations

import argparse
import json
import os
import signal
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from . import __version__
from .scenarios import (
    CATALOG,
    ConfigError,
    ScenarioConfig,
    ScenarioContext,
    default_config,
    parse_config_text,
)

__all__ = ["CheckRecord", "VerificationReport", "ResourceBudgetExceeded", "run_scenario", "emit_report", "main"]

WORKERS_ENV = "SPINCALOGERO_WORKERS"
BUDGET_STATUS = "unverified: budget"


class ResourceBudgetExceeded(RuntimeError):
    pass


@dataclass
class CheckRecord:
    name: str
    params: dict
    status: str
    defect: str
    millis: int


@dataclass
class VerificationReport:
    scenario: str
    config: dict
    engine_version: str
    symmetry: str
    checks: list = field(default_factory=list)

    @property
    def summary(self) -> dict:
        out = {"total": len(self.checks), "pass": 0, "fail": 0, "unverified": 0}
        for c in self.checks:
            key = "pass" if c.status == "pass" else "fail" if c.status == "fail" else "unverified"
            out[key] += 1
        return out

    @property
    def passed(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    def to_dict(self, timing: bool = True) -> dict:
        checks = []
        for c in self.checks:
            d = asdict(c)
            if not timing:
                d.pop("millis")
            checks.append(d)
        return {"scenario": self.scenario, "config": self.config, "engine_version": self.engine_version,
                "symmetry": self.symmetry, "checks": checks, "summary": self.summary}

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        d = json.loads(text)
        checks = [CheckRecord(c["name"], c["params"], c["status"], c["defect"], c.get("millis", 0))
                  for c in d["checks"]]
        return cls(d["scenario"], d["config"], d["engine_version"], d["symmetry"], checks)

    def to_text(self) -> str:
        s = self.summary
        lines = [f"scenario {self.scenario}  ({self.symmetry})  engine {self.engine_version}"]
        width = max((len(c.name) for c in self.checks), default=10)
        for c in self.checks:
            params = ", ".join(f"{k}={v}" for k, v in c.params.items())
            lines.append(f"  {c.status:<19} {c.name:<{width}}  {params}")
            if c.status != "pass" and c.defect:
                lines.append(f"      defect: {c.defect}")
        verdict = "ALL PASS" if self.passed else "NOT ALL PASS"
        lines.append(f"{s['total']} checks: {s['pass']} pass, {s['fail']} fail, "
                     f"{s['unverified']} unverified -> {verdict}")
        return "\n".join(lines) + "\n"


# check execution ----------------------------------------------------------------------------

_CONTEXTS: dict = {}


def _context(cfg_dict: dict) -> ScenarioContext:
    key = json.dumps(cfg_dict, sort_keys=True)
    ctx = _CONTEXTS.get(key)
    if ctx is None:
        ctx = _CONTEXTS[key] = ScenarioContext(ScenarioConfig.from_dict(cfg_dict))
    return ctx


def _on_alarm(signum, frame):
    raise ResourceBudgetExceeded("time limit")


def _normalize(status) -> str:
    if status is True or status == "pass":
        return "pass"
    if status is False or status == "fail":
        return "fail"
    return str(status)


def _run_one(cfg_dict: dict, index: int) -> CheckRecord:
    ctx = _context(cfg_dict)
    check = ctx.checks()[index]
    limit = float(cfg_dict.get("time_limit") or 0)
    start = time.perf_counter()
    old = None
    if limit > 0:
        old = signal.signal(signal.SIGALRM, _on_alarm)
        signal.setitimer(signal.ITIMER_REAL, limit)
    try:
        status, defect, extra = ctx.run(check)
        status = _normalize(status)
        if status == "pass":
            defect = ""
    except (ResourceBudgetExceeded, MemoryError) as exc:
        status, defect, extra = BUDGET_STATUS, f"{type(exc).__name__}: {exc}", {}
    except Exception as exc:  # recorded, never fatal for the run
        status, defect, extra = "fail", f"error: {type(exc).__name__}: {exc}", {}
    finally:
        if limit > 0:
            signal.setitimer(signal.ITIMER_REAL, 0)
            signal.signal(signal.SIGALRM, old)
    millis = int((time.perf_counter() - start) * 1000)
    params = dict(check.params)
    params.update(extra)
    return CheckRecord(check.name, params, status, defect, millis)


def _worker_init(memory_mb: int):
    if memory_mb > 0:
        import resource

        cap = memory_mb * 1024 * 1024
        resource.setrlimit(resource.RLIMIT_AS, (cap, cap))


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "").strip()
    if raw:
        try:
            n = int(raw)
        except ValueError as exc:
            raise ConfigError(f"{WORKERS_ENV} must be an integer") from exc
        return max(1, n)
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:
        return max(1, os.cpu_count() or 1)


def run_scenario(cfg: ScenarioConfig, workers: int | None = None) -> VerificationReport:
    cfg.validate()
    ctx = ScenarioContext(cfg)
    checks = ctx.checks()
    cfg_dict = cfg.to_dict()
    workers = worker_count() if workers is None else workers
    # a memory cap always goes to a worker, never to the orchestrating process
    if (workers <= 1 or len(checks) <= 1) and not cfg.memory_mb:
        _CONTEXTS[json.dumps(cfg_dict, sort_keys=True)] = ctx
        records = [_run_one(cfg_dict, i) for i in range(len(checks))]
    else:
        with ProcessPoolExecutor(max_workers=workers, initializer=_worker_init,
                                 initargs=(cfg.memory_mb,)) as pool:
            futures = [pool.submit(_run_one, cfg_dict, i) for i in range(len(checks))]
            records = []
            for i, fut in enumerate(futures):
                try:
                    records.append(fut.result())
                except Exception as exc:  # a worker died, usually from the memory cap
                    c = checks[i]
                    records.append(CheckRecord(c.name, dict(c.params), BUDGET_STATUS,
                                               f"worker lost: {type(exc).__name__}", 0))
    return VerificationReport(cfg.scenario, cfg.echo(), __version__, CATALOG[cfg.scenario]["symmetry"], records)


def emit_report(report: VerificationReport, fmt: str, path: str | None = None) -> str:
    if fmt == "json":
        text = report.to_json()
    elif fmt == "text":
        text = report.to_text()
    else:
        raise ConfigError(f"unknown format {fmt!r}")
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def list_scenarios() -> str:
    lines = []
    for name, entry in CATALOG.items():
        defaults = ", ".join(f"{k}={v}" for k, v in entry["defaults"].items())
        lines.append(f"{name}\n    {entry['summary']}\n    symmetry: {entry['symmetry']}\n    defaults: {defaults}")
    return "\n".join(lines) + "\n"


# argument handling -------------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spincalogero", description="Exact checks for Dunkl operators and "
                                "spin Calogero models with (twisted) half-loop symmetry.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="show the scenario catalog")
    for name in ("verify", "report"):
        sp = sub.add_parser(name, help="run every check of a scenario" if name == "verify"
                            else "run a scenario and write a report")
        sp.add_argument("config", nargs="?", help="key = value configuration file")
        sp.add_argument("--scenario")
        sp.add_argument("--cutoff", type=int)
        sp.add_argument("--N", type=int)
        sp.add_argument("--k", help="k_s:k_l pairs, e.g. '0:0, 1/2:-2'")
        sp.add_argument("--seed-point", help="comma separated rational point for rank sampling")
        sp.add_argument("--out", help="write the report here")
        sp.add_argument("--format", choices=("json", "text"), default="json" if name == "report" else "text")
    return p


def build_config(args) -> ScenarioConfig:
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read {args.config}: {exc}") from exc
        probe = parse_config_text(text)
        name = args.scenario or probe.scenario
        if not name:
            raise ConfigError("configuration names no scenario")
        cfg = parse_config_text(text, default_config(name))
        if args.scenario:
            cfg.scenario = args.scenario
    elif args.scenario:
        cfg = default_config(args.scenario)
    else:
        raise ConfigError("give a configuration file or --scenario")
    for key, value in (("cutoff", args.cutoff), ("N", args.N), ("k", args.k), ("seed_point", args.seed_point),
                       ("report_path", args.out)):
        if value is not None:
            cfg.apply(key, str(value))
    return cfg.validate()


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "list":
        sys.stdout.write(list_scenarios())
        return 0
    try:
        cfg = build_config(args)
        report = run_scenario(cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "verify":
            sys.stdout.write(report.to_text())
            if cfg.report_path:
                emit_report(report, args.format, cfg.report_path)
        else:
            text = emit_report(report, args.format, cfg.report_path)
            if not cfg.report_path:
                sys.stdout.write(text)
    except OSError as exc:
        print(f"cannot write report: {exc}", file=sys.stderr)
        return 2
    return 0 if report.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())

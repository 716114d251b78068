"""Command-line front end.

Usage::

    negentropy <command> --scenario <path> [--seed N] [--samples K] [--format json|csv] [--out PATH]

Exit codes: 0 success, 2 unreadable input or bad parameters, 3 solver
failure, 4 a bound check failed, 5 capacity exceeded.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import entropy as ent
from . import protocol as proto
from . import thermo
from .decoupling import max_decoupled_size, sample_decoupling
from .exceptions import CapacityError, InfeasibleError, InvalidStateError, SolverError
from .quantum import DensityOperator, RegisterLayout

COMMANDS = ("entropy", "erase", "extract", "decouple", "protocol", "aep", "rate")
RANDOMIZED = ("decouple", "protocol", "rate")
BOLTZMANN = 1.380649e-23  # J/K

EXIT_OK, EXIT_PARSE, EXIT_SOLVER, EXIT_BOUND, EXIT_CAPACITY = 0, 2, 3, 4, 5


class ConfigError(Exception):
    """The scenario file or the options are unusable."""


@dataclass
class RunConfig:
    command: str
    scenario_path: Path
    seed: int | None
    samples: int | None
    output: Path | None
    format: str

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.samples is not None and self.samples < 1:
            raise ConfigError("--samples must be at least 1")
        if self.command in RANDOMIZED and self.seed is None:
            raise ConfigError(f"the {self.command} command is randomized and needs an explicit --seed")


# ---------------------------------------------------------------------------
# scenario loading
# ---------------------------------------------------------------------------

def load_scenario_file(path: Path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"scenario file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"scenario file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or "tag" not in data:
        raise ConfigError("scenario JSON must be an object with a 'tag' field")
    return data


def scenario_from_dict(data: dict, samples: int | None = None) -> proto.Scenario:
    try:
        kwargs = dict(
            epsilon=float(data.get("epsilon", 0.0)),
            delta=float(data.get("delta", proto.DEFAULT_DELTA)),
            schedule=thermo.ScheduleConfig.from_dict(data.get("schedule")),
            samples=int(samples if samples is not None else data.get("samples", proto.DEFAULT_SAMPLES)),
            name=data.get("name"),
            temperature_kelvin=data.get("temperature_kelvin"),
        )
        tag = data["tag"]
        if tag == "classical":
            kwargs["probabilities"] = np.asarray(data["probabilities"], dtype=float)
        if tag == "custom":
            kwargs["state"] = DensityOperator.from_dict(data["state"])
            kwargs["layout"] = RegisterLayout.from_list(data["layout"])
        return proto.build_scenario(tag, int(data.get("qubits", 1)), **kwargs)
    except CapacityError:
        raise
    except (KeyError, TypeError, ValueError, InvalidStateError, InfeasibleError) as exc:
        raise ConfigError(f"invalid scenario: {exc}") from exc


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _joules(kt_ln2: float, temperature: float | None) -> float | None:
    if temperature is None:
        return None
    return kt_ln2 * BOLTZMANN * temperature * math.log(2)


def cmd_entropy(scn: proto.Scenario, data: dict, cfg: RunConfig) -> tuple[dict, int]:
    rho = scn.density
    lay = scn.layout
    reports = {
        "vn": ent.conditional_von_neumann(rho, lay, "S", "O"),
        "hmin": ent.hmin(rho, lay, "S", "O"),
        "hmax": ent.hmax(rho, lay, "S", "O"),
    }
    if scn.epsilon > 0:
        reports["hmax_smooth"] = ent.hmax_smooth(rho, lay, scn.epsilon, "S", "O")
        reports["hmin_smooth"] = ent.hmin_smooth(rho, lay, scn.epsilon, "S", "O", dual="Gamma")
    out = {"scenario": scn.name}
    out.update({k: r.value for k, r in reports.items()})
    out["reports"] = {k: r.to_dict() for k, r in reports.items()}
    return out, EXIT_OK


def _ledger_output(kind: str, scn: proto.Scenario, ledger: thermo.WorkLedger, cfg: RunConfig):
    if cfg.format == "csv":
        return ledger.to_csv(), EXIT_OK
    out = {"process": kind, "qubits": scn.n, "schedule": scn.schedule.to_dict(), "ledger": ledger.to_dict()}
    j = _joules(ledger.total, scn.temperature_kelvin)
    if j is not None:
        out["total_J"] = j
        out["temperature_kelvin"] = scn.temperature_kelvin
    return out, EXIT_OK


def cmd_erase(scn: proto.Scenario, data: dict, cfg: RunConfig):
    _, _, ledger = thermo.erase_mixed(scn.n, scn.schedule)
    return _ledger_output("erase", scn, ledger, cfg)


def cmd_extract(scn: proto.Scenario, data: dict, cfg: RunConfig):
    _, _, ledger = thermo.extract_work_pure(scn.n, scn.schedule)
    return _ledger_output("extract", scn, ledger, cfg)


def cmd_decouple(scn: proto.Scenario, data: dict, cfg: RunConfig):
    lay = scn.layout
    if "m" in data:
        m = int(data["m"])
    else:
        h = ent.hmax_smooth(scn.density, lay, scn.epsilon, "S", "O").value
        m = max_decoupled_size(scn.n, h, scn.delta**2 / 2, scn.epsilon)
    res = sample_decoupling(scn.state, lay, m, scn.samples, cfg.seed, env="Gamma", epsilon=scn.epsilon)
    out = {"scenario": scn.name, "seed": cfg.seed, **res.to_dict()}
    return out, EXIT_OK


def cmd_protocol(scn: proto.Scenario, data: dict, cfg: RunConfig):
    mode = data.get("mode", "erase")
    if mode == "erase":
        tr = proto.run_erasure(scn, cfg.seed)
    elif mode == "extract":
        tr = proto.run_extraction(scn, cfg.seed)
    else:
        raise ConfigError(f"unknown protocol mode {mode!r}")
    out = tr.to_dict(entries=False)
    out["seed"] = cfg.seed
    code = EXIT_OK if tr.success else EXIT_BOUND
    if code != EXIT_OK:
        for v in tr.violations:
            print(f"bound check failed: {v}", file=sys.stderr)
    return out, code


def _copies(data: dict, default: list[int]) -> list[int]:
    c = data.get("copies", default)
    if isinstance(c, int):
        c = [c]
    try:
        out = [int(x) for x in c]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"copies must be a list of integers: {exc}") from exc
    if any(x < 1 for x in out):
        raise ConfigError("copies must be positive")
    return out


def _cell(value) -> str:
    if value is None:
        return ""
    return repr(value) if isinstance(value, float) else str(value)


def _table(rows: list[dict], columns: list[str], cfg: RunConfig, extra: dict):
    if cfg.format == "csv":
        lines = [",".join(columns)]
        for r in rows:
            lines.append(",".join(_cell(r[c]) for c in columns))
        return "\n".join(lines) + "\n"
    return {**extra, "rows": rows}


def cmd_aep(scn: proto.Scenario, data: dict, cfg: RunConfig):
    rho = scn.density
    lay = scn.layout
    target = ent.conditional_von_neumann(rho, lay, "S", "O").value
    reduced = scn.marginal(["S", "O"])
    sub = RegisterLayout.of(S=lay.qubits("S"), O=lay.qubits("O"))
    rows = []
    for n in _copies(data, [1, 2, 5, 10, 25, 50]):
        rate = ent.aep_rate(reduced, sub, n, scn.epsilon, "S", "O")
        rows.append({"n": n, "rate": rate, "target": target})
    return _table(rows, ["n", "rate", "target"], cfg, {"scenario": scn.name, "epsilon": scn.epsilon}), EXIT_OK


def cmd_rate(scn: proto.Scenario, data: dict, cfg: RunConfig):
    default = [10, 25, 50] if scn.table is not None else [1, 2]
    points = proto.work_cost_rate(scn, _copies(data, default), cfg.seed)
    target = ent.conditional_von_neumann(scn.density, scn.layout, "S", "O").value
    rows = [{**p.to_dict(), "target": target} for p in points]
    if scn.temperature_kelvin is not None:
        for r in rows:
            r["rate_J"] = _joules(r["rate"], scn.temperature_kelvin)
    cols = ["n", "rate", "ideal_rate", "bound_rate", "slack_rate", "target", "method"]
    return _table(rows, cols, cfg, {"scenario": scn.name, "epsilon": scn.epsilon, "seed": cfg.seed}), EXIT_OK


HANDLERS = {
    "entropy": cmd_entropy,
    "erase": cmd_erase,
    "extract": cmd_extract,
    "decouple": cmd_decouple,
    "protocol": cmd_protocol,
    "aep": cmd_aep,
    "rate": cmd_rate,
}


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="negentropy",
        description="Erasure with quantum side information: entropies, work ledgers and protocol runs.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--scenario", required=True, type=Path, help="scenario JSON file")
    parser.add_argument("--seed", type=int, default=None, help="required for decouple, protocol and rate")
    parser.add_argument("--samples", type=int, default=None, help="Haar samples (overrides the scenario)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")
    return parser


def _emit(payload, cfg: RunConfig) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if cfg.output is None:
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            # downstream closed early (e.g. piped into head)
            sys.stdout = None
    else:
        cfg.output.write_text(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on bad arguments
    try:
        cfg = RunConfig(args.command, args.scenario, args.seed, args.samples, args.out, args.format)
        data = load_scenario_file(cfg.scenario_path)
        scn = scenario_from_dict(data, cfg.samples)
        payload, code = HANDLERS[cfg.command](scn, data, cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SolverError as exc:
        print(f"solver failure: {exc} {exc.residuals}", file=sys.stderr)
        return EXIT_SOLVER
    except CapacityError as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    _emit(payload, cfg)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

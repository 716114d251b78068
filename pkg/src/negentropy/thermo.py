"""Battery and heat-bath simulation of level-manipulation processes.

The model has two allowed actions:

* shifting energy levels of the system, paid for by the battery with
  ``occupancy * shift`` (the average-work rule), and
* bringing the system into contact with the bath, which replaces its state
  by the Gibbs state of the current levels.

Energies are in units of kT; work, heat and battery charge are in units of
kT ln 2, so one bit of erasure costs exactly 1.0 in the quasistatic limit.
Quasistatic processes are simulated as alternating shift/thermalize loops.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .quantum import DensityOperator, PureState, trace_distance

LN2 = math.log(2)


@dataclass(frozen=True)
class ScheduleConfig:
    """Quasistatic schedule: raise to ``e_max`` (kT) in steps of ``delta`` (kT)."""

    e_max: float = 30.0
    delta: float = 0.01
    beta: float = 1.0

    def __post_init__(self):
        if not (self.e_max > 0 and math.isfinite(self.e_max)):
            raise ValueError(f"e_max must be positive and finite, got {self.e_max}")
        if not (self.delta > 0 and math.isfinite(self.delta)):
            raise ValueError(f"delta must be positive and finite, got {self.delta}")
        if not self.beta >= 0:
            raise ValueError(f"beta must be non-negative, got {self.beta}")

    @property
    def steps(self) -> int:
        return max(1, math.ceil(self.e_max / self.delta - 1e-9))

    def grid(self) -> np.ndarray:
        """Energies visited by the schedule, 0 = E_0 < E_1 < ... < E_K = e_max."""
        k = self.steps
        return np.minimum(np.arange(k + 1) * self.delta, self.e_max)

    def tail_bound(self, raised_levels: int) -> float:
        """Bound (kT ln 2) on the work left on the table by stopping at ``e_max``."""
        n = raised_levels
        return n * (1 + self.e_max) * math.exp(-self.beta * self.e_max) / LN2

    def to_dict(self) -> dict:
        return {"e_max": self.e_max, "delta": self.delta, "beta": self.beta}

    @classmethod
    def from_dict(cls, data: dict | None) -> ScheduleConfig:
        data = data or {}
        return cls(**{k: float(data[k]) for k in ("e_max", "delta", "beta") if k in data})


@dataclass(frozen=True)
class Battery:
    """Work reservoir; ``charge`` in kT ln 2."""

    charge: float = 0.0

    def __add__(self, amount: float) -> Battery:
        return Battery(self.charge + amount)


@dataclass(frozen=True)
class LedgerEntry:
    label: str
    work: float  # kT ln 2, work done on the system by the battery
    occupancy: float  # total occupancy of the shifted levels before the shift
    shift: float  # kT


@dataclass
class WorkLedger:
    """Ordered record of battery transactions plus the heat drawn from the bath."""

    entries: list[LedgerEntry] = field(default_factory=list)
    heat: float = 0.0  # kT ln 2 drawn from the bath by thermalizations

    @property
    def total(self) -> float:
        return math.fsum(e.work for e in self.entries)

    def record(self, label: str, work: float, occupancy: float, shift: float) -> None:
        self.entries.append(LedgerEntry(label, float(work), float(occupancy), float(shift)))

    def merged(self, other: WorkLedger) -> WorkLedger:
        return WorkLedger(self.entries + other.entries, self.heat + other.heat)

    def __len__(self) -> int:
        return len(self.entries)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["step", "label", "dE_kTln2", "occupancy", "cumulative_kTln2"])
        cum = 0.0
        for i, e in enumerate(self.entries):
            cum += e.work
            writer.writerow([i, e.label, repr(e.work), repr(e.occupancy), repr(cum)])
        return buf.getvalue()

    def to_dict(self, entries: bool = True) -> dict:
        out = {"total_kTln2": self.total, "heat_kTln2": self.heat, "steps": len(self.entries)}
        if entries:
            out["entries"] = [
                {"label": e.label, "dE_kTln2": e.work, "occupancy": e.occupancy, "shift_kT": e.shift}
                for e in self.entries
            ]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> WorkLedger:
        entries = [
            LedgerEntry(d["label"], d["dE_kTln2"], d["occupancy"], d.get("shift_kT", 0.0))
            for d in data.get("entries", [])
        ]
        return cls(entries, float(data.get("heat_kTln2", 0.0)))


@dataclass(frozen=True, eq=False)
class LevelSystem:
    """Energy levels (kT) of a system together with its level populations."""

    energies: np.ndarray
    populations: np.ndarray

    def __post_init__(self):
        e = np.array(self.energies, dtype=float)
        p = np.array(self.populations, dtype=float)
        if e.ndim != 1 or not np.all(np.isfinite(e)):
            raise ValueError("energies must be a finite vector")
        if p.shape != e.shape:
            raise ValueError(f"{p.size} populations for {e.size} levels")
        e.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "energies", e)
        object.__setattr__(self, "populations", p)

    @classmethod
    def degenerate(cls, levels: int, state: DensityOperator | None = None) -> LevelSystem:
        """All levels at zero energy; ``state`` defaults to the Gibbs (uniform) state."""
        if state is None:
            pops = np.full(levels, 1.0 / levels)
        else:
            if state.dim != levels:
                raise ValueError(f"state dimension {state.dim} does not match {levels} levels")
            pops = np.real(np.diag(state.matrix))
        return cls(np.zeros(levels), pops)

    @property
    def levels(self) -> int:
        return self.energies.size

    @property
    def state(self) -> DensityOperator:
        return DensityOperator(np.diag(self.populations).astype(complex), check=False)

    def internal_energy(self) -> float:
        """Mean energy in kT ln 2."""
        return float(np.dot(self.populations, self.energies)) / LN2

    def occupancy(self, targets: Iterable[int]) -> float:
        idx = list(targets)
        return float(np.sum(self.populations[idx])) if idx else 0.0


def _gibbs_populations(energies: np.ndarray, beta: float) -> np.ndarray:
    w = np.exp(-beta * (energies - energies.min()))
    return w / w.sum()


def shift_levels(
    sys: LevelSystem,
    targets: Sequence[int],
    dE: float,
    battery: Battery,
    label: str = "shift",
) -> tuple[LevelSystem, Battery, LedgerEntry]:
    """Move the ``targets`` levels by ``dE`` kT; the battery pays occupancy * dE."""
    idx = np.asarray(list(targets), dtype=int)
    if idx.size and (idx.min() < 0 or idx.max() >= sys.levels):
        raise IndexError(f"level targets {idx.tolist()} out of range for {sys.levels} levels")
    occ = sys.occupancy(idx.tolist())
    work = occ * dE / LN2
    e = sys.energies.copy()
    e[idx] += dE
    return replace(sys, energies=e), Battery(battery.charge - work), LedgerEntry(label, work, occ, dE)


def thermalize(sys: LevelSystem, beta: float = 1.0) -> LevelSystem:
    """Replace the populations by the Gibbs distribution of the current levels."""
    return replace(sys, populations=_gibbs_populations(sys.energies, beta))


def heat_of(before: LevelSystem, after: LevelSystem) -> float:
    """Heat (kT ln 2) drawn from the bath when ``before`` thermalizes into ``after``."""
    return after.internal_energy() - before.internal_energy()


# ---------------------------------------------------------------------------
# quasistatic processes
# ---------------------------------------------------------------------------

class _Run:
    """Mutable bookkeeping for one process (average or single-trajectory mode)."""

    def __init__(self, energies: np.ndarray, populations: np.ndarray, beta: float, seed: int | None):
        self.e = np.array(energies, dtype=float)
        self.beta = beta
        self.ledger = WorkLedger()
        self.rng = None if seed is None else np.random.default_rng(seed)
        if self.rng is None:
            self.p = np.array(populations, dtype=float)
        else:
            self.level = int(self.rng.choice(self.e.size, p=populations / populations.sum()))
            self.p = np.zeros(self.e.size)
            self.p[self.level] = 1.0

    def shift(self, mask: np.ndarray, de: float, label: str) -> None:
        occ = float(self.p[mask].sum())
        work = occ * de / LN2
        self.ledger.record(label, work, occ, de)
        self.e[mask] += de

    def thermalize(self) -> None:
        before = float(self.p @ self.e)
        g = _gibbs_populations(self.e, self.beta)
        if self.rng is not None:
            self.level = int(self.rng.choice(self.e.size, p=g))
            g = np.zeros(self.e.size)
            g[self.level] = 1.0
        self.p = g
        self.ledger.heat += (float(self.p @ self.e) - before) / LN2

    def system(self) -> LevelSystem:
        return LevelSystem(self.e.copy(), self.p.copy())


def _initial_populations(levels: int, state: DensityOperator | None, default: np.ndarray) -> np.ndarray:
    if state is None:
        return default
    if state.dim != levels:
        raise ValueError(f"state dimension {state.dim} does not match {levels} levels")
    p = np.clip(np.real(np.diag(state.matrix)), 0.0, None)
    return p / p.sum()


def erase_levels(
    levels: int,
    schedule: ScheduleConfig | None = None,
    battery: Battery | None = None,
    target: int = 0,
    state: DensityOperator | None = None,
    seed: int | None = None,
) -> tuple[LevelSystem, Battery, WorkLedger]:
    """Reset a degenerate ``levels``-level system into level ``target``.

    The system is first put in contact with the bath; then every other level
    is raised in steps of ``delta`` up to ``e_max`` with a thermalization after
    each step. Finally the (now practically empty) levels are lowered back
    without bath contact so that the Hamiltonian ends where it started.
    In the quasistatic limit the cost is ``log2(levels)``. Passing ``seed``
    runs a single stochastic trajectory instead of the ensemble average.
    """
    schedule = schedule or ScheduleConfig()
    battery = battery or Battery()
    if levels < 1 or not 0 <= target < levels:
        raise ValueError("invalid level count or target")
    pops = _initial_populations(levels, state, np.full(levels, 1.0 / levels))
    run = _Run(np.zeros(levels), pops, schedule.beta, seed)
    mask = np.ones(levels, bool)
    mask[target] = False
    run.thermalize()
    grid = schedule.grid()
    for de in np.diff(grid):
        run.shift(mask, float(de), "raise")
        run.thermalize()
    run.shift(mask, -float(grid[-1]), "restore")
    return run.system(), battery + (-run.ledger.total), run.ledger


def extract_levels(
    levels: int,
    schedule: ScheduleConfig | None = None,
    battery: Battery | None = None,
    occupied: int = 0,
    state: DensityOperator | None = None,
    seed: int | None = None,
) -> tuple[LevelSystem, Battery, WorkLedger]:
    """Extract work from a degenerate system known to sit in level ``occupied``.

    The other levels are lifted to ``e_max`` in one move, free of cost when
    they are empty, and then lowered in steps of ``delta`` with a
    thermalization after each step. The gain tends to ``log2(levels)``.
    When ``state`` puts weight on the nominally empty levels the lift costs
    that weight times ``e_max``; with ``seed`` set a single trajectory is
    sampled and such a run is a failure that pays the full ``e_max``.
    """
    schedule = schedule or ScheduleConfig()
    battery = battery or Battery()
    if levels < 1 or not 0 <= occupied < levels:
        raise ValueError("invalid level count or occupied level")
    default = np.zeros(levels)
    default[occupied] = 1.0
    pops = _initial_populations(levels, state, default)
    run = _Run(np.zeros(levels), pops, schedule.beta, seed)
    mask = np.ones(levels, bool)
    mask[occupied] = False
    grid = schedule.grid()
    run.shift(mask, float(grid[-1]), "lift")
    run.thermalize()
    for de in np.diff(grid)[::-1]:
        run.shift(mask, -float(de), "lower")
        run.thermalize()
    return run.system(), battery + (-run.ledger.total), run.ledger


def erase_mixed(
    qubits: int,
    schedule: ScheduleConfig | None = None,
    battery: Battery | None = None,
    state: DensityOperator | None = None,
    seed: int | None = None,
) -> tuple[LevelSystem, Battery, WorkLedger]:
    """Erase ``qubits`` qubits to ``|0...0>``; costs ``qubits`` kT ln 2 quasistatically."""
    return erase_levels(2**qubits, schedule, battery, 0, state, seed)


def extract_work_pure(
    qubits: int,
    schedule: ScheduleConfig | None = None,
    battery: Battery | None = None,
    state: DensityOperator | None = None,
    seed: int | None = None,
) -> tuple[LevelSystem, Battery, WorkLedger]:
    """Turn ``qubits`` qubits in ``|0...0>`` into a fully mixed state, gaining ``qubits`` kT ln 2."""
    return extract_levels(2**qubits, schedule, battery, 0, state, seed)


def quasistatic_value(raised_levels: int) -> float:
    """Analytic quasistatic work (kT ln 2) for raising or lowering ``raised_levels`` levels."""
    return math.log2(raised_levels + 1)


def raised_occupancy(gap: float, raised_levels: int = 1) -> float:
    """Thermal occupancy of ``raised_levels`` degenerate levels sitting ``gap`` kT above one level."""
    return 1.0 / (1.0 + math.exp(gap) / raised_levels)


# ---------------------------------------------------------------------------
# failure model
# ---------------------------------------------------------------------------

def failure_probability(rho: DensityOperator, expected_pure: PureState | DensityOperator) -> float:
    """Probability ``1 - <phi|rho|phi>`` that the system is found outside the expected level."""
    if isinstance(expected_pure, DensityOperator):
        phi = expected_pure
    else:
        phi = DensityOperator.from_pure(expected_pure)
    if phi.dim != rho.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {phi.dim}")
    overlap = float(np.real(np.trace(rho.matrix @ phi.matrix)))
    return max(0.0, rho.norm - overlap)


def distinguish_probability(rho: DensityOperator, sigma: DensityOperator) -> float:
    """Optimal success probability of telling ``rho`` from ``sigma`` with equal priors."""
    return 0.5 * (1 + trace_distance(rho, sigma))

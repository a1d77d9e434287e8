"""One-dimensional Maxwell demon with a finite memory and an entropy ledger.

Two chambers ``A = [0, L)`` and ``B = [L, 2L]`` share a gate at ``x = L``.
Molecules move ballistically and reflect elastically off the outer walls and
off the closed gate. The demon classifies each molecule that reaches the gate
as fast (``|v| > threshold``) or slow, stores that bit, and opens the gate for
fast molecules leaving A and, to keep both populations fixed, for slow molecules
leaving B that replace an earlier fast crossing. Every look costs one memory bit
and a momentum kick of ``hbar / L``; a full memory is wiped, which dumps
``k_B ln 2`` of entropy per bit into the environment.

Ledger entries are entropy changes since ``t = 0`` in J/K. The gas entry uses
the 1-D ideal-gas (Sackur-Tetrode) entropy per chamber with the temperature
estimated from the sampled kinetic energy.
"""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .constants import H_PLANCK, HBAR, K_B, LN2, N2_MASS
from .errors import ConfigError

SECOND_LAW_TOL = 1e-12  # in units of k_B


@dataclass(frozen=True)
class DemonConfig:
    n_molecules: int = 2000
    temperature_K: float = 300.0
    box_length_L: float = 1e-6
    mass: float = N2_MASS
    speed_threshold: float | None = None  # default: thermal speed sqrt(k_B T / m)
    memory_capacity_bits: int = 1024
    steps: int = 10_000
    dt: float | None = None  # default: L / (20 * thermal speed)
    seed: int = 0
    kicks: bool = True

    def __post_init__(self):
        if int(self.n_molecules) < 1:
            raise ConfigError("n_molecules must be >= 1")
        for name in ("temperature_K", "box_length_L", "mass"):
            val = getattr(self, name)
            if not (val > 0.0 and math.isfinite(val)):
                raise ConfigError(f"{name} must be positive and finite, got {val!r}")
        if self.speed_threshold is not None and not self.speed_threshold > 0.0:
            raise ConfigError("speed_threshold must be positive (inf disables the demon)")
        if int(self.memory_capacity_bits) < 1:
            raise ConfigError("memory_capacity_bits must be >= 1")
        if int(self.steps) < 0:
            raise ConfigError("steps must be >= 0")
        if self.dt is not None and not (self.dt > 0.0 and math.isfinite(self.dt)):
            raise ConfigError("dt must be positive")
        if self.thermal_speed * self.time_step >= self.box_length_L / 10.0:
            raise ConfigError("dt too large: thermal speed * dt must stay below L/10")

    @property
    def thermal_speed(self) -> float:
        return math.sqrt(K_B * self.temperature_K / self.mass)

    @property
    def threshold(self) -> float:
        return self.thermal_speed if self.speed_threshold is None else float(self.speed_threshold)

    @property
    def time_step(self) -> float:
        return self.box_length_L / (20.0 * self.thermal_speed) if self.dt is None else float(self.dt)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "DemonConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        return cls(**data)


@dataclass(frozen=True)
class GasState:
    positions: np.ndarray
    velocities: np.ndarray
    box_length_L: float
    mass: float
    initial_count_b: int
    gate_open: bool = False

    @property
    def in_b(self) -> np.ndarray:
        return self.positions >= self.box_length_L

    def chamber_labels(self) -> np.ndarray:
        return np.where(self.in_b, "B", "A")

    def kinetic_energy(self) -> float:
        return float(0.5 * self.mass * np.sum(self.velocities**2))


@dataclass(frozen=True)
class DemonMemory:
    capacity_bits: int
    records: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.uint8))
    erasures: int = 0
    bits_written: int = 0

    @property
    def used_bits(self) -> int:
        return int(self.records.size)


@dataclass(frozen=True)
class EntropyLedger:
    """Entropy changes since the start of a run, J/K."""

    gas_entropy: float = 0.0
    demon_memory_entropy: float = 0.0
    environment_entropy: float = 0.0
    bits_erased: int = 0
    heat_dissipated: float = 0.0  # J
    reference_gas_entropy: float = 0.0  # absolute S_gas at t = 0

    @property
    def total(self) -> float:
        return self.gas_entropy + self.demon_memory_entropy + self.environment_entropy


@dataclass(frozen=True)
class StepEvents:
    measurements: int
    crossings_ab: int
    crossings_ba: int
    erasures: int


@dataclass(frozen=True)
class ChamberStats:
    count: int
    temperature: float
    entropy: float  # J/K, absolute


def thermal_wavelength(temperature: float, mass: float) -> float:
    return H_PLANCK / math.sqrt(2.0 * math.pi * mass * K_B * temperature)


def chamber_stats(velocities: np.ndarray, length: float, mass: float) -> ChamberStats:
    """Count, kinetic temperature and 1-D ideal-gas entropy of one chamber.

    ``S = N k_B (ln(L / (N lambda_th)) + 3/2)``; an empty chamber has zero
    entropy and zero temperature.
    """
    n = int(velocities.size)
    if n == 0:
        return ChamberStats(0, 0.0, 0.0)
    temp = float(mass * np.mean(velocities**2) / K_B)
    if temp <= 0.0:
        return ChamberStats(n, 0.0, 0.0)
    lam = thermal_wavelength(temp, mass)
    s = n * K_B * (math.log(length / (n * lam)) + 1.5)
    return ChamberStats(n, temp, s)


def gas_chambers(gas: GasState) -> tuple[ChamberStats, ChamberStats]:
    in_b = gas.in_b
    a = chamber_stats(gas.velocities[~in_b], gas.box_length_L, gas.mass)
    b = chamber_stats(gas.velocities[in_b], gas.box_length_L, gas.mass)
    return a, b


def gas_entropy(gas: GasState) -> float:
    a, b = gas_chambers(gas)
    return a.entropy + b.entropy


def heisenberg_floor(cfg_or_length) -> float:
    """Smallest momentum disturbance of one position-resolving look, ``hbar / L``."""
    length = cfg_or_length.box_length_L if isinstance(cfg_or_length, DemonConfig) else cfg_or_length
    if not length > 0.0:
        raise ValueError("box length must be positive")
    return HBAR / float(length)


def init_gas(cfg: DemonConfig, rng: np.random.Generator | None = None) -> GasState:
    """Uniform positions over both chambers, 1-D Maxwell-Boltzmann velocities."""
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    length = cfg.box_length_L
    x = rng.uniform(0.0, 2.0 * length, size=cfg.n_molecules)
    v = rng.normal(0.0, cfg.thermal_speed, size=cfg.n_molecules)
    n_b = int(np.count_nonzero(x >= length))
    return GasState(x, v, length, cfg.mass, n_b)


def _write_bits(mem: DemonMemory, bits: np.ndarray, ledger: EntropyLedger, temperature: float):
    """Append bits, wiping the memory whenever a write finds it full."""
    records = mem.records
    erasures = 0
    erased = 0
    pos = 0
    while pos < bits.size:
        room = mem.capacity_bits - records.size
        if room == 0:
            erased += records.size
            erasures += 1
            records = np.zeros(0, dtype=np.uint8)
            room = mem.capacity_bits
        chunk = bits[pos : pos + room]
        records = np.concatenate([records, chunk])
        pos += chunk.size
    new_mem = replace(
        mem, records=records, erasures=mem.erasures + erasures, bits_written=mem.bits_written + bits.size
    )
    total_erased = ledger.bits_erased + erased
    new_ledger = replace(
        ledger,
        bits_erased=total_erased,
        environment_entropy=total_erased * K_B * LN2,
        heat_dissipated=total_erased * K_B * temperature * LN2,
        demon_memory_entropy=records.size * K_B * LN2,
    )
    return new_mem, new_ledger, erasures


def demon_step(
    gas: GasState,
    mem: DemonMemory,
    ledger: EntropyLedger,
    cfg: DemonConfig,
    rng: np.random.Generator,
) -> tuple[GasState, DemonMemory, EntropyLedger, StepEvents]:
    """Advance the gas by one time step and let the demon work the gate."""
    length = gas.box_length_L
    dt = cfg.time_step
    thr = cfg.threshold
    x = gas.positions
    v = gas.velocities.copy()
    in_b = x >= length
    x_new = x + v * dt

    idx_a = np.flatnonzero(~in_b & (x_new >= length))
    idx_b = np.flatnonzero(in_b & (x_new < length))
    # With an infinite threshold every outcome is known in advance: no looks.
    informative = math.isfinite(thr)

    if informative:
        fast_a = np.abs(v[idx_a]) > thr
        meas_a = idx_a
        pass_a = idx_a[fast_a]
    else:
        fast_a = np.zeros(0, dtype=bool)
        meas_a = idx_a[:0]
        pass_a = idx_a[:0]

    # B-side: slow molecules may leave only to restore B's initial population.
    credit = int(np.count_nonzero(in_b)) + pass_a.size - gas.initial_count_b
    slow_b = np.abs(v[idx_b]) <= thr
    if informative and credit > 0 and idx_b.size:
        before = np.cumsum(slow_b) - slow_b
        looked = before < credit
    else:
        looked = np.zeros(idx_b.size, dtype=bool)
    meas_b = idx_b[looked]
    pass_b = idx_b[looked & slow_b]

    blocked = np.ones(x.size, dtype=bool)
    blocked[pass_a] = False
    blocked[pass_b] = False
    arrivals = np.zeros(x.size, dtype=bool)
    arrivals[idx_a] = True
    arrivals[idx_b] = True
    bounce = arrivals & blocked
    x_out = x_new.copy()
    x_out[bounce] = 2.0 * length - x_new[bounce]
    v[bounce] = -v[bounce]
    # a molecule stopped exactly at the gate stays on the A side
    stopped_a = idx_a[blocked[idx_a]]
    x_out[stopped_a] = np.minimum(x_out[stopped_a], np.nextafter(length, 0.0))
    low = x_out < 0.0
    x_out[low] = -x_out[low]
    v[low] = -v[low]
    high = x_out > 2.0 * length
    x_out[high] = 4.0 * length - x_out[high]
    v[high] = -v[high]

    measured = np.concatenate([meas_a, meas_b])
    if cfg.kicks and measured.size:
        signs = rng.integers(0, 2, size=measured.size) * 2 - 1
        v[measured] += signs * (HBAR / length) / gas.mass

    bits = np.concatenate([fast_a.astype(np.uint8), (~slow_b[looked]).astype(np.uint8)])
    new_mem, new_ledger, erasures = _write_bits(mem, bits, ledger, cfg.temperature_K)
    new_gas = replace(
        gas, positions=x_out, velocities=v, gate_open=bool(pass_a.size or pass_b.size)
    )
    new_ledger = replace(new_ledger, gas_entropy=gas_entropy(new_gas) - ledger.reference_gas_entropy)
    events = StepEvents(int(measured.size), int(pass_a.size), int(pass_b.size), erasures)
    return new_gas, new_mem, new_ledger, events


_SERIES = (
    "step",
    "time",
    "count_a",
    "count_b",
    "temperature_a",
    "temperature_b",
    "gas_entropy",
    "demon_memory_entropy",
    "environment_entropy",
    "total_entropy",
    "memory_used_bits",
    "measurements",
    "crossings_ab",
    "crossings_ba",
    "erasures",
)


@dataclass
class RunReport:
    config: DemonConfig
    initial: dict
    series: dict[str, np.ndarray]
    erasure_events: list[dict]
    final_ledger: EntropyLedger
    heisenberg_floor: float
    kinetic_energy: tuple[float, float]  # (initial, final), J

    @property
    def steps(self) -> int:
        return int(self.series["step"].size)

    def total_increments(self) -> np.ndarray:
        """Per-step change of the ledger total, in units of k_B."""
        total = np.concatenate([[0.0], self.series["total_entropy"]])
        return np.diff(total) / K_B

    def second_law_holds(self, tol: float = SECOND_LAW_TOL) -> bool:
        inc = self.total_increments()
        return bool(inc.size == 0 or inc.min() >= -tol)

    def to_dict(self) -> dict:
        led = self.final_ledger
        return {
            "config": self.config.to_dict(),
            "derived": {
                "thermal_speed": self.config.thermal_speed,
                "speed_threshold": self.config.threshold,
                "dt": self.config.time_step,
                "heisenberg_floor": self.heisenberg_floor,
                "kick_velocity": self.heisenberg_floor / self.config.mass,
            },
            "initial": self.initial,
            "final_ledger": {
                "gas_entropy": led.gas_entropy,
                "demon_memory_entropy": led.demon_memory_entropy,
                "environment_entropy": led.environment_entropy,
                "total": led.total,
                "bits_erased": led.bits_erased,
                "heat_dissipated": led.heat_dissipated,
            },
            "kinetic_energy": {"initial": self.kinetic_energy[0], "final": self.kinetic_energy[1]},
            "erasure_events": self.erasure_events,
            "series": {k: v.tolist() for k, v in self.series.items()},
        }


def run(cfg: DemonConfig) -> RunReport:
    """Run ``cfg.steps`` demon steps from a seeded Maxwell-Boltzmann start."""
    rng = np.random.default_rng(cfg.seed)
    gas = init_gas(cfg, rng)
    a0, b0 = gas_chambers(gas)
    mem = DemonMemory(cfg.memory_capacity_bits)
    ledger = EntropyLedger(reference_gas_entropy=a0.entropy + b0.entropy)
    ke0 = gas.kinetic_energy()

    n = cfg.steps
    cols = {k: np.zeros(n) for k in _SERIES}
    erasure_events = []
    dt = cfg.time_step
    for i in range(n):
        env_before = ledger.environment_entropy
        erased_before = ledger.bits_erased
        gas, mem, ledger, ev = demon_step(gas, mem, ledger, cfg, rng)
        a, b = gas_chambers(gas)
        if ev.erasures:
            erasure_events.append(
                {
                    "step": i + 1,
                    "count": ev.erasures,
                    "bits_erased": ledger.bits_erased - erased_before,
                    "environment_jump": ledger.environment_entropy - env_before,
                }
            )
        row = (
            i + 1,
            (i + 1) * dt,
            a.count,
            b.count,
            a.temperature,
            b.temperature,
            ledger.gas_entropy,
            ledger.demon_memory_entropy,
            ledger.environment_entropy,
            ledger.total,
            mem.used_bits,
            ev.measurements,
            ev.crossings_ab,
            ev.crossings_ba,
            ev.erasures,
        )
        for key, val in zip(_SERIES, row):
            cols[key][i] = val
    for key in ("step", "count_a", "count_b", "memory_used_bits", "measurements",
                "crossings_ab", "crossings_ba", "erasures"):
        cols[key] = cols[key].astype(np.int64)
    initial = {
        "count_a": a0.count,
        "count_b": b0.count,
        "temperature_a": a0.temperature,
        "temperature_b": b0.temperature,
        "gas_entropy": a0.entropy + b0.entropy,
    }
    return RunReport(
        config=cfg,
        initial=initial,
        series=cols,
        erasure_events=erasure_events,
        final_ledger=ledger,
        heisenberg_floor=heisenberg_floor(cfg),
        kinetic_energy=(ke0, gas.kinetic_energy()),
    )


def write_csv(report, path) -> None:
    """Temperature and entropy columns, one row per step.

    ``report`` is a :class:`RunReport` or its ``series`` mapping.
    """
    series = report.series if isinstance(report, RunReport) else report
    keys = ["step", "temperature_a", "temperature_b", "gas_entropy",
            "demon_memory_entropy", "environment_entropy", "total_entropy"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(keys)
        for row in zip(*(series[k] for k in keys)):
            w.writerow([int(row[0])] + [f"{float(x):.17g}" for x in row[1:]])

"""
Parameter sweeps behind every figure: detuning spectra, (θ, φ) maps and
dissipation scans.

Rows are laid out row-major over the axes in declared order (the first axis
varies slowest). Each row is one SweepRecord; failing rows keep their axis
values, carry NaN outputs and explain the failure in the `status` column.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from typing import Tuple, Union

import numpy as np
import pandas as pd

from config.settings import Config
from waveguide.closed_form import collective_arrays, degeneracy_coupling, evaluate_regular
from waveguide.errors import ScatteringError, ValidationError
from waveguide.model import PhaseMode, SystemSpec, TwoAtomParams, two_atom_to_system, validate_system
from waveguide.solver import ScatteringProblem, solve

logger = logging.getLogger(__name__)

AXIS_NAMES = ("detuning", "theta", "phi", "kappa", "delta2", "delta3")
PROBABILITY_COLUMNS = ["T", "R", "T_f", "T_b", "loss"]
AMPLITUDE_COLUMNS = [f"{name}_{part}" for name in ("t_r1", "r_l1", "t_r2", "r_l2") for part in ("re", "im")]
COLLECTIVE_COLUMNS = [
    "lambda_plus_re", "lambda_plus_im", "lambda_minus_re", "lambda_minus_im",
    "gamma1_plus", "gamma1_minus", "gamma2_plus", "gamma2_minus", "j1", "j2", "j_sigma",
]
OUTPUT_NAMES = ("T", "R", "T_f", "T_b", "loss", "amplitudes", "collective")
DEFAULT_OUTPUTS = ("T", "R", "T_f", "T_b", "loss")

# δ₂ y δ₃ desintonizan los emisores 1 y 2 (Q2, Q3) respecto al emisor 0 (Q1)
DELTA_EMITTERS = {"delta2": 1, "delta3": 2}


class Engine(str, Enum):
    CLOSED_FORM = "closed_form"
    REAL_SPACE = "real_space"


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int = Config.GRID_POINTS

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepSpec:
    engine: Engine
    base: Union[TwoAtomParams, SystemSpec]
    axes: Tuple[Axis, ...]
    outputs: Tuple[str, ...] = DEFAULT_OUTPUTS
    lock_degeneracy: bool = False
    carrier: float = Config.ORACLE_CARRIER
    phase_mode: PhaseMode = PhaseMode.FIXED_PHASE
    workers: int = Config.SWEEP_WORKERS
    name: str = "custom"
    caption: str = ""

    def __post_init__(self):
        object.__setattr__(self, "engine", Engine(self.engine))
        object.__setattr__(self, "phase_mode", PhaseMode(self.phase_mode))
        object.__setattr__(self, "axes", tuple(self.axes))
        object.__setattr__(self, "outputs", tuple(self.outputs))

    @property
    def two_atom(self) -> bool:
        return isinstance(self.base, TwoAtomParams)

    def validate(self) -> "SweepSpec":
        issues = []
        names = [axis.name for axis in self.axes]
        if not 1 <= len(self.axes) <= 2:
            issues.append(f"a sweep needs 1 or 2 axes, got {len(self.axes)}")
        if len(set(names)) != len(names):
            issues.append(f"axes must be disjoint, got {names}")
        for axis in self.axes:
            if axis.name not in AXIS_NAMES:
                issues.append(f"unknown axis '{axis.name}'")
            if axis.count < 2:
                issues.append(f"axis '{axis.name}' needs at least 2 points")
        for output in self.outputs:
            if output not in OUTPUT_NAMES:
                issues.append(f"unknown output '{output}'")

        if self.two_atom:
            for name in names:
                if name in DELTA_EMITTERS:
                    issues.append(f"axis '{name}' needs a SystemSpec base")
        else:
            if self.engine == Engine.CLOSED_FORM:
                issues.append("the closed-form engine needs a TwoAtomParams base")
            if self.lock_degeneracy:
                issues.append("lock_degeneracy needs a TwoAtomParams base")
            if "collective" in self.outputs:
                issues.append("collective outputs need a TwoAtomParams base")
            for name in names:
                if name in ("theta", "phi"):
                    issues.append(f"axis '{name}' needs a TwoAtomParams base")
                if name in DELTA_EMITTERS and DELTA_EMITTERS[name] >= len(self.base.emitters):
                    issues.append(f"axis '{name}' needs at least {DELTA_EMITTERS[name] + 1} emitters")
            if len(self.base.waveguides) != 2:
                issues.append("sweeps report two-waveguide ports; the system needs exactly 2 waveguides")
            try:
                validate_system(self.base)
            except ValidationError as e:
                issues.extend(e.issues)
        if issues:
            raise ValidationError(issues)
        return self

    def to_dict(self) -> dict:
        if self.two_atom:
            base = {"two_atom": vars(self.base).copy()}
        else:
            base = {"system": self.base.to_dict()}
        return {
            "name": self.name,
            "caption": self.caption,
            "engine": self.engine.value,
            **base,
            "axes": [vars(axis).copy() for axis in self.axes],
            "outputs": list(self.outputs),
            "lock_degeneracy": self.lock_degeneracy,
            "carrier": self.carrier,
            "phase_mode": self.phase_mode.value,
            "workers": self.workers,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SweepSpec":
        if "two_atom" in data:
            base = TwoAtomParams(**data["two_atom"])
        elif "system" in data:
            base = SystemSpec.from_dict(data["system"])
        else:
            raise ValidationError(["sweep config needs a 'two_atom' or 'system' base"])
        return cls(
            engine=data.get("engine", Engine.CLOSED_FORM.value),
            base=base,
            axes=[Axis(**axis) for axis in data.get("axes", [])],
            outputs=data.get("outputs", DEFAULT_OUTPUTS),
            lock_degeneracy=data.get("lock_degeneracy", False),
            carrier=data.get("carrier", Config.ORACLE_CARRIER),
            phase_mode=data.get("phase_mode", PhaseMode.FIXED_PHASE.value),
            workers=data.get("workers", Config.SWEEP_WORKERS),
            name=data.get("name", "custom"),
            caption=data.get("caption", ""),
        )


def _grid(spec: SweepSpec) -> pd.DataFrame:
    mesh = np.meshgrid(*(axis.values() for axis in spec.axes), indexing="ij")
    return pd.DataFrame({axis.name: values.ravel() for axis, values in zip(spec.axes, mesh)})


def _parameter_frame(spec: SweepSpec, grid: pd.DataFrame) -> pd.DataFrame:
    """Per-row parameters with the base filled in where no axis overrides it."""
    rows = len(grid)
    if spec.two_atom:
        base = spec.base
        frame = pd.DataFrame({
            "theta": grid["theta"] if "theta" in grid else np.full(rows, base.theta),
            "phi": grid["phi"] if "phi" in grid else np.full(rows, base.phi),
            "j": np.full(rows, base.j),
            "delta": grid["detuning"] if "detuning" in grid else np.full(rows, base.detuning),
            "kappa": grid["kappa"] if "kappa" in grid else np.full(rows, base.kappa),
        })
        if spec.lock_degeneracy:
            frame["j"] = degeneracy_coupling(frame["theta"].to_numpy(), frame["phi"].to_numpy(), base.gamma)
        return frame

    emitters = spec.base.emitters
    uniform_kappa = emitters[0].dissipation if emitters else 0.0
    frame = pd.DataFrame({
        "delta": grid["detuning"] if "detuning" in grid else np.zeros(rows),
        "kappa": grid["kappa"] if "kappa" in grid else np.full(rows, uniform_kappa),
    })
    for name, emitter_index in DELTA_EMITTERS.items():
        if emitter_index < len(emitters):
            frame[name] = grid[name] if name in grid else np.full(rows, emitters[emitter_index].frequency)
    return frame


def _closed_form_rows(spec: SweepSpec, params: pd.DataFrame):
    t_r1, r_l1, t_r2, r_l2, _, pole = evaluate_regular(
        params["theta"].to_numpy(), params["phi"].to_numpy(), spec.base.gamma,
        params["j"].to_numpy(), params["kappa"].to_numpy(), params["delta"].to_numpy(),
    )
    amplitudes = np.stack([t_r1, r_l1, t_r2, r_l2], axis=1)
    status = np.where(pole, "error: near pole", "ok").astype(object)
    amplitudes[pole] = np.nan
    return amplitudes, status


def _row_system(spec: SweepSpec, row: pd.Series) -> SystemSpec:
    if spec.two_atom:
        p = spec.base.with_(theta=row["theta"], phi=row["phi"], j=row["j"], kappa=row["kappa"])
        return two_atom_to_system(p, carrier=spec.carrier, phase_mode=spec.phase_mode)

    swept = {axis.name for axis in spec.axes}
    emitters = []
    for index, emitter in enumerate(spec.base.emitters):
        changes = {}
        if "kappa" in swept:
            # κ uniforme en todos los emisores
            changes["dissipation"] = float(row["kappa"])
        for name, emitter_index in DELTA_EMITTERS.items():
            if index == emitter_index and name in swept:
                changes["frequency"] = float(row[name])
        emitters.append(replace(emitter, **changes))
    return replace(spec.base, emitters=tuple(emitters))


def _solve_row(spec: SweepSpec, row: pd.Series):
    try:
        system = _row_system(spec, row)
        result = solve(ScatteringProblem(system, photon_energy=float(row["delta"])))
        amplitudes = result.amplitudes(0, 1)
        return [amplitudes.t_r1, amplitudes.r_l1, amplitudes.t_r2, amplitudes.r_l2], "ok"
    except ScatteringError as e:
        return [np.nan] * 4, f"error: {e}"


def _real_space_rows(spec: SweepSpec, params: pd.DataFrame):
    rows = [row for _, row in params.iterrows()]
    # map conserva el orden de las filas sin importar el orden de ejecución
    with ThreadPoolExecutor(max_workers=max(1, spec.workers)) as pool:
        results = list(pool.map(lambda row: _solve_row(spec, row), rows))
    amplitudes = np.array([values for values, _ in results], dtype=complex).reshape(len(rows), 4)
    status = np.array([state for _, state in results], dtype=object)
    return amplitudes, status


def run_sweep(spec: SweepSpec) -> pd.DataFrame:
    """
    Evaluate the sweep and return one row per grid point.

    Columns: the parameter columns (theta, phi, j, delta, kappa for two-atom
    bases; delta, kappa, delta2, delta3 for system bases), the requested
    outputs in canonical order and a final `status` column.
    """
    spec.validate()
    grid = _grid(spec)
    params = _parameter_frame(spec, grid)
    logger.info(f"Sweep '{spec.name}': {len(params)} rows with {spec.engine.value} engine")

    if spec.engine == Engine.CLOSED_FORM:
        amplitudes, status = _closed_form_rows(spec, params)
    else:
        amplitudes, status = _real_space_rows(spec, params)

    frame = params.copy()
    probabilities = np.abs(amplitudes) ** 2
    if any(name in spec.outputs for name in PROBABILITY_COLUMNS):
        total = probabilities.sum(axis=1)
        values = {"T": probabilities[:, 0], "R": probabilities[:, 1], "T_f": probabilities[:, 2],
                  "T_b": probabilities[:, 3], "loss": 1.0 - total}
        for name in PROBABILITY_COLUMNS:
            if name in spec.outputs:
                frame[name] = values[name]

    if "amplitudes" in spec.outputs:
        parts = np.stack([amplitudes.real, amplitudes.imag], axis=2).reshape(len(frame), 8)
        for i, name in enumerate(AMPLITUDE_COLUMNS):
            frame[name] = parts[:, i]

    if "collective" in spec.outputs:
        lp, lm, g1p, g1m, g2p, g2m, j1, j2, js = collective_arrays(
            params["theta"].to_numpy(), params["phi"].to_numpy(), spec.base.gamma, params["j"].to_numpy())
        collective = [lp.real, lp.imag, lm.real, lm.imag, g1p, g1m, g2p, g2m, j1, j2, js]
        for name, values in zip(COLLECTIVE_COLUMNS, collective):
            frame[name] = values

    frame["status"] = status
    errors = int((frame["status"] != "ok").sum())
    if errors:
        logger.warning(f"Sweep '{spec.name}': {errors} rows failed")
    logger.info(f"Sweep '{spec.name}' finished")
    return frame


def summarize(frame: pd.DataFrame) -> dict:
    """Row count, error count and min/max of every probability column."""
    summary = {"rows": len(frame), "errors": int((frame["status"] != "ok").sum())}
    for name in PROBABILITY_COLUMNS:
        if name in frame:
            summary[name] = (float(frame[name].min()), float(frame[name].max()))
    return summary


def format_summary(summary: dict) -> str:
    parts = [f"rows={summary['rows']}", f"errors={summary['errors']}"]
    for name in PROBABILITY_COLUMNS:
        if name in summary:
            low, high = summary[name]
            parts.append(f"{name}=[{low:.6g}, {high:.6g}]")
    return " ".join(parts)

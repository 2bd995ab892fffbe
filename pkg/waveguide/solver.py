"""
Real-space boundary-condition solver for a single photon.

Every waveguide is cut at its distinct coupling positions into segments. On
segment s the field is a_s·e^{ikx} (right-moving) plus b_s·e^{−ikx}
(left-moving). A delta coupling at junction x_j makes the coefficients jump:

    −i v_g (a_{j+1} − a_j) e^{ikx_j} + Σ V·C_e = 0
    +i v_g (b_{j+1} − b_j) e^{−ikx_j} + Σ V·C_e = 0

and each emitter obeys

    (E − ω_e + iκ_e/2)·C_e = Σ_legs V·φ(x_leg) + Σ J·C_e'

with the field at a leg taken as the average of both sides (H(0) = 1/2).
Only the specified input port carries an incoming wave of unit amplitude.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Tuple

import numpy as np

from config.settings import Config
from waveguide.errors import SolverDegenerateError, ValidationError
from waveguide.model import (
    FrequencyUnits,
    PhaseMode,
    ScatteringAmplitudes,
    SystemSpec,
    TwoAtomParams,
    two_atom_to_system,
    validate_system,
)

logger = logging.getLogger(__name__)


class Direction(str, Enum):
    RIGHTWARD = "rightward"
    LEFTWARD = "leftward"


@dataclass(frozen=True)
class ScatteringProblem:
    system: SystemSpec
    photon_energy: float = 0.0
    input_waveguide: int = 0
    input_direction: Direction = Direction.RIGHTWARD

    def wavenumber(self, group_velocity: float) -> float:
        """Propagation wavenumber used in the e^{±ikx} phase factors."""
        system = self.system
        if system.phase_mode == PhaseMode.FIXED_PHASE:
            return system.reference_frequency / group_velocity
        if system.frequency_units == FrequencyUnits.DETUNING:
            return (system.reference_frequency + self.photon_energy) / group_velocity
        return self.photon_energy / group_velocity


@dataclass
class Junction:
    position: float
    # (emitter_id, strength) de cada pata en este punto
    attachments: List[Tuple[int, float]] = field(default_factory=list)


@dataclass
class LinearSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    unknowns: List[tuple]
    junctions: Dict[int, List[Junction]]
    known: Dict[tuple, complex]
    wavenumbers: Dict[int, float]

    @property
    def size(self) -> int:
        return len(self.unknowns)


@dataclass(frozen=True)
class SolveResult:
    energy: float
    outgoing: Dict[Tuple[int, Direction], complex]
    emitter_amplitudes: Dict[int, complex]
    segment_amplitudes: Dict[int, List[Tuple[complex, complex]]]
    residual: float = 0.0
    group_velocities: Dict[int, float] = field(default_factory=dict)
    input_waveguide: int = 0

    def port_fluxes(self) -> Dict[Tuple[int, Direction], float]:
        """Outgoing flux of every port relative to the incoming one: v_g,out·|a|² / v_g,in."""
        v_in = self.group_velocities.get(self.input_waveguide, 1.0)
        return {
            port: self.group_velocities.get(port[0], 1.0) * abs(a) ** 2 / v_in
            for port, a in self.outgoing.items()
        }

    def outgoing_probability(self) -> float:
        """Total outgoing flux probability; 1 for a lossless system."""
        return float(sum(self.port_fluxes().values()))

    def amplitudes(self, input_waveguide: int = 0, output_waveguide: int = 1) -> ScatteringAmplitudes:
        """Port amplitudes for a rightward photon entering input_waveguide."""
        return ScatteringAmplitudes(
            t_r1=self.outgoing[(input_waveguide, Direction.RIGHTWARD)],
            r_l1=self.outgoing[(input_waveguide, Direction.LEFTWARD)],
            t_r2=self.outgoing[(output_waveguide, Direction.RIGHTWARD)],
            r_l2=self.outgoing[(output_waveguide, Direction.LEFTWARD)],
        )

    def to_dict(self) -> dict:
        def pair(z):
            return [z.real, z.imag]

        fluxes = self.port_fluxes()
        return {
            "energy": self.energy,
            "outgoing": [
                {"waveguide": w, "direction": d.value, "amplitude": pair(a), "flux": fluxes[(w, d)]}
                for (w, d), a in sorted(self.outgoing.items(), key=lambda item: (item[0][0], item[0][1].value))
            ],
            "emitter_amplitudes": {str(e): pair(c) for e, c in sorted(self.emitter_amplitudes.items())},
            "segment_amplitudes": {
                str(w): [[pair(a), pair(b)] for a, b in segments]
                for w, segments in sorted(self.segment_amplitudes.items())
            },
            "residual": self.residual,
        }


def junction_layout(system: SystemSpec) -> Dict[int, List[Junction]]:
    """Sorted junctions per waveguide; co-located legs share one junction."""
    layout = {}
    for waveguide in system.waveguides:
        by_position = {}
        for c in system.couplings:
            if c.waveguide_id == waveguide.id:
                by_position.setdefault(c.position, Junction(c.position)).attachments.append(
                    (c.emitter_id, c.strength))
        layout[waveguide.id] = [by_position[x] for x in sorted(by_position)]
    return layout


def build_linear_system(problem: ScatteringProblem) -> LinearSystem:
    system = validate_system(problem.system)
    if problem.input_waveguide not in {w.id for w in system.waveguides}:
        raise ValidationError([f"input waveguide {problem.input_waveguide} does not exist"])

    junctions = junction_layout(system)
    wavenumbers = {}
    for waveguide in system.waveguides:
        k = problem.wavenumber(waveguide.group_velocity)
        if not k > 0:
            raise ValidationError([f"waveguide {waveguide.id}: photon wavevector must be positive, got {k}"])
        wavenumbers[waveguide.id] = k

    # Coeficientes conocidos: sólo el puerto de entrada trae amplitud 1
    known = {}
    unknowns = []
    for waveguide in system.waveguides:
        w = waveguide.id
        n = len(junctions[w])
        rightward_in = problem.input_direction == Direction.RIGHTWARD and w == problem.input_waveguide
        leftward_in = problem.input_direction == Direction.LEFTWARD and w == problem.input_waveguide
        known[("a", w, 0)] = 1.0 + 0j if rightward_in else 0j
        known[("b", w, n)] = 1.0 + 0j if leftward_in else 0j
        unknowns.extend(("a", w, s) for s in range(1, n + 1))
        unknowns.extend(("b", w, s) for s in range(0, n))
    unknowns.extend(("c", e.id) for e in system.emitters)

    index = {key: i for i, key in enumerate(unknowns)}
    size = len(unknowns)
    matrix = np.zeros((size, size), dtype=complex)
    rhs = np.zeros(size, dtype=complex)

    def add(row, key, value):
        if key in index:
            matrix[row, index[key]] += value
        else:
            rhs[row] -= value * known[key]

    row = 0
    for waveguide in system.waveguides:
        w, v_g, k = waveguide.id, waveguide.group_velocity, wavenumbers[waveguide.id]
        for j, junction in enumerate(junctions[w]):
            forward = np.exp(1j * k * junction.position)
            backward = np.exp(-1j * k * junction.position)
            # salto del modo que va a la derecha
            add(row, ("a", w, j + 1), -1j * v_g * forward)
            add(row, ("a", w, j), 1j * v_g * forward)
            for emitter_id, strength in junction.attachments:
                add(row, ("c", emitter_id), strength)
            row += 1
            # salto del modo que va a la izquierda
            add(row, ("b", w, j + 1), 1j * v_g * backward)
            add(row, ("b", w, j), -1j * v_g * backward)
            for emitter_id, strength in junction.attachments:
                add(row, ("c", emitter_id), strength)
            row += 1

    # Ecuaciones de los emisores
    legs = {e.id: [] for e in system.emitters}
    for waveguide in system.waveguides:
        for j, junction in enumerate(junctions[waveguide.id]):
            for emitter_id, strength in junction.attachments:
                legs[emitter_id].append((waveguide.id, j, junction.position, strength))

    for emitter in system.emitters:
        e = emitter.id
        add(row, ("c", e), problem.photon_energy - emitter.frequency + 0.5j * emitter.dissipation)
        for w, j, position, strength in legs[e]:
            forward = np.exp(1j * wavenumbers[w] * position)
            backward = np.exp(-1j * wavenumbers[w] * position)
            for s in (j, j + 1):
                add(row, ("a", w, s), -0.5 * strength * forward)
                add(row, ("b", w, s), -0.5 * strength * backward)
        for d in system.direct:
            if e in (d.emitter_a, d.emitter_b):
                other = d.emitter_b if e == d.emitter_a else d.emitter_a
                add(row, ("c", other), -d.strength)
        row += 1

    return LinearSystem(matrix, rhs, unknowns, junctions, known, wavenumbers)


def solve(problem: ScatteringProblem, cond_limit: float = Config.COND_LIMIT,
          residual_tol: float = Config.RESIDUAL_TOL) -> SolveResult:
    linear = build_linear_system(problem)
    values = dict(linear.known)
    residual = 0.0

    if linear.size:
        condition = np.linalg.cond(linear.matrix)
        if not condition <= cond_limit:
            logger.warning(f"Degenerate scattering system at E={problem.photon_energy} (cond={condition:.3e})")
            raise SolverDegenerateError(problem.photon_energy, float(condition))

        solution = np.linalg.solve(linear.matrix, linear.rhs)
        residual = float(np.max(np.abs(linear.matrix @ solution - linear.rhs)))
        scale = float(np.max(np.abs(linear.rhs)))
        if residual > residual_tol * (scale if scale > 0 else 1.0):
            logger.warning(f"Residual {residual:.3e} above tolerance at E={problem.photon_energy}")
            raise SolverDegenerateError(problem.photon_energy, float(condition))
        values.update(zip(linear.unknowns, solution))

    outgoing = {}
    segments = {}
    for waveguide in problem.system.waveguides:
        w = waveguide.id
        n = len(linear.junctions[w])
        segments[w] = [(complex(values[("a", w, s)]), complex(values[("b", w, s)])) for s in range(n + 1)]
        outgoing[(w, Direction.RIGHTWARD)] = complex(values[("a", w, n)])
        outgoing[(w, Direction.LEFTWARD)] = complex(values[("b", w, 0)])

    return SolveResult(
        energy=problem.photon_energy,
        outgoing=outgoing,
        emitter_amplitudes={e.id: complex(values[("c", e.id)]) for e in problem.system.emitters},
        segment_amplitudes=segments,
        residual=residual,
        group_velocities={w.id: w.group_velocity for w in problem.system.waveguides},
        input_waveguide=problem.input_waveguide,
    )


def solve_two_atom(p: TwoAtomParams, carrier: float = Config.ORACLE_CARRIER,
                   phase_mode: PhaseMode = PhaseMode.FIXED_PHASE) -> ScatteringAmplitudes:
    """Solve the two-giant-atom instance of p at detuning p.detuning."""
    system = two_atom_to_system(p, carrier=carrier, phase_mode=phase_mode)
    return solve(ScatteringProblem(system, photon_energy=p.detuning)).amplitudes(0, 1)

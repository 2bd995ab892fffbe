"""
Domain types shared by the closed-form engine, the real-space solver and the sweeps.

A `SystemSpec` describes any number of two-level emitters attached through
point couplings to any number of bidirectional waveguides. `TwoAtomParams` is
the reduced (θ, φ, γ, J, κ, Δ) parameterisation of two giant atoms sharing two
waveguides: atom A touches both waveguides at the origin, atom B touches W₁ at
x₁ and W₂ at x₂.
"""

import json
import math
from dataclasses import asdict, dataclass, replace
from enum import Enum
from typing import Optional, Tuple

from config.settings import Config
from waveguide.errors import ValidationError


class PhaseMode(str, Enum):
    # FixedPhase congela k en la portadora; Dispersive usa k(E)
    FIXED_PHASE = "fixed_phase"
    DISPERSIVE = "dispersive"


class FrequencyUnits(str, Enum):
    ABSOLUTE = "absolute"
    DETUNING = "detuning"


@dataclass(frozen=True)
class WaveguideSpec:
    id: int
    group_velocity: float = 1.0


@dataclass(frozen=True)
class EmitterSpec:
    id: int
    frequency: float
    dissipation: float = 0.0


@dataclass(frozen=True)
class CouplingPoint:
    emitter_id: int
    waveguide_id: int
    position: float
    strength: float


@dataclass(frozen=True)
class DirectCoupling:
    emitter_a: int
    emitter_b: int
    strength: float


@dataclass(frozen=True)
class SystemSpec:
    waveguides: Tuple[WaveguideSpec, ...]
    emitters: Tuple[EmitterSpec, ...]
    couplings: Tuple[CouplingPoint, ...]
    direct: Tuple[DirectCoupling, ...] = ()
    phase_mode: PhaseMode = PhaseMode.FIXED_PHASE
    reference_frequency: float = Config.CARRIER
    frequency_units: FrequencyUnits = FrequencyUnits.DETUNING

    def __post_init__(self):
        # Acepta listas (p.ej. desde JSON) pero guarda tuplas inmutables
        for name in ("waveguides", "emitters", "couplings", "direct"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        object.__setattr__(self, "phase_mode", PhaseMode(self.phase_mode))
        object.__setattr__(self, "frequency_units", FrequencyUnits(self.frequency_units))

    def waveguide(self, waveguide_id: int) -> WaveguideSpec:
        return next(w for w in self.waveguides if w.id == waveguide_id)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["phase_mode"] = self.phase_mode.value
        data["frequency_units"] = self.frequency_units.value
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "SystemSpec":
        return cls(
            waveguides=[WaveguideSpec(**w) for w in data.get("waveguides", [])],
            emitters=[EmitterSpec(**e) for e in data.get("emitters", [])],
            couplings=[CouplingPoint(**c) for c in data.get("couplings", [])],
            direct=[DirectCoupling(**d) for d in data.get("direct", [])],
            phase_mode=data.get("phase_mode", PhaseMode.FIXED_PHASE.value),
            reference_frequency=float(data.get("reference_frequency", Config.CARRIER)),
            frequency_units=data.get("frequency_units", FrequencyUnits.DETUNING.value),
        )

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "SystemSpec":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class TwoAtomParams:
    theta: float
    phi: float
    gamma: float = 1.0
    j: float = 0.0
    kappa: float = 0.0
    detuning: float = 0.0

    def __post_init__(self):
        issues = []
        if not self.gamma > 0:
            issues.append("gamma must be positive")
        if not self.kappa >= 0:
            issues.append("kappa must be non-negative")
        for name in ("theta", "phi", "j", "detuning"):
            if not math.isfinite(getattr(self, name)):
                issues.append(f"{name} must be finite")
        if issues:
            raise ValidationError(issues)

    def with_(self, **changes) -> "TwoAtomParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class ScatteringAmplitudes:
    t_r1: complex
    r_l1: complex
    t_r2: complex
    r_l2: complex

    def probabilities(self) -> "ScatteringProbabilities":
        return ScatteringProbabilities.from_amplitudes(self)

    def to_dict(self) -> dict:
        # complejos como pares [re, im]
        return {name: [complex(value).real, complex(value).imag] for name, value in asdict(self).items()}


@dataclass(frozen=True)
class ScatteringProbabilities:
    """T = |t_R1|², R = |r_L1|², T_f = |t_R2|², T_b = |r_L2|² and the non-waveguide loss."""
    t: float
    r: float
    t_f: float
    t_b: float
    loss: float

    @classmethod
    def from_amplitudes(cls, amplitudes: ScatteringAmplitudes) -> "ScatteringProbabilities":
        t = abs(amplitudes.t_r1) ** 2
        r = abs(amplitudes.r_l1) ** 2
        t_f = abs(amplitudes.t_r2) ** 2
        t_b = abs(amplitudes.r_l2) ** 2
        return cls(t=t, r=r, t_f=t_f, t_b=t_b, loss=1.0 - (t + r + t_f + t_b))

    def to_dict(self) -> dict:
        return {"T": self.t, "R": self.r, "T_f": self.t_f, "T_b": self.t_b, "loss": self.loss}


@dataclass(frozen=True)
class CollectiveParams:
    lambda_plus: complex
    lambda_minus: complex
    gamma1_plus: float
    gamma1_minus: float
    gamma2_plus: float
    gamma2_minus: float
    j1: float
    j2: float
    j_sigma: float

    def to_dict(self) -> dict:
        data = asdict(self)
        data["lambda_plus"] = [self.lambda_plus.real, self.lambda_plus.imag]
        data["lambda_minus"] = [self.lambda_minus.real, self.lambda_minus.imag]
        return data


def validate_system(spec: SystemSpec) -> SystemSpec:
    """
    Check every type invariant of a SystemSpec.

    Returns the system unchanged when valid, otherwise raises ValidationError
    listing all violations found (not only the first one).
    """
    issues = []

    waveguide_ids = [w.id for w in spec.waveguides]
    if sorted(waveguide_ids) != list(range(len(waveguide_ids))):
        issues.append(f"waveguide ids must be unique and contiguous from 0, got {waveguide_ids}")
    for w in spec.waveguides:
        if not w.group_velocity > 0:
            issues.append(f"waveguide {w.id}: group velocity must be positive, got {w.group_velocity}")

    emitter_ids = [e.id for e in spec.emitters]
    if len(set(emitter_ids)) != len(emitter_ids):
        issues.append(f"duplicate emitter ids: {emitter_ids}")
    for e in spec.emitters:
        if not e.dissipation >= 0:
            issues.append(f"emitter {e.id}: negative dissipation {e.dissipation}")
        if not math.isfinite(e.frequency):
            issues.append(f"emitter {e.id}: frequency must be finite")

    known_emitters = set(emitter_ids)
    known_waveguides = set(waveguide_ids)
    for index, c in enumerate(spec.couplings):
        if c.emitter_id not in known_emitters:
            issues.append(f"coupling {index}: dangling emitter id {c.emitter_id}")
        if c.waveguide_id not in known_waveguides:
            issues.append(f"coupling {index}: dangling waveguide id {c.waveguide_id}")
        if not c.strength >= 0:
            issues.append(f"coupling {index}: negative strength {c.strength}")
        if not math.isfinite(c.position):
            issues.append(f"coupling {index}: position must be finite")

    seen_pairs = set()
    for index, d in enumerate(spec.direct):
        if d.emitter_a == d.emitter_b:
            issues.append(f"direct coupling {index}: emitter {d.emitter_a} coupled to itself")
        for emitter_id in (d.emitter_a, d.emitter_b):
            if emitter_id not in known_emitters:
                issues.append(f"direct coupling {index}: dangling emitter id {emitter_id}")
        pair = frozenset((d.emitter_a, d.emitter_b))
        if pair in seen_pairs:
            issues.append(f"direct coupling {index}: duplicate pair {tuple(sorted(pair))}")
        seen_pairs.add(pair)

    if not spec.reference_frequency > 0:
        issues.append(f"reference frequency must be positive, got {spec.reference_frequency}")

    if issues:
        raise ValidationError(issues)
    return spec


def two_atom_to_system(p: TwoAtomParams, carrier: float = Config.CARRIER,
                       group_velocity: float = Config.GROUP_VELOCITY,
                       phase_mode: PhaseMode = PhaseMode.FIXED_PHASE) -> SystemSpec:
    """
    Build the two-giant-atom system from reduced parameters.

    θ and φ are read at the carrier: x₁ = θ·v_g/carrier, x₂ = φ·v_g/carrier.
    Emitters are stored as zero detuning from the carrier, so E − ω is exactly
    the photon detuning Δ.
    """
    if not carrier > 0:
        raise ValidationError([f"carrier must be positive, got {carrier}"])

    x1 = p.theta * group_velocity / carrier
    x2 = p.phi * group_velocity / carrier
    v = math.sqrt(p.gamma * group_velocity)

    return SystemSpec(
        waveguides=(WaveguideSpec(0, group_velocity), WaveguideSpec(1, group_velocity)),
        emitters=(EmitterSpec(0, 0.0, p.kappa), EmitterSpec(1, 0.0, p.kappa)),
        couplings=(
            CouplingPoint(emitter_id=0, waveguide_id=0, position=0.0, strength=v),
            CouplingPoint(emitter_id=0, waveguide_id=1, position=0.0, strength=v),
            CouplingPoint(emitter_id=1, waveguide_id=0, position=x1, strength=v),
            CouplingPoint(emitter_id=1, waveguide_id=1, position=x2, strength=v),
        ),
        direct=(DirectCoupling(0, 1, p.j),),
        phase_mode=phase_mode,
        reference_frequency=carrier,
        frequency_units=FrequencyUnits.DETUNING,
    )


def system_to_two_atom(spec: SystemSpec, detuning: float = 0.0) -> TwoAtomParams:
    """
    Recover (θ, φ, γ, J, κ) from a two-giant-atom SystemSpec.

    The system must have the layout produced by two_atom_to_system: emitter 0
    at the origin of both waveguides, emitter 1 with one leg per waveguide,
    equal strengths, equal dissipations and a shared group velocity.
    """
    validate_system(spec)
    issues = []
    if len(spec.waveguides) != 2 or len(spec.emitters) != 2 or len(spec.couplings) != 4:
        raise ValidationError(["expected 2 waveguides, 2 emitters and 4 coupling points"])

    a_id, b_id = sorted(e.id for e in spec.emitters)
    legs_a = {c.waveguide_id: c for c in spec.couplings if c.emitter_id == a_id}
    legs_b = {c.waveguide_id: c for c in spec.couplings if c.emitter_id == b_id}
    if set(legs_a) != {0, 1} or set(legs_b) != {0, 1}:
        issues.append("each emitter needs exactly one leg on each waveguide")
    elif any(c.position != 0.0 for c in legs_a.values()):
        issues.append("emitter A must sit at the origin of both waveguides")

    strengths = {c.strength for c in spec.couplings}
    if len(strengths) != 1:
        issues.append("closed-form parameters require equal coupling strengths")
    velocities = {w.group_velocity for w in spec.waveguides}
    if len(velocities) != 1:
        issues.append("closed-form parameters require equal group velocities")
    dissipations = {e.dissipation for e in spec.emitters}
    if len(dissipations) != 1:
        issues.append("closed-form parameters require equal dissipations")
    frequencies = {e.frequency for e in spec.emitters}
    if len(frequencies) != 1:
        issues.append("closed-form parameters require resonant emitters")
    if issues:
        raise ValidationError(issues)

    v_g = velocities.pop()
    k0 = spec.reference_frequency / v_g
    j = next((d.strength for d in spec.direct), 0.0)
    return TwoAtomParams(
        theta=k0 * legs_b[0].position,
        phi=k0 * legs_b[1].position,
        gamma=strengths.pop() ** 2 / v_g,
        j=j,
        kappa=dissipations.pop(),
        detuning=detuning,
    )

"""
Named systems and sweeps that regenerate each figure's data.

Three-qubit router layout (d = λ/4 at the carrier, Q1 fixed, Q2/Q3 tunable):

    W₁:  Q1 @ 0    Q2,Q3 @ d
    W₂:  Q1 @ 0    Q3 @ d      Q2 @ 3d

Q1–Q3 form the forward pair (θ = φ = π/2, cancelled by J = −2γ) and Q1–Q2 the
backward pair (θ = π/2, φ = 3π/2, no direct coupling needed). Q2–Q3 see no
net waveguide-mediated interaction and the coupler between them is taken as
an ideal cancellation (J = 0). Detuning one tunable qubit by ~50γ leaves the
other pair to route the photon.
"""

import math

from config.settings import Config
from waveguide.closed_form import degeneracy_coupling
from waveguide.errors import UnknownPresetError, ValidationError
from waveguide.model import (
    CouplingPoint,
    DirectCoupling,
    EmitterSpec,
    FrequencyUnits,
    PhaseMode,
    SystemSpec,
    TwoAtomParams,
    WaveguideSpec,
)
from waveguide.sweep import Axis, Engine, SweepSpec

PRESETS = {
    "fig2": "T, R, T_f, T_b over (θ, φ) ∈ [0, 2π]² with J = −γ(sinθ + sinφ), Δ = 0",
    "fig3a": "spectrum at θ = φ = π (|+⟩ dark, equal four-way split)",
    "fig3b": "spectrum at θ = π, φ = 2π (no transfer to W₂)",
    "fig4a": "spectrum at θ = φ = π/8, J_Σ = 0",
    "fig4b": "spectrum at θ = φ = π/4, J_Σ = 0",
    "fig4c": "spectrum at θ = φ = π/2, J_Σ = 0 (forward channel drop)",
    "fig4d": "spectrum at θ = 2π − φ = π/8",
    "fig4e": "spectrum at θ = 2π − φ = π/4",
    "fig4f": "spectrum at θ = 2π − φ = π/2 (backward transfer)",
    "fig5b": "three-qubit router, δ₂ = 50γ, δ₃ = 0, κ = 0.1γ (forward)",
    "fig5c": "three-qubit router, δ₂ = 0, δ₃ = 50γ, κ = 0.1γ (backward)",
    "fig5d": "three-qubit router vs κ/γ at Δ = 0, δ₂ = 50γ",
}

SPECTRUM_PHASES = {
    "fig3a": (math.pi, math.pi),
    "fig3b": (math.pi, 2 * math.pi),
    "fig4a": (math.pi / 8, math.pi / 8),
    "fig4b": (math.pi / 4, math.pi / 4),
    "fig4c": (math.pi / 2, math.pi / 2),
    "fig4d": (math.pi / 8, 2 * math.pi - math.pi / 8),
    "fig4e": (math.pi / 4, 2 * math.pi - math.pi / 4),
    "fig4f": (math.pi / 2, 2 * math.pi - math.pi / 2),
}


def fig5_preset(delta2: float, delta3: float, kappa: float = Config.FIG5_KAPPA,
                gamma: float = Config.GAMMA, carrier: float = Config.CARRIER,
                group_velocity: float = Config.GROUP_VELOCITY,
                phase_mode: PhaseMode = PhaseMode.FIXED_PHASE) -> SystemSpec:
    """Three-qubit directional router; κ is applied to all three qubits."""
    issues = []
    if not gamma > 0:
        issues.append("gamma must be positive")
    if not kappa >= 0:
        issues.append("kappa must be non-negative")
    if not carrier > 0:
        issues.append("carrier must be positive")
    if issues:
        raise ValidationError(issues)

    d = (math.pi / 2) * group_velocity / carrier  # λ/4
    v = math.sqrt(gamma * group_velocity)

    return SystemSpec(
        waveguides=(WaveguideSpec(0, group_velocity), WaveguideSpec(1, group_velocity)),
        emitters=(
            EmitterSpec(0, 0.0, kappa),      # Q1
            EmitterSpec(1, delta2, kappa),   # Q2
            EmitterSpec(2, delta3, kappa),   # Q3
        ),
        couplings=(
            CouplingPoint(0, 0, 0.0, v),
            CouplingPoint(0, 1, 0.0, v),
            CouplingPoint(1, 0, d, v),
            CouplingPoint(1, 1, 3 * d, v),
            CouplingPoint(2, 0, d, v),
            CouplingPoint(2, 1, d, v),
        ),
        direct=(
            DirectCoupling(0, 2, -2 * gamma),
            DirectCoupling(0, 1, 0.0),
            DirectCoupling(1, 2, 0.0),
        ),
        phase_mode=phase_mode,
        reference_frequency=carrier,
        frequency_units=FrequencyUnits.DETUNING,
    )


def figure_preset(name: str, points: int = Config.GRID_POINTS,
                  gamma: float = Config.GAMMA) -> SweepSpec:
    if name not in PRESETS:
        raise UnknownPresetError(name, PRESETS)

    span = Config.DETUNING_SPAN * gamma
    detuning_axis = Axis("detuning", -span, span, points)

    if name == "fig2":
        return SweepSpec(
            engine=Engine.CLOSED_FORM,
            base=TwoAtomParams(theta=0.0, phi=0.0, gamma=gamma),
            axes=(Axis("theta", 0.0, 2 * math.pi, points), Axis("phi", 0.0, 2 * math.pi, points)),
            lock_degeneracy=True,
            name=name,
            caption=PRESETS[name],
        )

    if name in SPECTRUM_PHASES:
        theta, phi = SPECTRUM_PHASES[name]
        return SweepSpec(
            engine=Engine.CLOSED_FORM,
            base=TwoAtomParams(theta=theta, phi=phi, gamma=gamma,
                               j=float(degeneracy_coupling(theta, phi, gamma))),
            axes=(detuning_axis,),
            name=name,
            caption=PRESETS[name],
        )

    offset = Config.FIG5_DETUNING * gamma
    kappa = Config.FIG5_KAPPA * gamma
    if name == "fig5b":
        base, axis = fig5_preset(offset, 0.0, kappa, gamma), detuning_axis
    elif name == "fig5c":
        base, axis = fig5_preset(0.0, offset, kappa, gamma), detuning_axis
    else:
        base, axis = fig5_preset(offset, 0.0, kappa, gamma), Axis("kappa", 0.0, gamma, points)

    return SweepSpec(
        engine=Engine.REAL_SPACE,
        base=base,
        axes=(axis,),
        name=name,
        caption=PRESETS[name],
    )

import math

import pytest

from waveguide.errors import ValidationError
from waveguide.model import (
    CouplingPoint,
    DirectCoupling,
    EmitterSpec,
    FrequencyUnits,
    PhaseMode,
    ScatteringAmplitudes,
    SystemSpec,
    TwoAtomParams,
    WaveguideSpec,
    system_to_two_atom,
    two_atom_to_system,
    validate_system,
)


def _issues(excinfo):
    return " ".join(excinfo.value.issues)


class TestValidateSystem:

    def test_two_atom_layout_is_valid(self):
        spec = two_atom_to_system(TwoAtomParams(theta=math.pi / 2, phi=math.pi / 2, j=-2.0))
        assert validate_system(spec) is spec
        assert len(spec.waveguides) == 2
        assert len(spec.emitters) == 2
        assert len(spec.couplings) == 4
        assert len(spec.direct) == 1

    def test_dangling_emitter(self):
        spec = SystemSpec([WaveguideSpec(0)], [], [CouplingPoint(0, 0, 0.0, 1.0)])
        with pytest.raises(ValidationError) as excinfo:
            validate_system(spec)
        assert "dangling emitter id" in _issues(excinfo)

    def test_negative_dissipation(self):
        spec = SystemSpec([WaveguideSpec(0)], [EmitterSpec(0, 0.0, -0.1)], [CouplingPoint(0, 0, 0.0, 1.0)])
        with pytest.raises(ValidationError) as excinfo:
            validate_system(spec)
        assert "negative dissipation" in _issues(excinfo)

    def test_reports_every_violation(self):
        spec = SystemSpec(
            waveguides=[WaveguideSpec(0, group_velocity=0.0)],
            emitters=[EmitterSpec(0, 0.0), EmitterSpec(1, 0.0)],
            couplings=[CouplingPoint(0, 0, 0.0, -1.0), CouplingPoint(5, 0, 1.0, 1.0)],
            direct=[DirectCoupling(0, 1, 1.0), DirectCoupling(1, 0, 2.0)],
        )
        with pytest.raises(ValidationError) as excinfo:
            validate_system(spec)
        text = _issues(excinfo)
        assert "group velocity must be positive" in text
        assert "negative strength" in text
        assert "dangling emitter id 5" in text
        assert "duplicate pair" in text
        assert len(excinfo.value.issues) == 4

    def test_non_contiguous_waveguide_ids(self):
        spec = SystemSpec([WaveguideSpec(0), WaveguideSpec(2)], [EmitterSpec(0, 0.0)], [])
        with pytest.raises(ValidationError, match="contiguous"):
            validate_system(spec)


class TestTwoAtomParams:

    @pytest.mark.parametrize("gamma", [0.0, -1.0])
    def test_gamma_must_be_positive(self, gamma):
        with pytest.raises(ValidationError, match="gamma must be positive"):
            TwoAtomParams(theta=0.0, phi=0.0, gamma=gamma)

    def test_kappa_must_be_non_negative(self):
        with pytest.raises(ValidationError, match="kappa must be non-negative"):
            TwoAtomParams(theta=0.0, phi=0.0, kappa=-0.5)

    def test_non_finite_values(self):
        with pytest.raises(ValidationError, match="theta must be finite"):
            TwoAtomParams(theta=math.inf, phi=0.0)

    def test_with_returns_modified_copy(self):
        p = TwoAtomParams(theta=1.0, phi=2.0)
        q = p.with_(detuning=0.5)
        assert q.detuning == 0.5
        assert p.detuning == 0.0


class TestTwoAtomToSystem:

    def test_leg_positions_at_carrier(self):
        spec = two_atom_to_system(TwoAtomParams(theta=math.pi / 2, phi=math.pi / 2), carrier=1e6)
        legs = {(c.emitter_id, c.waveguide_id): c.position for c in spec.couplings}
        assert legs[(1, 0)] == pytest.approx(math.pi / 2 * 1e-6, rel=1e-15)
        assert legs[(1, 1)] == pytest.approx(math.pi / 2 * 1e-6, rel=1e-15)
        assert legs[(0, 0)] == 0.0
        assert legs[(0, 1)] == 0.0

    def test_zero_phase_is_colocated(self):
        spec = two_atom_to_system(TwoAtomParams(theta=0.0, phi=1.0))
        positions = [c.position for c in spec.couplings if c.waveguide_id == 0]
        assert positions == [0.0, 0.0]

    def test_unit_coupling_strength(self):
        spec = two_atom_to_system(TwoAtomParams(theta=1.0, phi=1.0, gamma=1.0), group_velocity=1.0)
        assert {c.strength for c in spec.couplings} == {1.0}

    def test_dissipation_and_detuning_units(self):
        spec = two_atom_to_system(TwoAtomParams(theta=1.0, phi=2.0, kappa=0.3))
        assert spec.frequency_units == FrequencyUnits.DETUNING
        assert all(e.frequency == 0.0 and e.dissipation == 0.3 for e in spec.emitters)

    @pytest.mark.parametrize("carrier", [0.0, -5.0])
    def test_rejects_non_positive_carrier(self, carrier):
        with pytest.raises(ValidationError, match="carrier must be positive"):
            two_atom_to_system(TwoAtomParams(theta=1.0, phi=1.0), carrier=carrier)

    def test_recovers_reduced_parameters(self):
        p = TwoAtomParams(theta=0.7, phi=2.1, gamma=1.5, j=-0.4, kappa=0.2)
        q = system_to_two_atom(two_atom_to_system(p), detuning=0.0)
        assert q.theta == pytest.approx(p.theta, rel=1e-12)
        assert q.phi == pytest.approx(p.phi, rel=1e-12)
        assert q.gamma == pytest.approx(p.gamma, rel=1e-12)
        assert (q.j, q.kappa) == (p.j, p.kappa)

    def test_recovery_rejects_unequal_strengths(self):
        spec = two_atom_to_system(TwoAtomParams(theta=0.7, phi=2.1))
        couplings = list(spec.couplings)
        couplings[3] = CouplingPoint(1, 1, couplings[3].position, 2.0)
        with pytest.raises(ValidationError, match="equal coupling strengths"):
            system_to_two_atom(SystemSpec(spec.waveguides, spec.emitters, couplings, spec.direct))


class TestSerialization:

    def test_json_round_trip(self):
        spec = two_atom_to_system(TwoAtomParams(theta=0.3, phi=1.2, j=0.5, kappa=0.1),
                                  phase_mode=PhaseMode.DISPERSIVE)
        assert SystemSpec.from_json(spec.to_json()) == spec

    def test_from_dict_accepts_enum_strings(self):
        data = {
            "waveguides": [{"id": 0, "group_velocity": 1.0}],
            "emitters": [{"id": 0, "frequency": 0.0}],
            "couplings": [{"emitter_id": 0, "waveguide_id": 0, "position": 0.0, "strength": 1.0}],
            "phase_mode": "dispersive",
            "frequency_units": "absolute",
            "reference_frequency": 10.0,
        }
        spec = SystemSpec.from_dict(data)
        assert spec.phase_mode is PhaseMode.DISPERSIVE
        assert spec.frequency_units is FrequencyUnits.ABSOLUTE
        assert spec.direct == ()

    def test_amplitudes_serialize_as_pairs(self):
        amplitudes = ScatteringAmplitudes(1 + 2j, 0j, -1j, 0.5)
        assert amplitudes.to_dict()["t_r1"] == [1.0, 2.0]
        assert amplitudes.to_dict()["r_l2"] == [0.5, 0.0]

    def test_probabilities_include_loss(self):
        probabilities = ScatteringAmplitudes(0.5, 0.5, 0.5, 0j).probabilities()
        assert probabilities.loss == pytest.approx(0.25)
        assert probabilities.to_dict()["T_f"] == pytest.approx(0.25)

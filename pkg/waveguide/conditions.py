import logging
from dataclasses import asdict, dataclass

from config.settings import Config
from waveguide.closed_form import collective_params, wrap_phase
from waveguide.model import TwoAtomParams

logger = logging.getLogger(__name__)

FLAG_NAMES = (
    "j_sigma_zero",
    "matched_forward",
    "matched_backward",
    "fully_degenerate",
    "dark_plus",
    "dark_minus",
)


@dataclass(frozen=True)
class ConditionReport:
    """
    Interference conditions met by a two-atom parameter set.

    j_sigma_zero      J_Σ = 0, dressed states degenerate in energy
    matched_forward   φ ≡ θ (mod 2π), forward transfer geometry
    matched_backward  φ ≡ 2π − θ (mod 2π), backward transfer geometry
    fully_degenerate  λ₊ = λ₋, energy and width degenerate (channel drop)
    dark_plus         |+⟩ decoupled from both waveguides
    dark_minus        |−⟩ decoupled from both waveguides
    """
    j_sigma_zero: bool
    matched_forward: bool
    matched_backward: bool
    fully_degenerate: bool
    dark_plus: bool
    dark_minus: bool

    @property
    def flags(self) -> set:
        return {name for name in FLAG_NAMES if getattr(self, name)}

    def to_dict(self) -> dict:
        return asdict(self)

    def describe(self) -> str:
        reason = []
        reason.append("✓ J_Σ = 0" if self.j_sigma_zero else "✗ J_Σ ≠ 0")
        if self.matched_forward:
            reason.append("✓ Forward phase match (φ = θ)")
        if self.matched_backward:
            reason.append("✓ Backward phase match (φ = 2π − θ)")
        if self.fully_degenerate:
            reason.append("✓ Fully degenerate (λ₊ = λ₋): channel drop")
        if self.dark_plus:
            reason.append("⚠️ |+⟩ dark")
        if self.dark_minus:
            reason.append("⚠️ |−⟩ dark")
        return ' | '.join(reason)


def classify_condition(p: TwoAtomParams, tol: float = Config.CONDITION_TOL) -> ConditionReport:
    collective = collective_params(p)
    energy_tol = tol * p.gamma

    report = ConditionReport(
        j_sigma_zero=abs(collective.j_sigma) < energy_tol,
        matched_forward=bool(abs(wrap_phase(p.phi - p.theta)) < tol),
        matched_backward=bool(abs(wrap_phase(p.phi + p.theta)) < tol),
        fully_degenerate=abs(collective.lambda_plus - collective.lambda_minus) < energy_tol,
        dark_plus=collective.gamma1_plus + collective.gamma2_plus < energy_tol,
        dark_minus=collective.gamma1_minus + collective.gamma2_minus < energy_tol,
    )
    logger.debug(f"Conditions at θ={p.theta:.6g}, φ={p.phi:.6g}: {report.describe()}")
    return report

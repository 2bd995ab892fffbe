"""
Analytic single-photon amplitudes for two giant atoms on two waveguides.

The kernels (`evaluate_full`, `evaluate_eigen`, `evaluate_regular`) work
elementwise on numpy arrays so sweeps can evaluate whole grids at once; the
scalar operations wrap them, validate their inputs and raise on poles.
"""

import logging

import numpy as np

from config.settings import Config
from waveguide.errors import KappaUnsupportedError, NearPoleError, PreconditionViolatedError
from waveguide.model import CollectiveParams, ScatteringAmplitudes, TwoAtomParams

logger = logging.getLogger(__name__)


def wrap_phase(angle):
    """Reduce an angle to [−π, π)."""
    return (np.asarray(angle) + np.pi) % (2 * np.pi) - np.pi


def degeneracy_coupling(theta, phi, gamma):
    """Direct coupling J = −γ(sinθ + sinφ) that makes J_Σ vanish."""
    return -gamma * (np.sin(theta) + np.sin(phi))


def evaluate_full(theta, phi, gamma, j, kappa, detuning):
    """
    Full κ-dependent amplitudes.

    Returns (t_r1, r_l1, t_r2, r_l2, denominator) where the denominator is
    Δ'² − J_C², with J_C = J − iγ(e^{iθ} + e^{iφ}) and Δ' = Δ + 2iγ + iκ/2.
    """
    e_theta = np.exp(1j * theta)
    e_phi = np.exp(1j * phi)
    j_c = j - 1j * gamma * (e_theta + e_phi)
    d_prime = detuning + 2j * gamma + 0.5j * kappa
    denominator = d_prime ** 2 - j_c ** 2

    with np.errstate(divide="ignore", invalid="ignore"):
        t_r1 = ((detuning + 1j * gamma + 0.5j * kappa) ** 2
                - (j_c + 1j * gamma * np.cos(theta)) ** 2
                + gamma ** 2 * np.sin(theta) ** 2) / denominator
        r_l1 = 2 * gamma * e_theta * (j_c + d_prime * np.cos(theta)) / (1j * denominator)
        t_r2 = gamma * (j_c * (e_theta + np.exp(-1j * phi))
                        + d_prime * (np.exp(1j * (theta - phi)) + 1)) / (1j * denominator)
        r_l2 = gamma * (j_c * (e_theta + e_phi)
                        + d_prime * (np.exp(1j * (theta + phi)) + 1)) / (1j * denominator)
    return t_r1, r_l1, t_r2, r_l2, denominator


def collective_arrays(theta, phi, gamma, j):
    """Elementwise (λ₊, λ₋, Γ₁₊, Γ₁₋, Γ₂₊, Γ₂₋, J₁, J₂, J_Σ)."""
    gamma1_plus = gamma * (1 + np.cos(theta))
    gamma1_minus = gamma * (1 - np.cos(theta))
    gamma2_plus = gamma * (1 + np.cos(phi))
    gamma2_minus = gamma * (1 - np.cos(phi))
    j1 = gamma * np.sin(theta)
    j2 = gamma * np.sin(phi)
    j_sigma = j + j1 + j2
    lambda_plus = j_sigma - 1j * (gamma1_plus + gamma2_plus)
    lambda_minus = -j_sigma - 1j * (gamma1_minus + gamma2_minus)
    return lambda_plus, lambda_minus, gamma1_plus, gamma1_minus, gamma2_plus, gamma2_minus, j1, j2, j_sigma


def evaluate_eigen(theta, phi, gamma, j, detuning):
    """
    Dressed-state (two-pole) form of the κ = 0 amplitudes.

    A dressed state with no width on the input waveguide (Γ₁± = 0) is dark to
    the incoming photon, so its pole term is dropped. For lossy emitters pass
    Δ + iκ/2 as the detuning.

    Returns (t_r1, r_l1, t_r2, r_l2, distance) where distance is the gap
    between Δ and the nearest remaining pole.
    """
    lambda_plus, lambda_minus, gamma1_plus, gamma1_minus = collective_arrays(theta, phi, gamma, j)[:4]
    e_theta = np.exp(1j * theta)
    e_phi = np.exp(1j * phi)
    to_minus = detuning - lambda_minus
    to_plus = detuning - lambda_plus
    dark_minus = gamma1_minus == 0
    dark_plus = gamma1_plus == 0

    with np.errstate(divide="ignore", invalid="ignore"):
        minus = np.where(dark_minus, 0j, gamma / (2j * to_minus))
        plus = np.where(dark_plus, 0j, gamma / (2j * to_plus))
    t_r1 = 1 + 2 * (1 - np.cos(theta)) * minus + 2 * (1 + np.cos(theta)) * plus
    r_l1 = (1 - e_theta) ** 2 * minus + (1 + e_theta) ** 2 * plus
    t_r2 = (1 - e_theta) * (1 - np.conj(e_phi)) * minus + (1 + e_theta) * (1 + np.conj(e_phi)) * plus
    r_l2 = (1 - e_theta) * (1 - e_phi) * minus + (1 + e_theta) * (1 + e_phi) * plus
    distance = np.minimum(np.where(dark_minus, np.inf, np.abs(to_minus)),
                          np.where(dark_plus, np.inf, np.abs(to_plus)))
    return t_r1, r_l1, t_r2, r_l2, distance


def evaluate_regular(theta, phi, gamma, j, kappa, detuning, pole_guard=Config.POLE_GUARD):
    """
    Full amplitudes with removable singularities filled in.

    Where Δ'² − J_C² vanishes because a dark dressed state sits on the photon
    energy, the dressed-state form at Δ + iκ/2 (dark term dropped) replaces
    the 0/0. Returns (t_r1, r_l1, t_r2, r_l2, denominator, pole); `pole`
    marks the entries that stay singular.
    """
    *amplitudes, denominator = evaluate_full(theta, phi, gamma, j, kappa, detuning)
    pole = np.abs(denominator) < pole_guard
    if np.any(pole):
        *dressed, distance = evaluate_eigen(theta, phi, gamma, j, detuning + 0.5j * np.asarray(kappa))
        amplitudes = [np.where(pole, d, f) for f, d in zip(amplitudes, dressed)]
        pole = pole & (distance < pole_guard)
    return (*amplitudes, denominator, pole)


def _as_amplitudes(t_r1, r_l1, t_r2, r_l2) -> ScatteringAmplitudes:
    return ScatteringAmplitudes(complex(t_r1), complex(r_l1), complex(t_r2), complex(r_l2))


def amplitudes_full(p: TwoAtomParams, pole_guard: float = Config.POLE_GUARD) -> ScatteringAmplitudes:
    t_r1, r_l1, t_r2, r_l2, denominator, pole = evaluate_regular(
        p.theta, p.phi, p.gamma, p.j, p.kappa, p.detuning, pole_guard)
    if pole:
        logger.debug(f"Pole hit at {p}")
        raise NearPoleError(complex(denominator), pole_guard)
    return _as_amplitudes(t_r1, r_l1, t_r2, r_l2)


def collective_params(p: TwoAtomParams) -> CollectiveParams:
    values = collective_arrays(p.theta, p.phi, p.gamma, p.j)
    lambda_plus, lambda_minus = complex(values[0]), complex(values[1])
    return CollectiveParams(lambda_plus, lambda_minus, *(float(v) for v in values[2:]))


def amplitudes_eigen(p: TwoAtomParams, pole_guard: float = Config.POLE_GUARD) -> ScatteringAmplitudes:
    """Amplitudes from the dressed-state poles; only defined without dissipation."""
    if p.kappa != 0:
        raise KappaUnsupportedError(p.kappa)
    t_r1, r_l1, t_r2, r_l2, distance = evaluate_eigen(p.theta, p.phi, p.gamma, p.j, p.detuning)
    if distance < pole_guard:
        raise NearPoleError(complex(distance), pole_guard)
    return _as_amplitudes(t_r1, r_l1, t_r2, r_l2)


def matched_failures(p: TwoAtomParams, tol: float = Config.MATCH_TOL):
    """List the matched-phase preconditions that p does not satisfy."""
    failed = []
    if abs(wrap_phase(p.phi - p.theta)) > tol:
        failed.append("phi must equal theta")
    if p.kappa != 0:
        failed.append("kappa must be zero")
    if abs(p.j + 2 * p.gamma * np.sin(p.theta)) > tol * max(1.0, p.gamma):
        failed.append("j must equal -2*gamma*sin(theta)")
    if abs(wrap_phase(p.theta - np.pi)) <= tol:
        failed.append("theta must differ from pi")
    return failed


def amplitudes_matched(p: TwoAtomParams, pole_guard: float = Config.POLE_GUARD) -> ScatteringAmplitudes:
    """
    Forward channel-drop form, valid for φ = θ ≠ π, κ = 0 and J_Σ = 0.

    Both dressed states then sit at zero energy with widths 2Γ₁±, and
    r_l1 = r_l2, t_r1 = 1 + t_r2 hold at every detuning.
    """
    failed = matched_failures(p)
    if failed:
        raise PreconditionViolatedError(failed)

    gamma_plus = p.gamma * (1 + np.cos(p.theta))
    gamma_minus = p.gamma * (1 - np.cos(p.theta))
    e_theta = np.exp(1j * p.theta)

    reflected = 0j
    forward = 0j
    for width, sign in ((gamma_plus, 1), (gamma_minus, -1)):
        if width == 0:
            # estado oscuro: desacoplado de la guía
            continue
        pole = 1j * p.detuning - 2 * width
        if abs(pole) < pole_guard:
            raise NearPoleError(complex(pole), pole_guard)
        reflected += sign * e_theta * width / pole
        forward += width / pole

    return _as_amplitudes(1 + forward, reflected, forward, reflected)


def resonant_dissipation_probabilities(gamma: float, kappa: float) -> dict:
    """Resonant channel-drop probabilities with loss: T = κ²/(4γ+κ)², T_f = 16γ²/(4γ+κ)²."""
    scale = (4 * gamma + kappa) ** 2
    return {"T": kappa ** 2 / scale, "R": 0.0, "T_f": 16 * gamma ** 2 / scale, "T_b": 0.0}

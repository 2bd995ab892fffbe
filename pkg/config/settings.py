import os
from dotenv import load_dotenv

load_dotenv()


def _float(name: str, default: float) -> float:
    return float(os.getenv(name, default))


def _int(name: str, default: int) -> int:
    return int(os.getenv(name, default))


class Config:
    """
    Configuración centralizada del motor de dispersión

    Este archivo gestiona todos los parámetros del sistema:
    - Unidades naturales (v_g, γ)
    - Frecuencias portadoras para el modo dispersivo y el oráculo
    - Tolerancias numéricas (polos, condiciones, residuos)
    - Resolución de barridos y presets de figuras
    - Salida, logging y servidor API
    """

    # ==========================================
    # UNIDADES NATURALES
    # ==========================================

    GROUP_VELOCITY = _float("GROUP_VELOCITY", 1.0)   # v_g
    GAMMA = _float("GAMMA", 1.0)                     # γ = V²/v_g, unidad de energía

    # Portadora ω₀ donde se fijan θ = kx₁ y φ = kx₂
    CARRIER = _float("CARRIER", 1e6)
    # Portadora "infinita" para comparar el solver con las fórmulas cerradas
    ORACLE_CARRIER = _float("ORACLE_CARRIER", 1e9)

    # ==========================================
    # TOLERANCIAS NUMÉRICAS
    # ==========================================

    POLE_GUARD = _float("POLE_GUARD", 1e-30)         # |Δ'² − J_C²| mínimo
    CONDITION_TOL = _float("CONDITION_TOL", 1e-9)    # flags de condición (unidades de γ)
    MATCH_TOL = _float("MATCH_TOL", 1e-12)           # precondiciones de fase igualada
    COND_LIMIT = _float("COND_LIMIT", 1e12)          # número de condición máximo del solver
    RESIDUAL_TOL = _float("RESIDUAL_TOL", 1e-10)     # ‖Ax − b‖∞ / ‖b‖∞

    # ==========================================
    # BARRIDOS Y PRESETS
    # ==========================================

    GRID_POINTS = _int("GRID_POINTS", 201)           # puntos por eje
    DETUNING_SPAN = _float("DETUNING_SPAN", 10.0)    # Δ ∈ [−span, span] en unidades de γ
    FIG5_DETUNING = _float("FIG5_DETUNING", 50.0)    # δ del qubit desintonizado
    FIG5_KAPPA = _float("FIG5_KAPPA", 0.1)           # κ en los presets de tres qubits
    SWEEP_WORKERS = _int("SWEEP_WORKERS", 1)         # hilos para el motor RealSpace

    # ==========================================
    # SALIDA Y SERVICIOS
    # ==========================================

    OUTPUT_DIR = os.getenv("OUTPUT_DIR", "results")
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
    API_HOST = os.getenv("API_HOST", "0.0.0.0")
    API_PORT = _int("API_PORT", 8000)

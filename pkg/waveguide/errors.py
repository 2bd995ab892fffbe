class ScatteringError(Exception):
    """Base class for every error raised by the scattering engines."""


class ValidationError(ScatteringError):
    """A system or parameter set broke one or more type invariants."""

    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("; ".join(self.issues))


class NearPoleError(ScatteringError):
    def __init__(self, denominator: complex, guard: float):
        self.denominator = denominator
        self.guard = guard
        super().__init__(f"near pole: |Δ'² − J_C²| = {abs(denominator):.3e} < {guard:.1e}")


class KappaUnsupportedError(ScatteringError):
    def __init__(self, kappa: float):
        self.kappa = kappa
        super().__init__(f"eigenstate decomposition requires kappa = 0, got {kappa}")


class PreconditionViolatedError(ScatteringError):
    def __init__(self, failed):
        self.failed = list(failed)
        super().__init__("precondition violated: " + ", ".join(self.failed))


class SolverDegenerateError(ScatteringError):
    def __init__(self, energy: float, condition: float):
        self.energy = energy
        self.condition = condition
        super().__init__(f"singular scattering system at energy {energy!r} (condition number {condition:.3e})")


class UnknownPresetError(ScatteringError):
    def __init__(self, name: str, known):
        self.name = name
        super().__init__(f"unknown preset '{name}' (known: {', '.join(known)})")

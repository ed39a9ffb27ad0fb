"""Exception types shared across the package."""


class StabilityError(ValueError):
    """Photon sector with omega_m + 4 g_q n <= 0 (inverted oscillator)."""

    def __init__(self, n, omega_m, g_q):
        self.n = n
        super().__init__(
            f"unstable photon sector n={n}: omega_m + 4*g_q*n = "
            f"{omega_m + 4 * g_q * n:.6g} <= 0"
        )


class NonConvergence(RuntimeError):
    """A truncated sum hit its hard cap before the tail fell below tolerance."""


class DimensionMismatch(ValueError):
    pass


class ConfigError(ValueError):
    """Base class for configuration problems (exit status 2)."""


class ParseError(ConfigError):
    pass


class ValidationError(ConfigError):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))

"""Exception types shared across the simulator."""


class ConfigError(ValueError):
    """Invalid scenario configuration (bad key, bad value, bad structure)."""


class StabilityError(RuntimeError):
    """Explicit-step stability bound violated.

    Carries the computed bound value so callers can report margins.
    """

    def __init__(self, message, value, limit=1.0):
        super().__init__(message)
        self.value = value
        self.limit = limit


class BlowUpError(FloatingPointError):
    """A solver step produced non-finite field values."""

    def __init__(self, step_index, t):
        super().__init__(
            f"non-finite field values after step {step_index} (t={t:g})"
        )
        self.step_index = step_index
        self.t = t

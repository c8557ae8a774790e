"""Exception types shared across the library."""


class RiskGamesError(Exception):
    """Base class for all library-specific failures."""


class IllegalMoveError(RiskGamesError, ValueError):
    """An action names a direction with no matching edge, or STOP off a terminal."""


class PathError(RiskGamesError, ValueError):
    """A path is disconnected, too long, or does not end at a terminal."""


class ZeroProbabilityObservation(RiskGamesError, ValueError):
    """A Bayes update conditioned on an observation no supported type emits."""


class UnreachableTerminalError(RiskGamesError, ValueError):
    """No terminal can be reached and stopped at within the horizon."""


class HorizonError(RiskGamesError, ValueError):
    """The horizon is too short for the play to finish from some reachable state."""


class UnsupportedAggregatorError(RiskGamesError, ValueError):
    """The requested machine aggregator is outside what the exact solver supports."""


class EnumerationGuardError(RiskGamesError, RuntimeError):
    """An exhaustive enumeration would exceed its size guard."""

    def __init__(self, message: str, bound: int):
        super().__init__(message)
        self.bound = bound


class DeviationBudgetError(RiskGamesError, RuntimeError):
    """Equilibrium verification would explore more deviations than budgeted."""

    def __init__(self, message: str, budget: int):
        super().__init__(message)
        self.budget = budget


class SpecValidationError(RiskGamesError, ValueError):
    """A game spec failed validation; carries the full violation list."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class ScenarioError(RiskGamesError, ValueError):
    """A scenario file failed to parse or validate; carries all problems found."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))

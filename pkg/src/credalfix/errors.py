"""Exception hierarchy for credalfix."""


class CredalError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(CredalError, ValueError):
    """Operands live on outcome spaces of different sizes."""


class PositivityError(CredalError, ValueError):
    """A strictly positive distribution or likelihood was required."""


class NormalizationError(CredalError, ValueError):
    """Weights are negative or too far from summing to one."""


class ParameterError(CredalError, ValueError):
    """A scalar parameter is outside its admissible range."""


class EmptyCredalError(CredalError, ValueError):
    """A credal set needs at least one generating distribution."""


class EmptyEvidenceError(CredalError, ValueError):
    """An evidence class needs at least one item."""


class AdditivityViolationError(CredalError):
    """No single evidence item minimizes every atom (pessimistic update).

    Carries the offending extreme index, likelihood index and the atoms
    whose minimizers disagree.
    """

    def __init__(self, message, extreme=None, k=None, atoms=()):
        super().__init__(message)
        self.extreme = extreme
        self.k = k
        self.atoms = tuple(atoms)


class EmptyEnvelopeError(CredalError):
    """The lower envelope (intersection of rule outputs) is empty."""


class MonotonicityError(CredalError):
    """A rule failed the randomized nested-pair monotonicity probe."""

    def __init__(self, message, rule=None, witness=None):
        super().__init__(message)
        self.rule = rule
        self.witness = witness


class SandwichViolation(CredalError):
    """lower ⊆ composed ⊆ upper failed at some step."""

    def __init__(self, message, step):
        super().__init__(message)
        self.step = step


class TraceError(CredalError, ValueError):
    """An orbit trace is too short for the requested analysis."""


class SamplingError(CredalError):
    """Rejection sampling could not fill a bin within its retry budget."""

    def __init__(self, message, bin_index=None, t=None):
        super().__init__(message)
        self.bin_index = bin_index
        self.t = t


class LPError(CredalError):
    """The linear program is infeasible or unbounded."""


class ScenarioError(CredalError, ValueError):
    """A scenario file failed to parse or validate."""

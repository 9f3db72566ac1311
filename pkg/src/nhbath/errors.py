"""Exception types raised by the solver modules.

Each class carries an ``exit_code`` used by the CLI: 2 for input/precondition
violations, 3 for numerical failures encountered mid-computation.
"""


class NHBathError(Exception):
    exit_code = 3


class BranchCutEvaluation(NHBathError):
    """Evaluation point lies within the exclusion tolerance of the branch cut."""

    exit_code = 2


class PoleEvaluation(NHBathError):
    """The Laplace-transform denominator is below tolerance (sitting on a pole)."""


class DetuningSingularity(NHBathError):
    """z coincides with the detuned emitter energy, where the Bloch map is singular."""

    exit_code = 2


class NearDegenerate(NHBathError):
    """Residue requested too close to a double pole; use the confluent path."""


class DetunedCriticality(NHBathError):
    """Critical-rate / coalescence analysis requires zero detuning."""

    exit_code = 2


class PoleOnPath(NHBathError):
    """A pole lies on (or too close to) a branch-cut integration ray."""


class TimeTooSmall(NHBathError):
    """Requested time is below the spectral route's minimum; use a direct oracle."""

    exit_code = 2


class ReflectionRisk(NHBathError):
    """Hard-wall truncation too short for the requested horizon (wavefront reflection)."""

    exit_code = 2


class ToleranceNotMet(NHBathError):
    """The adaptive integrator could not achieve the requested accuracy."""


class DimensionTooLarge(NHBathError):
    """Density-matrix basis exceeds the desk-scale cap."""

    exit_code = 2

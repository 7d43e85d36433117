"""Exception hierarchy shared by all biaslab modules."""


class BiaslabError(Exception):
    """Base class for all library errors."""


# field / character-sum core
class CompositeModulus(BiaslabError):
    pass


class ZeroCharacter(BiaslabError):
    pass


class PrecisionExhausted(BiaslabError):
    """A certified comparison could not be separated at the precision cap."""


# polynomials / tensors
class DimensionMismatch(BiaslabError):
    pass


class DegreeTooHigh(BiaslabError):
    pass


class EvenCharacteristic(BiaslabError):
    pass


class EmptyAlphabet(BiaslabError):
    pass


class MalformedCertificate(BiaslabError):
    pass


class ShapeMismatch(BiaslabError):
    pass


class CharacteristicTooSmall(BiaslabError):
    pass


class IndexOutOfRange(BiaslabError):
    pass


class NotAPartition(BiaslabError):
    pass


# enumeration control
class BudgetExceeded(BiaslabError):
    """Deterministic refusal: the requested enumeration is over budget."""

    def __init__(self, needed, budget):
        super().__init__(f"enumeration needs ~{needed} steps, budget is {budget}")
        self.needed = needed
        self.budget = budget


# distributions
class HypothesisViolated(BiaslabError):
    pass


class ConstructionFailed(BiaslabError):
    """A construction that theory guarantees has failed; never clamp, report."""


# bound functions
class ParameterOutOfRange(BiaslabError):
    pass


class MissingBlackBox(BiaslabError):
    pass


class MissingConstant(BiaslabError):
    pass


# cli / suites
class InfeasibleConstraint(BiaslabError):
    pass


class UnknownSuite(BiaslabError):
    pass


class IoFailure(BiaslabError):
    pass


DEFAULT_BUDGET = 1 << 24


def check_budget(needed: int, budget: int) -> None:
    if needed > budget:
        raise BudgetExceeded(needed, budget)

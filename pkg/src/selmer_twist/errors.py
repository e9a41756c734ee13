"""Exception hierarchy shared by every module."""


class SelmerTwistError(Exception):
    """Base class for all package errors."""


class FactorizationIncomplete(SelmerTwistError):
    pass


class InvalidCurveError(SelmerTwistError, ValueError):
    pass


class NotCoprimeError(InvalidCurveError):
    pass


class DivisibleByThreeError(InvalidCurveError):
    pass


class SingularCurveError(InvalidCurveError):
    pass


class DomainError(SelmerTwistError, ValueError):
    """An input lies outside the range where a local rule is proven."""


class NotInSigmaError(DomainError):
    def __init__(self, d, reason):
        super().__init__(f"d={d} is not in Sigma: {reason}")
        self.d = d
        self.reason = reason


class NotComputableError(SelmerTwistError):
    """The requested ratio is only bounded, never pinned down exactly."""


class HypothesisNoneError(SelmerTwistError):
    pass


class RatioNotOneError(SelmerTwistError):
    def __init__(self, d, iso, place, exponent):
        super().__init__(
            f"global ratio for {iso} at d={d} has exponent {exponent} (first nonzero place {place})"
        )
        self.d = d
        self.iso = iso
        self.place = place
        self.exponent = exponent


class ScenarioError(SelmerTwistError, ValueError):
    pass

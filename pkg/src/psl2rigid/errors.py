"""Exception hierarchy shared by all modules."""


class PSL2Error(Exception):
    pass


class DeterminantError(PSL2Error, ValueError):
    pass


class NonPositiveDeterminant(DeterminantError):
    pass


class DeterminantOutOfTolerance(DeterminantError):
    pass


class NotElliptic(PSL2Error, ValueError):
    pass


class IndexOutOfRange(PSL2Error, IndexError):
    pass


class BallTooLarge(PSL2Error):
    def __init__(self, count, cap):
        super().__init__(f"word ball has {count} words, cap is {cap}")
        self.count = count
        self.cap = cap


class NotFound(PSL2Error):
    def __init__(self, radius):
        super().__init__(f"no elliptic element of infinite order in the ball of radius {radius}")
        self.radius = radius


class RotationMismatch(PSL2Error):
    def __init__(self, rot1, rot2):
        super().__init__(f"rotation numbers differ: {rot1!r} vs {rot2!r}")
        self.rot1 = rot1
        self.rot2 = rot2


class ResidualTooLarge(PSL2Error):
    def __init__(self, residual):
        super().__init__(f"conjugation residual {residual:.3e} exceeds tolerance")
        self.residual = residual


class AmbiguousNullspace(PSL2Error):
    pass


class OrientationReversing(PSL2Error):
    pass


class ParseError(PSL2Error, ValueError):
    pass


class DuplicateLabel(ParseError):
    pass


class NotMonotone(PSL2Error, ValueError):
    pass


class NotDegreeOne(PSL2Error, ValueError):
    pass

"""Exception hierarchy shared by every module of the package."""


class HeintzeError(ValueError):
    """Base class; the CLI maps subclasses onto exit codes."""


class DimensionMismatch(HeintzeError):
    pass


class AntisymmetryViolation(HeintzeError):
    def __init__(self, i, j, k):
        self.indices = (i, j, k)
        super().__init__(f"AntisymmetryViolation({i + 1},{j + 1},{k + 1})")


class JacobiViolation(HeintzeError):
    def __init__(self, i, j, k):
        self.indices = (i, j, k)
        super().__init__(f"JacobiViolation({i + 1},{j + 1},{k + 1})")


class NotNilpotent(HeintzeError):
    def __init__(self, msg="NotNilpotent: lower central series stabilizes at a nonzero ideal"):
        super().__init__(msg)


class NotASubalgebra(HeintzeError):
    pass


class NotAnIdeal(HeintzeError):
    pass


class LeibnizViolation(HeintzeError):
    def __init__(self, i, j):
        self.indices = (i, j)
        super().__init__(f"LeibnizViolation({i + 1},{j + 1})")


class IrrationalOrComplexSpectrum(HeintzeError):
    pass


class NonPositiveEigenvalue(HeintzeError):
    def __init__(self, value):
        self.value = value
        super().__init__(f"NonPositiveEigenvalue({value})")


class NotClassC(HeintzeError):
    pass


class ClassTooHigh(HeintzeError):
    pass


class ParameterOutOfRange(HeintzeError):
    """Numeric experiment parameter outside its admissible range."""


class MuTooSmall(ParameterOutOfRange):
    pass


class DegenerateCurve(ParameterOutOfRange):
    pass


class TooLarge(HeintzeError):
    pass


class InputError(HeintzeError):
    """Malformed input document."""

"""Exception types raised across the package."""


class PglEkrError(Exception):
    """Base class for all package errors."""


class NonPrime(PglEkrError, ValueError):
    pass


class NotPrimePower(PglEkrError, ValueError):
    pass


class SizeLimitExceeded(PglEkrError, ValueError):
    pass


class DivisionByZero(PglEkrError, ZeroDivisionError):
    pass


class ZeroInput(PglEkrError, ValueError):
    pass


class InternalInconsistency(PglEkrError, RuntimeError):
    """An invariant that holds by construction was violated (signals a bug)."""


class IndeterminateCrossRatio(PglEkrError, ValueError):
    pass


class OrthogonalityViolation(PglEkrError, AssertionError):
    pass


class NonHalfIntegerEigenvalue(PglEkrError, ValueError):
    pass


class NonNegativeTau(PglEkrError, ValueError):
    pass


class TargetExceeded(PglEkrError):
    """An independent set larger than the claimed maximum was found."""

    def __init__(self, witness):
        self.witness = tuple(witness)
        super().__init__(f"independent set of size {len(self.witness)} exceeds target: {self.witness}")


class StructureMismatch(PglEkrError, AssertionError):
    pass


class MismatchAt(PglEkrError, AssertionError):
    def __init__(self, row, col, expected, observed):
        self.row, self.col = row, col
        super().__init__(f"entry ({row}, {col}): expected {expected}, observed {observed}")


class FormulaMismatchAt(MismatchAt):
    pass


class KernelVectorFails(PglEkrError, AssertionError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"kernel spanning vector {index} is not annihilated by A")


class NotAnEigenvector(PglEkrError, AssertionError):
    pass


class NonPositive(PglEkrError, AssertionError):
    pass


class RankMismatch(PglEkrError, AssertionError):
    pass


class IdentityFails(PglEkrError, AssertionError):
    pass


class Unsolvable(PglEkrError):
    """Characteristic vector outside the column space; contradicts the EKR theorem."""


class NonIndicator(PglEkrError, AssertionError):
    pass


class CacheCorrupt(PglEkrError):
    pass

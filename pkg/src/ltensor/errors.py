"""Exception types raised by ltensor."""


class LTensorError(Exception):
    """Base class for all library errors."""


class DimensionError(LTensorError, ValueError):
    """Shapes are inconsistent with each other or with the transform."""


class ZeroDivisorError(LTensorError, ArithmeticError):
    """A tensor-scalar has a (numerically) zero transform-domain entry."""


class SliceError(LTensorError, ArithmeticError):
    """A per-slice computation failed; ``slice_index`` is the 0-based p."""

    def __init__(self, slice_index, message):
        self.slice_index = int(slice_index)
        super().__init__(f"slice {self.slice_index}: {message}")


class SingularSliceError(SliceError):
    pass


class DefectiveSliceError(SliceError):
    pass


class SliceSVDError(SliceError):
    pass


class NotSymmetricError(LTensorError, ValueError):
    def __init__(self, violation):
        self.violation = float(violation)
        super().__init__(f"tensor is not Hermitian: relative violation {self.violation:.3e}")


class NotPSDError(LTensorError, ValueError):
    def __init__(self, violation, slice_index):
        self.violation = float(violation)
        self.slice_index = int(slice_index)
        super().__init__(
            f"slice {self.slice_index} is not positive semidefinite: "
            f"min eigenvalue {self.violation:.3e}"
        )


class UnsupportedSizeError(LTensorError, ValueError):
    """Requested size exceeds a hard guard (determinant order, oracle memory)."""


class FormatError(LTensorError, ValueError):
    """Malformed LT4D, PPM or manifest input."""


class ZeroColumnError(LTensorError, ValueError):
    """A Householder step received an all-zero tensor-column."""

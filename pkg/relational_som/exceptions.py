from __future__ import annotations


class RelationalSOMError(Exception):
    pass


class InputValidationError(RelationalSOMError):
    pass


class NotSquareError(InputValidationError):
    pass


class _EntryError(InputValidationError):
    def __init__(self, i: int, j: int, message: str) -> None:
        super().__init__(f"({i}, {j}): {message}")
        self.i = i
        self.j = j


class NegativeEntryError(_EntryError):
    def __init__(self, i: int, j: int) -> None:
        super().__init__(i, j, "negative dissimilarity")


class AsymmetryBeyondToleranceError(_EntryError):
    def __init__(self, i: int, j: int) -> None:
        super().__init__(i, j, "asymmetry beyond tolerance")


class NonFiniteEntryError(_EntryError):
    def __init__(self, i: int, j: int) -> None:
        super().__init__(i, j, "non-finite value")


class NonZeroDiagonalError(InputValidationError):
    def __init__(self, i: int) -> None:
        super().__init__(f"({i}, {i}): non-zero diagonal entry")
        self.i = i


class InvalidPointCloudError(InputValidationError):
    pass


class InvalidGraphError(InputValidationError):
    pass


class SequenceLengthError(InputValidationError):
    pass


class KTooLargeError(InputValidationError):
    pass


class DisconnectedNeighborGraphError(InputValidationError):
    def __init__(self, component_sizes: list[int]) -> None:
        super().__init__(
            f"neighbor graph has {len(component_sizes)} connected components"
            f" (sizes: {component_sizes}); increase k"
        )
        self.component_sizes = component_sizes


class DisconnectedGraphError(InputValidationError):
    def __init__(self, component_sizes: list[int]) -> None:
        super().__init__(
            f"graph has {len(component_sizes)} connected components"
            f" (sizes: {component_sizes})"
        )
        self.component_sizes = component_sizes


class UndefinedDistanceError(_EntryError):
    def __init__(self, i: int, j: int) -> None:
        super().__init__(i, j, "Kimura-2P distance is undefined (saturation)")


class NoComparableSitesError(_EntryError):
    def __init__(self, i: int, j: int) -> None:
        super().__init__(i, j, "no comparable sites")


class GridShapeError(InputValidationError):
    pass


class ScheduleError(InputValidationError):
    pass


class IterationOutOfRangeError(InputValidationError):
    pass


class DimensionMismatchError(InputValidationError):
    pass


class DimensionNot2DError(InputValidationError):
    pass


class ConfigError(InputValidationError):
    pass


class InputFormatError(InputValidationError):
    pass

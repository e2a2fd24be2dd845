"""Exception hierarchy shared by every module.

Each class name doubles as the diagnostic printed by the command line, so
keep them short and stable.
"""


class ProfiniteError(Exception):
    """Base class for all domain errors."""


class AxiomViolation(ProfiniteError):
    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


class SizeLimit(ProfiniteError):
    pass


class GroupMismatch(ProfiniteError):
    pass


class Ramified(ProfiniteError):
    pass


class BondNotSurjective(ProfiniteError):
    pass


class LevelOrder(ProfiniteError):
    pass


class IncoherentAtLevel(ProfiniteError):
    def __init__(self, level):
        super().__init__(f"components incompatible at level {level}")
        self.level = level


class TowerMismatch(ProfiniteError):
    pass


class InvalidCode(ProfiniteError):
    def __init__(self, index, message="code leaves the partition tree"):
        super().__init__(f"{message} at bit index {index}")
        self.index = index


class LengthMismatch(ProfiniteError):
    pass


class EmptyInput(ProfiniteError):
    pass


class NotAbelian(ProfiniteError):
    pass


class KindMismatch(ProfiniteError):
    pass


class Usage(ProfiniteError):
    pass

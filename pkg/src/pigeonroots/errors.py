"""Exception hierarchy shared by all modules."""


class PigeonRootsError(Exception):
    pass


class LengthMismatch(PigeonRootsError, ValueError):
    pass


class InvalidParameter(PigeonRootsError, ValueError):
    pass


class IdenticalSelections(PigeonRootsError, ValueError):
    pass


class InvalidGrid(PigeonRootsError, ValueError):
    pass


class OutOfCube(PigeonRootsError, ValueError):
    pass


class CapExceeded(PigeonRootsError, RuntimeError):
    pass


class NotFound(PigeonRootsError, RuntimeError):
    """Budgeted search gave up without a certified collision."""


class ZeroPolynomial(PigeonRootsError, ValueError):
    pass


class FormViolation(PigeonRootsError, ValueError):
    pass


class FrameViolation(PigeonRootsError, ValueError):
    """Raised when log M <= log(1/4) + n/9 fails."""


class ChainViolation(PigeonRootsError):
    def __init__(self, link: str, detail: str = ""):
        self.link = link
        super().__init__(f"{link}: {detail}" if detail else link)

"""Exception hierarchy shared by all modules."""


class Waring7Error(Exception):
    pass


class PreconditionError(Waring7Error, ValueError):
    """An argument violates a documented precondition (degree, side, nvars...)."""


class AntiderivativeUndefined(Waring7Error):
    pass


class DegenerateFrame(Waring7Error):
    pass


class NotInKernel(Waring7Error):
    pass


class ZeroForm(Waring7Error):
    pass


class OmegaDegenerate(Waring7Error):
    pass


class FrameFitFailed(Waring7Error):
    pass


class CollinearDirections(Waring7Error):
    pass


class InconsistentSystem(Waring7Error):
    pass


class NotInL(Waring7Error):
    pass


class IdentityMap(Waring7Error):
    pass


class QZero(Waring7Error):
    def __init__(self, index, msg=None):
        self.index = index
        super().__init__(msg or f"q_{index} vanishes")


class QSquare(Waring7Error):
    def __init__(self, index, msg=None):
        self.index = index
        super().__init__(msg or f"q_{index} is a square")


class TangentConic(Waring7Error):
    pass

"""Exception hierarchy.

Every error raised by the library derives from :class:`TwinsurfError`.  The
CLI maps :class:`ParseError` to exit code 2 and everything else to exit 3.
"""


class TwinsurfError(Exception):
    pass


class ParseError(TwinsurfError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


# embedded graphs

class MapError(TwinsurfError):
    pass


class BrokenInvolution(MapError):
    pass


class BadRotation(MapError):
    pass


class LoopEdge(MapError):
    pass


class Disconnected(MapError):
    pass


class DegenerateFace(MapError):
    pass


# BFS structure

class UnknownRoot(TwinsurfError):
    pass


class NotALayering(TwinsurfError):
    pass


class NotAPartition(TwinsurfError):
    pass


# cutting / decomposition

class GenusZero(TwinsurfError):
    pass


class NotADisk(TwinsurfError):
    pass


class UnreachableVertex(TwinsurfError):
    pass


class NoTrichromaticFace(TwinsurfError):
    pass


class DecompositionError(TwinsurfError):
    """An internal invariant of the decomposition pipeline failed."""


# trigraphs

class UnknownVertex(TwinsurfError):
    pass


class SelfContraction(TwinsurfError):
    pass


class InvalidStep(TwinsurfError):
    def __init__(self, message, step=None):
        self.step = step
        if step is not None:
            message = f"step {step}: {message}"
        super().__init__(message)


class TooLarge(TwinsurfError):
    pass


class NotA7Tree(TwinsurfError):
    pass


class ScheduleError(TwinsurfError):
    """A red-degree or structural invariant of the schedule was violated."""

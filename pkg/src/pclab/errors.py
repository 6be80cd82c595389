"""Domain errors raised by the library. The CLI maps every subclass of
PclabError to exit status 2."""


class PclabError(Exception):
    code = "error"

    def to_json(self):
        return {"error": self.code, "message": str(self)}


class ExceptionalSurface(PclabError):
    code = "ExceptionalSurface"


class SurfaceMismatch(PclabError):
    code = "SurfaceMismatch"


class DisjointPair(PclabError):
    code = "DisjointPair"


class EqualCurves(PclabError):
    code = "EqualCurves"


class MalformedGraph(PclabError):
    code = "MalformedGraph"


class NotBinding(PclabError):
    code = "NotBinding"


class NoEligibleSide(PclabError):
    code = "NoEligibleSide"


class NotRecurrent(PclabError):
    code = "NotRecurrent"


class NotLargeBranch(PclabError):
    code = "NotLargeBranch"


class AmbiguousGuide(PclabError):
    code = "AmbiguousGuide"


class DisconnectedGraph(PclabError):
    code = "DisconnectedGraph"


class TooShort(PclabError):
    code = "TooShort"


class InvalidCurve(PclabError):
    code = "InvalidCurve"


class FormatError(PclabError):
    code = "FormatError"

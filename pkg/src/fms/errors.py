"""Exception hierarchy shared by all modules."""


class FMSError(Exception):
    """Base class for library errors."""


class CycleDetected(FMSError):
    """The input relation has a directed cycle."""


class UnknownElement(FMSError, KeyError):
    """An id was referenced that is not an element of the poset."""

    def __str__(self):  # KeyError quotes its argument; keep it readable
        return str(self.args[0]) if self.args else ""


class DuplicateId(FMSError):
    """An element id was declared twice."""


class EmptyPoset(FMSError):
    """The operation is undefined on the empty poset."""


class NotOpen(FMSError):
    """A subset expected to be open (down-closed) is not."""


class NotQuasicellular(FMSError):
    """No valid level map was found for the pair."""


class InvalidStructure(FMSError):
    """A quasicellular structure does not fit the pair it is used with."""


class NotConnected(FMSError):
    """The operation requires a connected poset."""


class RelatorNotKilled(FMSError):
    """A generator assignment does not send every relator to the identity."""


class InvalidGroup(FMSError):
    """A multiplication table is not a group."""


class NotACover(FMSError):
    """The two sets of a triad do not cover the poset."""


class HasBeatPoints(FMSError):
    """The operation requires a beat-point-free poset."""


class NotMaximal(FMSError):
    """The element is not maximal."""


class InvalidIncidence(FMSError):
    """A CW incidence description is inconsistent."""


class ResumeTokenMismatch(FMSError):
    """A resume token was produced by a different campaign configuration."""


class UnsupportedTorsion(FMSError):
    """Local homology with torsion is outside what the cellular complex supports."""

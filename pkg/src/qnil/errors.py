"""Exception hierarchy shared by all qnil modules."""


class QnilError(Exception):
    """Base class for every error raised by this package."""


class UniverseError(QnilError):
    """Operands live over different generator universes, or a generator is unknown."""


class SectorError(QnilError):
    """An operation received generators from the wrong sector (even vs odd)."""


class ParityError(QnilError):
    """An element violates a parity requirement (homogeneity or block parity)."""


class BodyError(QnilError):
    """A nonzero numeric part was found where a purely nilpotent element is required."""


class NotInvertibleError(QnilError):
    """The element has (numerically) vanishing body and admits no inverse."""


class ShapeError(QnilError):
    """Input has the wrong size or an unsupported structural shape."""


class SplitError(QnilError):
    """A bipartition of qubit indices is empty, full, or otherwise invalid."""


class RangeError(QnilError):
    """A count parameter lies outside its supported range."""


class ArityError(QnilError):
    """Ket literals of different arity were mixed in one expression."""


class EvaluationError(QnilError):
    """A parsed expression cannot be interpreted as a state of the requested kind."""


class ParseError(QnilError):
    """Syntax error in the state-definition language.

    Carries the 1-based ``line``/``column`` of the offending character and the
    set of token descriptions that would have been accepted there.
    """

    def __init__(self, message, line, column, expected=()):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.expected = frozenset(expected)

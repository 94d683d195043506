"""Exception hierarchy.

Every error carries a short ``label`` that the CLI prints on stderr, so a
caller can tell failure classes apart without parsing messages.
"""


class FlangeError(Exception):
    label = "error"


class DimensionError(FlangeError, ValueError):
    label = "dimension error"


class GradeIndexError(FlangeError, IndexError):
    label = "index error"


class GradeArithmeticError(FlangeError, ArithmeticError):
    label = "arithmetic error"


class FormatError(FlangeError, ValueError):
    label = "format error"


class ValidityError(FlangeError, ValueError):
    label = "validity error"


class ChainComplexError(FlangeError, ValueError):
    label = "chain-complex error"


class CompositionError(FlangeError, ValueError):
    """Inner grade lists of a product do not match."""

    label = "composition error"


class AssemblyError(FlangeError, ValueError):
    label = "assembly error"


class AcyclicityError(FlangeError, ValueError):
    """A projected complex has homology; the module is not finite dimensional."""

    label = "acyclicity error"


class QueryError(FlangeError, ValueError):
    label = "query error"


class RangeError(FlangeError, ValueError):
    label = "range error"

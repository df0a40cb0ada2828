"""Exception types shared across the package.

The CLI maps these onto exit codes: usage problems exit 1, `DataError`
subclasses exit 2, `NumericError` subclasses exit 3.
"""


class DefinnetError(Exception):
    """Base class for all package errors."""


class DataError(DefinnetError):
    """Malformed or inconsistent input data (files, records, vocabularies)."""


class FormatError(DataError):
    """A file does not conform to its declared on-disk format."""


class ZeroNormError(DefinnetError):
    """A vector with zero norm reached an operation that requires direction."""


class ShapeError(DefinnetError):
    """Dimension or shape mismatch between vectors, tables, or model parameters."""


class UnusablePairError(DefinnetError):
    """A definition word pair cannot be embedded in the host space."""


class NotInWordNetError(DataError):
    """A word has no synset of the requested part of speech."""


class TaxonomyError(DefinnetError):
    """A taxonomy query cannot be answered (POS mismatch, no common ancestor)."""


class UndefinedStatisticError(DefinnetError):
    """A statistic is undefined for the given input (e.g. zero rank variance)."""


class NumericError(DefinnetError):
    """Numeric failure during training or evaluation (NaN/Inf detected)."""

"""Exception hierarchy shared by the pixelizers, the record codec and the CLI."""


class DppxError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(DppxError, ValueError):
    """A parameter or input violates a documented precondition."""


class RecordError(DppxError):
    """Base class for problems found while decoding a ``.dppx`` record."""


class NotARecordError(RecordError):
    """The byte stream does not start with the ``DPPX`` magic."""


class CorruptRecordError(RecordError):
    """The record is truncated or its lengths are inconsistent."""


class ChecksumError(CorruptRecordError):
    """The CRC32 trailer does not match the record contents."""


class UnsupportedVersionError(RecordError):
    """The record was written by a newer format version."""


class ConsistencyError(DppxError):
    """A reconstructed image differs from the image the pipeline emitted."""

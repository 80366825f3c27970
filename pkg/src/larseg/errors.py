"""Error types shared across the package."""


class FormatError(ValueError):
    """A file does not conform to one of the package's binary or text formats."""


class BadMagicError(FormatError):
    """File magic bytes do not match the expected format tag."""


class TruncatedPayloadError(FormatError):
    """File ended before the payload declared in its header was read."""


class NonFiniteDataError(FormatError):
    """A NaN or infinity was found where only finite amplitudes are allowed."""


class SchemaError(FormatError):
    """Structured content (CSV/JSON) is present but violates the schema."""

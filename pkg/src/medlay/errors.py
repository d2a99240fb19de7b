"""Exception hierarchy shared by all modules."""


class MedlayError(Exception):
    """Base class for all package errors."""


class ValidationError(MedlayError, ValueError):
    """Input is readable but violates a format or domain invariant."""


class UnknownConceptError(ValidationError):
    pass


class CorruptInputError(ValidationError):
    """Too many malformed records for the input to be trusted."""


class WiktionaryParseError(ValidationError):
    def __init__(self, message, byte_offset=None):
        super().__init__(message)
        self.byte_offset = byte_offset


class StandoffParseError(ValidationError):
    def __init__(self, message, line_number=None):
        super().__init__(message)
        self.line_number = line_number


class StandoffValidationError(ValidationError):
    def __init__(self, message, annotation_id=None):
        super().__init__(message)
        self.annotation_id = annotation_id

"""Exception hierarchy.

InputError subclasses mean the caller handed us bad files or documents
(CLI exit 2); ProcessingError subclasses mean a pipeline stage could not
produce a valid result from well-formed inputs (CLI exit 3).
"""


class CalliSenseError(Exception):
    pass


class InputError(CalliSenseError):
    pass


class ProcessingError(CalliSenseError):
    pass


# -- document / schema --------------------------------------------------


class SchemaError(InputError):
    """Document does not match the session schema (missing/extra/wrong-type field)."""


class InvariantError(InputError):
    """Document parses but violates a type invariant; message names the path."""


# -- ingest --------------------------------------------------------------


class MissingFile(InputError):
    pass


class BadCsvRow(InputError):
    def __init__(self, path, line_no, reason):
        super().__init__(f"{path}:{line_no}: {reason}")
        self.path = path
        self.line_no = line_no
        self.reason = reason


class NonMonotoneTime(InputError):
    pass


class DegenerateQuad(InputError):
    pass


# -- segment -------------------------------------------------------------


class EmptyTrace(InputError):
    pass


class DimensionMismatch(ProcessingError):
    pass


class NoContacts(ProcessingError):
    pass


# -- skeleton / fusion ---------------------------------------------------


class EmptyStroke(ProcessingError):
    pass


class EmptyStream(ProcessingError):
    pass


class LengthMismatch(ProcessingError):
    pass


class EmptyValues(ProcessingError):
    pass


# -- compare -------------------------------------------------------------


class EmptyGlyph(ProcessingError):
    pass


class DegenerateStroke(ProcessingError):
    pass


class EmptySession(ProcessingError):
    pass


# -- synth ---------------------------------------------------------------


class EmptyScript(InputError):
    pass


class BadProfile(InputError):
    pass

"""Exception hierarchy; each family maps to one CLI exit code."""


class TimedFCAError(Exception):
    exit_code = 2


class ConfigError(TimedFCAError):
    exit_code = 1


class DataError(TimedFCAError):
    exit_code = 2


class ParseError(DataError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class AnnotatorError(DataError):
    def __init__(self, endpoint, cause):
        self.endpoint = endpoint
        self.cause = cause
        super().__init__(f"annotator at {endpoint} failed: {cause}")


class ConceptCapExceeded(TimedFCAError):
    exit_code = 3

    def __init__(self, cap):
        self.cap = cap
        super().__init__(f"concept cap exceeded ({cap} concepts)")

"""Custom exception hierarchy for the lab."""


class LabError(Exception):
    """Base exception for all lab errors."""

    def __init__(self, message: str, details: dict = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)


class ConfigurationError(LabError):
    """Configuration-related errors."""
    pass


class ValidationError(LabError):
    """Input validation errors."""

    def __init__(self, message: str, field: str = None, value=None, **kwargs):
        super().__init__(message, kwargs)
        self.field = field
        self.value = value


class FieldError(LabError):
    """Finite-field arithmetic errors."""
    pass


class FieldMismatchError(FieldError):
    """Operands live in different fields."""

    def __init__(self, message: str, left=None, right=None, **kwargs):
        super().__init__(message, kwargs)
        self.left = left
        self.right = right


class DivisionByZeroError(FieldError):
    """Division by the zero element."""
    pass


class EmbeddingError(FieldError):
    """An object cannot be moved into the requested field."""
    pass


class BudgetExceededError(LabError):
    """A computation would exceed its configured budget."""

    def __init__(self, message: str, resource: str = None, limit=None, requested=None, **kwargs):
        super().__init__(message, kwargs)
        self.resource = resource
        self.limit = limit
        self.requested = requested


class CheckTimeoutError(LabError):
    """A check ran past its time budget."""

    def __init__(self, message: str, operation: str = None, timeout_seconds: float = None, **kwargs):
        super().__init__(message, kwargs)
        self.operation = operation
        self.timeout_seconds = timeout_seconds


class DegenerateSliceError(LabError):
    """A random slice draw produced dependent linear forms."""
    pass


class SliceError(LabError):
    """Slice statistics could not be produced."""
    pass


class GroupConstructionError(LabError):
    """A group construction failed an internal certification (fatal)."""

    def __init__(self, message: str, group: str = None, expected=None, actual=None, **kwargs):
        super().__init__(message, kwargs)
        self.group = group
        self.expected = expected
        self.actual = actual


class GroupError(LabError):
    """Invalid group-theoretic input."""
    pass


class EngineError(LabError):
    """Inference engine errors."""
    pass


class FactBaseError(EngineError):
    """Malformed or rejected fact-base record."""

    def __init__(self, message: str, line: int = None, **kwargs):
        super().__init__(message, kwargs)
        self.line = line


class UnknownGroupError(EngineError):
    """Group name does not parse to a known family."""

    def __init__(self, message: str, name: str = None, **kwargs):
        super().__init__(message, kwargs)
        self.name = name


class AbsentFactError(EngineError):
    """No bound has been derived for the requested cell."""
    pass


class UnderivableCellError(EngineError):
    """Some table cells have no derived bound."""

    def __init__(self, message: str, cells: list = None, **kwargs):
        super().__init__(message, kwargs)
        self.cells = cells or []


class SoundnessError(EngineError):
    """A derivation trace failed to replay."""
    pass


class UnknownCheckError(LabError):
    """No check is registered under the given id."""

    def __init__(self, message: str, check_id: str = None, **kwargs):
        super().__init__(message, kwargs)
        self.check_id = check_id

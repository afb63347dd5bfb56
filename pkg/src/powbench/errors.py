"""Exception hierarchy shared by every powbench module."""


class PowBenchError(Exception):
    """Base class; the CLI maps any subclass to exit code 2."""


class InvalidParam(PowBenchError, ValueError):
    def __init__(self, field: str, reason: str):
        super().__init__(f"invalid {field}: {reason}")
        self.field = field
        self.reason = reason


class MemoryCapExceeded(PowBenchError):
    def __init__(self, needed_bytes: int, cap_bytes: int):
        super().__init__(
            f"working set of {needed_bytes} bytes exceeds memory cap of {cap_bytes} bytes"
        )
        self.needed_bytes = needed_bytes
        self.cap_bytes = cap_bytes


class InvalidBudget(PowBenchError, ValueError):
    def __init__(self, budget_s: float):
        super().__init__(f"time budget must be > 0 seconds, got {budget_s!r}")
        self.budget_s = budget_s


class TooFewSamples(PowBenchError, ValueError):
    pass


class SigmaZero(PowBenchError, ValueError):
    pass


class InsufficientSamples(PowBenchError, ValueError):
    def __init__(self, record_label: str, available: int, requested: int):
        super().__init__(
            f"record {record_label!r} has {available} completed runs, {requested} requested"
        )
        self.record_label = record_label
        self.available = available
        self.requested = requested


class SchemaError(PowBenchError):
    def __init__(self, found_version):
        super().__init__(f"unsupported schema_version {found_version!r}")
        self.found_version = found_version


class InvariantViolation(PowBenchError):
    def __init__(self, field: str, reason: str = ""):
        msg = f"invariant violated on {field}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)
        self.field = field
        self.reason = reason


class EmptyInput(PowBenchError, ValueError):
    pass


class Unsupported(PowBenchError):
    pass

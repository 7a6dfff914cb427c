class ParameterError(Exception):
    pass

class InstanceFormatError(Exception):
    def __init__(self, message: str, line_numbers: list[int] | None = None):
        super().__init__(message)
        self.line_numbers = line_numbers or []

class InstanceTooLarge(Exception):
    pass

class SpacingViolation(Exception):
    def __init__(self, message: str, report: object = None):
        super().__init__(message)
        self.report = report

class InvariantViolation(Exception):
    pass

class InfeasibleParameters(Exception):
    pass

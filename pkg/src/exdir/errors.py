"""Exception hierarchy shared by every module."""


class ExdirError(Exception):
    pass


class ParseError(ExdirError):
    def __init__(self, line, msg):
        super().__init__(f"line {line}: {msg}")
        self.line = line


class BoundsError(ExdirError):
    pass


class PartitionError(ExdirError):
    pass


class ContractViolation(ExdirError):
    pass


class WitnessError(ExdirError):
    pass


class SizeError(ExdirError):
    pass


class BudgetExceeded(ExdirError):
    """Deletion budget of a pruning instance would be exceeded."""


class OracleFailure(ExdirError):
    def __init__(self, msg, cut=None):
        super().__init__(msg)
        self.cut = cut


class RestartRequired(ExdirError):
    pass


class InputError(ExdirError):
    pass

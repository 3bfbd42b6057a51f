class GiftmaniaError(Exception):
    """Base class of every error raised by giftmania."""


class GameInputError(GiftmaniaError, ValueError):
    pass


class ConstraintError(GiftmaniaError, ValueError):
    def __init__(self, kind: str, violated):
        self.kind = kind
        self.violated = list(violated)
        super().__init__(f'{kind} parameters violate: {", ".join(self.violated)}')


class HorizonError(GiftmaniaError, RuntimeError):
    pass


class NumericalError(GiftmaniaError, ArithmeticError):
    def __init__(self, message: str, step=None, diagnostics=None):
        self.step = step
        self.diagnostics = diagnostics or {}
        super().__init__(message if step is None else f'{message} (step {step})')


class ConfigError(GiftmaniaError, ValueError):
    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f'{key}: {message}')


class StudyHealthError(GiftmaniaError, RuntimeError):
    pass

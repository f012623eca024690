class TrendsetterError(Exception):
    """Exceptions raised specifically by trendsetter."""
    exit_code = 1


class TrendsetterUserError(TrendsetterError):
    """Exceptions raised due to a bad invocation or argument."""
    exit_code = 2


class DataError(TrendsetterError):
    """Input data is missing, malformed or does not satisfy a precondition."""
    exit_code = 3


class NumericalError(TrendsetterError):
    """A computation failed or produced an undefined result."""
    exit_code = 4

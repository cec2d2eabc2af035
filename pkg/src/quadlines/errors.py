"""Exception hierarchy shared by the analysis modules."""


class QuadLinesError(Exception):
    """Base class for every error raised by this package."""


class DegreeZero(QuadLinesError, ValueError):
    """Polynomial reduces to a nonzero constant."""


class ZeroPolynomial(QuadLinesError, ValueError):
    """All polynomial coefficients vanish."""


class DegenerateSystem(QuadLinesError):
    """The three b-quadratics vanish identically, so every b solves them."""


class UndefinedForm(QuadLinesError):
    """An inequality test divides by b = 0 or d2 = 0."""


class NoRealPoint(QuadLinesError):
    """The squared-coordinate system has no componentwise nonnegative solution."""


class ZeroD2(QuadLinesError, ValueError):
    """The lambda equation needs d2 != 0."""


class NoRoot(QuadLinesError):
    """No admissible mu root on any branch."""


class ZeroB(QuadLinesError):
    """Some b_k vanishes while the matching w_k does not."""


class Inconsistent(QuadLinesError):
    """The two determinations of s^2 disagree; mu is spurious."""


class NoLineFound(QuadLinesError):
    """The line pipeline produced nothing.

    ``stages`` maps a pipeline stage name to the number of candidates
    dropped there.
    """

    def __init__(self, message, stages=None):
        super().__init__(message)
        self.stages = dict(stages or {})


class BudgetExhausted(QuadLinesError):
    """Parameter search used its budget without a single hit."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats


class ConfigError(QuadLinesError, ValueError):
    """Malformed run configuration."""

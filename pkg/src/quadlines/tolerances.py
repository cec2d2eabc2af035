from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    """Every numerical threshold used by the decision procedures.

    Attributes
    ----------
    b : float
        Scaled residual bound for common roots of the b-system.
    mu : float
        Relative residual bound for accepting a mu root.
    r : float
        Certification floor for the imaginary-norm oracle, multiplied by
        ``1 + |a|_inf^2``.
    eq : float
        Scaled tolerance for the "not equal" hypothesis tests.
    residual : float
        Bound on the nine line coefficients (times the line scale).
    membership : float
        Bound on direction membership values in the intersecting-line scan.
    rank : float
        Minimum sigma_3 / sigma_1 accepted as full Jacobian rank.
    s2 : float
        Relative disagreement between the two s^2 values that marks a mu
        candidate as inconsistent.
    """

    b: float = 1e-9
    mu: float = 1e-8
    r: float = 1e-8
    eq: float = 1e-10
    residual: float = 1e-8
    membership: float = 1e-7
    rank: float = 1e-6
    s2: float = 1e-7

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not value > 0:
                raise ValueError(f"tolerance {f.name} must be positive, got {value!r}")

    def with_overrides(self, **overrides):
        return replace(self, **overrides)

    @classmethod
    def names(cls):
        return [f.name for f in fields(cls)]


DEFAULT = Tolerances()

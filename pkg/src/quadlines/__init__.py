"""Lines on the intersection of three quadrics in six variables.

The level set ``{sum x_i^2 = d1, x1 x4 + x2 x5 + x3 x6 = d2,
sum c_i x_i^2 = d3}`` is analysed for smoothness, an explicit family of
complex lines on it is constructed, and those lines are certified free of
real points.
"""

from .certify import RealnessCertificate, certify_no_real_points, min_imaginary_norm
from .line import ComplexLine, construct_line
from .quadrics import QuadricParams
from .scan import SearchSpec, parameter_search, scan_intersecting_lines
from .smoothness import analyze_smoothness, complex_smoothness, real_smoothness
from .tolerances import DEFAULT, Tolerances

__all__ = [
    "ComplexLine", "DEFAULT", "QuadricParams", "RealnessCertificate", "SearchSpec", "Tolerances",
    "analyze_smoothness", "certify_no_real_points", "complex_smoothness", "construct_line",
    "min_imaginary_norm", "parameter_search", "real_smoothness", "scan_intersecting_lines",
]

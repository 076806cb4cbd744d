"""
Kernel sizes s for the four kernelizations, in exact rational arithmetic.
"""
import math
from fractions import Fraction
from typing import Union

from src.graph.problems import ProblemKind
from src.utils.errors import InvalidInputError

Rational = Union[Fraction, int, float, str]


def parse_epsilon(value: Rational) -> Fraction:
    """
    Read ε as an exact fraction; floats go through their decimal text ("0.1" stays 1/10).

    Raises:
        InvalidInputError: If the value is not a positive rational
    """
    try:
        epsilon = Fraction(str(value)) if isinstance(value, float) else Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise InvalidInputError(f"epsilon {value!r} is not a rational number") from e
    if epsilon <= 0:
        raise InvalidInputError(f"epsilon must be positive, got {epsilon}")
    return epsilon


def kernel_size(kind: ProblemKind, epsilon: Rational, tw: int, delta: int) -> int:
    """
    Kernel size s of the kernelization for kind.

    Args:
        kind: DS, CapDS, IDS or CDS
        epsilon: Approximation slack, positive
        tw: Width of the decomposition in use
        delta: Maximum degree

    Returns:
        Ceiling of the kind's formula
    """
    kind = ProblemKind(kind)
    epsilon = parse_epsilon(epsilon)
    slack = (1 + epsilon) / epsilon
    if kind == ProblemKind.DS:
        value = 2 * slack * (tw + 1) * (delta + 1)
    elif kind in (ProblemKind.CAPDS, ProblemKind.IDS):
        value = 3 * slack * (tw + 1) * (delta + 1) ** 2
    elif kind == ProblemKind.CDS:
        value = 4 * slack * (delta + 1) * (tw + 1) + (2 * delta + 2) * slack
    else:
        raise InvalidInputError(f"no kernelization for {kind.value}")
    return math.ceil(value)


def query_cap(kind: ProblemKind, s: int) -> int:
    """Largest oracle query a kernelization with kernel size s makes: 2s, plus the gadget vertex for CDS."""
    return 2 * s + 1 if ProblemKind(kind) == ProblemKind.CDS else 2 * s

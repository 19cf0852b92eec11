"""Text formatting for DoF values and rates."""

from fractions import Fraction


def format_rational(value: Fraction | int | None) -> str:
    """Render a DoF value as an integer or p/q, or "unknown" when absent."""
    if value is None:
        return "unknown"
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_rate(value: float) -> str:
    """Six significant digits."""
    return f"{value:.6g}"

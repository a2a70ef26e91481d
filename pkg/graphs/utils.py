import datetime
import math
from fractions import Fraction
from typing import List, Sequence, Union

Number = Union[int, float, str, Fraction]


def to_fraction(value: Number) -> Fraction:
    """
    Convert a user-facing number to an exact rational

    Parameters:
    - value: int, Fraction, decimal string ("0.125"), ratio string ("1/8") or float

    Returns:
    - Fraction (floats are read through their decimal repr, so 0.125 -> 1/8)
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(str(value).strip())


def format_fraction(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)


def round_half_up(value: Fraction) -> int:
    """
    Round an exact rational to the nearest integer, halves going up

    Parameters:
    - value: Fraction

    Returns:
    - Nearest integer
    """
    return math.floor(value + Fraction(1, 2))


def ceil_fraction(value: Fraction) -> int:
    return -((-value.numerator) // value.denominator)


def apportion(total: int, weights: Sequence[Number]) -> List[int]:
    """
    Largest-remainder apportionment of an integer total

    Parameters:
    - total: integer to split
    - weights: nonnegative weights (need not sum to 1)

    Returns:
    - Integer parts summing to total; ties on the remainder go to the earlier index
    """
    ws = [to_fraction(w) for w in weights]
    if total < 0 or any(w < 0 for w in ws):
        raise ValueError("apportionment needs a nonnegative total and weights")
    s = sum(ws)
    if s == 0:
        raise ValueError("apportionment weights sum to zero")
    quotas = [total * w / s for w in ws]
    parts = [math.floor(q) for q in quotas]
    left = total - sum(parts)
    order = sorted(range(len(ws)), key=lambda i: (-(quotas[i] - parts[i]), i))
    for i in order[:left]:
        parts[i] += 1
    return parts


def timestamp_to_date(timestamp):
    """
    Convert timestamp to human-readable date

    Parameters:
    - timestamp: Unix timestamp in seconds

    Returns:
    - ISO-8601 UTC date string
    """
    return datetime.datetime.fromtimestamp(timestamp, tz=datetime.timezone.utc).strftime('%Y-%m-%dT%H:%M:%SZ')

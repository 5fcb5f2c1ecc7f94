"""JSON helpers: exact integers and rationals survive the round trip.

Integers beyond 2**53 are written as decimal strings; rationals are written
as ``"num/den"`` strings. Readers accept ints, integral floats and those
string forms.
"""

import json
from fractions import Fraction

from .errors import InvalidInput

SAFE_INT = 2**53


def encode(obj):
    """Recursively convert a payload into JSON-safe primitives."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj if abs(obj) <= SAFE_INT else str(obj)
    if isinstance(obj, Fraction):
        if obj.denominator == 1:
            return encode(obj.numerator)
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, float):
        return obj
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return [encode(v) for v in sorted(obj)]
    if hasattr(obj, "to_json"):
        return encode(obj.to_json())
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj, **kw) -> str:
    return json.dumps(encode(obj), sort_keys=True, **kw)


def to_int(x) -> int:
    if isinstance(x, bool):
        raise InvalidInput(f"expected integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, float) and x.is_integer():
        return int(x)
    if isinstance(x, str):
        try:
            return int(x.strip())
        except ValueError:
            pass
    raise InvalidInput(f"expected integer, got {x!r}")


def to_rational(x) -> Fraction:
    if isinstance(x, bool):
        raise InvalidInput(f"expected rational, got {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float) and x.is_integer():
        return Fraction(int(x))
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError:
            pass
    raise InvalidInput(f"expected exact rational, got {x!r}")


def int_matrix(rows) -> tuple:
    try:
        return tuple(tuple(to_int(x) for x in row) for row in rows)
    except TypeError:
        raise InvalidInput("expected a list of integer rows") from None


def load_file(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: malformed JSON ({exc})") from None
    except OSError as exc:
        raise InvalidInput(f"{path}: {exc.strerror}") from None

"""Exact rational sequences indexed from 1.

A RationalSequence of order N carries values a_1..a_N.  The 1-based
indexing matches the way moment and cumulant sequences are written, so
formulas transcribe directly.  Values serialize as JSON arrays of
"p/q" strings in lowest terms with q > 0.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ValidationError


def frac_to_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def frac_from_str(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"not a rational literal: {s!r}") from exc


class RationalSequence:
    """Immutable 1-based sequence of exact rationals."""

    __slots__ = ("_vals",)

    def __init__(self, values):
        vals = tuple(Fraction(v) for v in values)
        if not vals:
            raise ValidationError("a sequence needs order >= 1")
        self._vals = vals

    @classmethod
    def constant(cls, c, order: int) -> "RationalSequence":
        return cls([Fraction(c)] * order)

    @classmethod
    def unit_vector(cls, index: int, order: int, value=1) -> "RationalSequence":
        vals = [Fraction(0)] * order
        vals[index - 1] = Fraction(value)
        return cls(vals)

    @classmethod
    def from_json(cls, items) -> "RationalSequence":
        return cls([frac_from_str(s) if isinstance(s, str) else Fraction(s) for s in items])

    @property
    def order(self) -> int:
        return len(self._vals)

    @property
    def values(self) -> tuple:
        return self._vals

    def __getitem__(self, n: int) -> Fraction:
        """1-based access: seq[n] is a_n."""
        if not 1 <= n <= len(self._vals):
            raise ValidationError(f"index {n} outside 1..{len(self._vals)}")
        return self._vals[n - 1]

    def __iter__(self):
        return iter(self._vals)

    def __len__(self) -> int:
        return len(self._vals)

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalSequence):
            return self._vals == other._vals
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._vals)

    def __repr__(self) -> str:
        return f"RationalSequence({list(self._vals)!r})"

    def prefix(self, order: int) -> "RationalSequence":
        if order > len(self._vals):
            raise ValidationError(
                f"sequence of order {len(self._vals)} cannot be truncated to {order}"
            )
        return RationalSequence(self._vals[:order])

    def scale(self, t) -> "RationalSequence":
        t = Fraction(t)
        return RationalSequence([t * v for v in self._vals])

    def add(self, other: "RationalSequence") -> "RationalSequence":
        n = min(len(self._vals), len(other._vals))
        return RationalSequence([self._vals[i] + other._vals[i] for i in range(n)])

    def to_json(self) -> list:
        return [frac_to_str(v) for v in self._vals]

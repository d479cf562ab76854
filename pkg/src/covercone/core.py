"""Subset masks, exact rationals, projection vectors, and their file format.

Subsets of the ground set [n] = {1, .., n} are plain ints: bit (i-1) is set
iff element i belongs to the subset.  All scalar arithmetic is exact, on
``fractions.Fraction``.  Logarithms and exponentials, when needed, are
evaluated with ``decimal`` at a fixed number of significant digits and
converted back to exact rationals, so no binary floating point enters any
computation.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterator, Mapping

MAX_DIMENSION = 16

#: significant digits used whenever a log or exp has to be evaluated
LOG_DIGITS = 30


class FormatError(ValueError):
    """A JSON artifact file violates its declared format."""


# ---------------------------------------------------------------------------
# rationals

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or an integer string; decimal floats are rejected."""
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise FormatError(f"malformed rational {text!r} (expected 'p/q' or integer)")
    num, _, den = text.partition("/")
    if den:
        if int(den) == 0:
            raise FormatError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(num))


def format_rational(q: Fraction) -> str:
    return str(q)


# ---------------------------------------------------------------------------
# high-precision log/exp on exact rationals

def log_fraction(q: Fraction, digits: int = LOG_DIGITS) -> Fraction:
    """Natural log of a positive rational, rounded to `digits` significant
    digits and returned as the exact rational value of that decimal."""
    if q <= 0:
        raise ValueError(f"log of non-positive value {q}")
    with localcontext() as ctx:
        ctx.prec = digits
        d = (Decimal(q.numerator) / Decimal(q.denominator)).ln()
    return Fraction(d)


def exp_fraction(q: Fraction, digits: int = LOG_DIGITS) -> Fraction:
    """exp(q) rounded to `digits` significant digits, as an exact rational."""
    with localcontext() as ctx:
        ctx.prec = digits
        d = (Decimal(q.numerator) / Decimal(q.denominator)).exp()
    return Fraction(d)


# ---------------------------------------------------------------------------
# subset masks

def check_dimension(n: int) -> None:
    if not 1 <= n <= MAX_DIMENSION:
        raise ValueError(f"dimension {n} out of range 1..{MAX_DIMENSION}")


def elements(mask: int) -> list[int]:
    """The 1-based elements of a subset mask, ascending."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def format_subset(mask: int) -> str:
    return ",".join(str(i) for i in elements(mask))


def parse_subset(text: str, n: int, allow_empty: bool = False) -> int:
    """Parse a comma-separated, strictly ascending element list into a mask."""
    text = text.strip()
    if text == "":
        if allow_empty:
            return 0
        raise FormatError("empty subset not allowed here")
    mask = 0
    prev = 0
    for token in text.split(","):
        try:
            e = int(token)
        except ValueError:
            raise FormatError(f"bad element {token!r} in subset {text!r}") from None
        if e <= prev:
            raise FormatError(f"elements of {text!r} must be strictly ascending")
        if e > n:
            raise FormatError(f"element {e} exceeds dimension {n}")
        mask |= 1 << (e - 1)
        prev = e
    return mask


def subsets_of(ground: int, include_empty: bool = False) -> Iterator[int]:
    """All submasks of `ground` (nonempty unless include_empty)."""
    sub = ground
    while sub:
        yield sub
        sub = (sub - 1) & ground
    if include_empty:
        yield 0


def canonical_subset_order(n: int) -> list[int]:
    """All 2^n - 1 nonempty masks sorted by (popcount, bits).

    This is a linear extension of the subset order in the sense needed
    downstream: a later set is never a proper subset of an earlier one.
    """
    check_dimension(n)
    return sorted(range(1, 1 << n), key=lambda m: (m.bit_count(), m))


# ---------------------------------------------------------------------------
# projection vectors

@dataclass(frozen=True, eq=True)
class ProjectionVector:
    """Exact rational coordinates x_A indexed by the nonempty A subset [n].

    Complete: every nonempty mask is present in `entries`.
    """

    n: int
    entries: Mapping[int, Fraction]

    def __post_init__(self) -> None:
        check_dimension(self.n)
        expected = (1 << self.n) - 1
        if len(self.entries) != expected:
            raise ValueError(
                f"projection vector needs {expected} entries, got {len(self.entries)}"
            )
        for mask in self.entries:
            if not 0 < mask < (1 << self.n):
                raise ValueError(f"mask {mask} out of range for n={self.n}")

    @classmethod
    def zero(cls, n: int) -> "ProjectionVector":
        return cls.from_entries(n, {})

    @classmethod
    def from_entries(cls, n: int, entries: Mapping[int, Fraction]) -> "ProjectionVector":
        """Build a complete vector; absent masks default to 0."""
        check_dimension(n)
        full = {m: Fraction(0) for m in range(1, 1 << n)}
        for mask, value in entries.items():
            if not 0 < mask < (1 << n):
                raise ValueError(f"mask {mask} out of range for n={n}")
            full[mask] = Fraction(value)
        return cls(n, full)

    def __getitem__(self, mask: int) -> Fraction:
        return self.entries[mask]

    def shift(self, eps: Fraction) -> "ProjectionVector":
        """Add eps to every coordinate."""
        return ProjectionVector(self.n, {m: v + eps for m, v in self.entries.items()})

    def scale(self, q: Fraction) -> "ProjectionVector":
        return ProjectionVector(self.n, {m: v * q for m, v in self.entries.items()})

    def embed(self, n: int) -> "ProjectionVector":
        """Zero-extend into a larger dimension."""
        if n < self.n:
            raise ValueError(f"cannot embed n={self.n} vector into n={n}")
        return ProjectionVector.from_entries(n, dict(self.entries))


def _loads_strict(text: str) -> dict:
    """json.loads that rejects duplicate object keys."""

    def hook(pairs):
        obj = {}
        for key, value in pairs:
            if key in obj:
                raise FormatError(f"duplicate key {key!r}")
            obj[key] = value
        return obj

    try:
        data = json.loads(text, object_pairs_hook=hook)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    return data


def read_vector(text: str) -> ProjectionVector:
    """Parse a vector file; missing subset keys default to 0."""
    data = _loads_strict(text)
    if not isinstance(data, dict) or "n" not in data:
        raise FormatError("vector file must be an object with an 'n' field")
    n = data["n"]
    if not isinstance(n, int):
        raise FormatError("'n' must be an integer")
    check_dimension(n)
    raw = data.get("entries", {})
    if not isinstance(raw, dict):
        raise FormatError("'entries' must be an object")
    entries = {}
    for key, value in raw.items():
        mask = parse_subset(key, n)
        if not isinstance(value, str):
            raise FormatError(f"entry {key!r} must be a rational string")
        entries[mask] = parse_rational(value)
    return ProjectionVector.from_entries(n, entries)


def write_vector(v: ProjectionVector) -> str:
    """Serialize with keys in canonical order; zero entries are explicit."""
    entries = {
        format_subset(mask): format_rational(v[mask])
        for mask in canonical_subset_order(v.n)
    }
    return json.dumps({"n": v.n, "entries": entries}, indent=2)

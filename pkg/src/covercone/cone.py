"""The uniform-cover cone as a finite inequality system, with exact membership.

Every nonempty Y subset [n] contributes one inequality per nontrivial
irreducible uniform cover of Y:  sum_i x_{Y_i} >= k * x_Y.  Reducible covers
add nothing (their inequalities are sums of irreducible ones) and the trivial
cover [Y] is a tautology, so the generator list below is finite and complete
for membership purposes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .core import ProjectionVector, canonical_subset_order, format_subset
from .covers import UniformCover, cover_to_obj, irreducible_covers

#: enumeration guard: desk scale is n <= 6
MAX_CONE_DIMENSION = 6


class CoverInequality:
    """sum over parts of x_{Y_i} >= k * x_Y, as an integer coefficient vector."""

    __slots__ = ("cover", "_coeffs")

    def __init__(self, cover: UniformCover):
        self.cover = cover
        coeffs: dict[int, int] = {}
        for part in cover.parts:
            coeffs[part] = coeffs.get(part, 0) + 1
        coeffs[cover.ground] = coeffs.get(cover.ground, 0) - cover.k
        self._coeffs = tuple(
            (mask, c) for mask, c in sorted(coeffs.items()) if c != 0
        )

    def coefficient_map(self) -> dict[int, int]:
        return dict(self._coeffs)

    def margin(self, v: ProjectionVector) -> Fraction:
        """sum_i v_{Y_i} - k*v_Y; nonnegative iff the inequality holds at v."""
        total = Fraction(0)
        for mask, c in self._coeffs:
            total += c * v[mask]
        return total

    def format_text(self) -> str:
        lhs = " + ".join(f"{c}*{format_subset(m)}" for m, c in self._coeffs if c > 0)
        return f"{lhs} >= {self.cover.k}*{format_subset(self.cover.ground)}"

    def to_obj(self) -> dict:
        return cover_to_obj(self.cover)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoverInequality):
            return NotImplemented
        return self.cover == other.cover

    def __hash__(self) -> int:
        return hash(self.cover)

    def __repr__(self) -> str:
        return f"CoverInequality({self.format_text()})"


@dataclass(frozen=True)
class ConeSystem:
    n: int
    generators: tuple[CoverInequality, ...]

    def h_representation(self) -> str:
        return "\n".join(g.format_text() for g in self.generators)


@dataclass(frozen=True)
class MembershipReport:
    inside: bool
    violated: tuple[CoverInequality, ...]
    tight: tuple[CoverInequality, ...]


@lru_cache(maxsize=None)
def build_bt_system(n: int, k_max: Optional[int] = None) -> ConeSystem:
    """All nontrivial irreducible cover inequalities over every Y subset [n].

    k_max applies to every ground set and defaults to n.
    """
    if not 1 <= n <= MAX_CONE_DIMENSION:
        raise ValueError(f"cone systems are limited to 1 <= n <= {MAX_CONE_DIMENSION}")
    if k_max is None:
        k_max = n
    generators = []
    for ground in canonical_subset_order(n):
        for cover in irreducible_covers(ground, k_max):
            if not cover.trivial:
                generators.append(CoverInequality(cover))
    return ConeSystem(n, tuple(generators))


def membership(system: ConeSystem, v: ProjectionVector) -> MembershipReport:
    """Exact evaluation of every generator; inside iff none is violated."""
    if v.n != system.n:
        raise ValueError(f"vector dimension {v.n} != system dimension {system.n}")
    violated = []
    tight = []
    for g in system.generators:
        m = g.margin(v)
        if m < 0:
            violated.append(g)
        elif m == 0:
            tight.append(g)
    return MembershipReport(not violated, tuple(violated), tuple(tight))

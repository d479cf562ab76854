"""Uniform covers of a ground set: enumeration, decomposition, irreducibility.

A k-uniform cover of a ground set Y is a multiset of nonempty subsets of Y
in which every element of Y lies in exactly k parts.  A cover is irreducible
when no proper nonempty sub-multiset has uniform coverage (such a sub-cover
and its complement would decompose the cover into two uniform covers whose
multiplicities add up to k).
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .core import FormatError, MAX_DIMENSION, _loads_strict, format_subset, parse_subset, subsets_of

#: guard against runaway enumerations: k_max * |ground| parts at most
COVER_PART_LIMIT = 64


class ResourceLimitError(RuntimeError):
    """Enumeration would exceed the configured resource bound."""


def _part_key(mask: int) -> tuple[int, int]:
    return (mask.bit_count(), mask)


@dataclass(frozen=True)
class UniformCover:
    """A k-uniform cover; parts are kept sorted by (size, bits)."""

    ground: int
    k: int
    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.ground == 0:
            raise ValueError("ground set must be nonempty")
        if not self.parts:
            raise ValueError("cover needs at least one part")
        if list(self.parts) != sorted(self.parts, key=_part_key):
            raise ValueError("parts not in canonical order")
        counts = _coverage(self.ground, self.parts)
        for part in self.parts:
            if part == 0 or part & ~self.ground:
                raise ValueError(f"part {format_subset(part)} not a nonempty subset of ground")
        if any(c != self.k for c in counts):
            raise ValueError("cover is not uniform with the stated multiplicity")

    @classmethod
    def from_parts(cls, ground: int, parts) -> "UniformCover":
        """Build a cover from an unordered part multiset; k is inferred."""
        parts = tuple(sorted(parts, key=_part_key))
        counts = _coverage(ground, parts)
        if not counts or len(set(counts)) != 1 or counts[0] == 0:
            raise ValueError("part multiset does not cover the ground uniformly")
        return cls(ground, counts[0], parts)

    @property
    def trivial(self) -> bool:
        """The singleton cover [Y] with k = 1, whose inequality is x_Y >= x_Y."""
        return self.parts == (self.ground,)

    def sort_key(self):
        return (self.k, len(self.parts), tuple(_part_key(p) for p in self.parts))


def _coverage(ground: int, parts) -> list[int]:
    """Per-element coverage counts, in ascending element order."""
    counts = []
    e = 0
    g = ground
    while g:
        if g & 1:
            bit = 1 << e
            counts.append(sum(1 for p in parts if p & bit))
        g >>= 1
        e += 1
    return counts


def enumerate_covers(ground: int, k_max: int, part_limit: int = COVER_PART_LIMIT) -> list[UniformCover]:
    """All k-uniform covers of `ground` with k <= k_max, duplicate-free.

    Depth-first search over sorted part multisets with per-element coverage
    pruning; a k-uniform cover has at most k*|ground| parts, so termination
    is automatic.
    """
    if ground == 0:
        raise ValueError("ground set must be nonempty")
    if k_max < 1:
        raise ValueError("k_max must be positive")
    size = ground.bit_count()
    if k_max * size > part_limit:
        raise ResourceLimitError(
            f"k_max={k_max} on a {size}-element ground exceeds the part limit {part_limit}"
        )
    out: list[UniformCover] = []
    for k in range(1, k_max + 1):
        out.extend(_covers_exact(ground, k))
    out.sort(key=UniformCover.sort_key)
    return out


def _covers_exact(ground: int, k: int) -> list[UniformCover]:
    subs = sorted(subsets_of(ground), key=_part_key)
    union_from = [0] * (len(subs) + 1)
    for i in range(len(subs) - 1, -1, -1):
        union_from[i] = union_from[i + 1] | subs[i]
    bits = [1 << e for e in range(MAX_DIMENSION) if ground >> e & 1]
    found: list[UniformCover] = []
    cover_count: dict[int, int] = {b: 0 for b in bits}
    parts: list[int] = []

    def dfs(idx: int) -> None:
        need = 0
        for b in bits:
            if cover_count[b] < k:
                need |= b
        if need == 0:
            found.append(UniformCover(ground, k, tuple(parts)))
            return
        if idx == len(subs) or (need & union_from[idx]) != need:
            return
        s = subs[idx]
        cap = min(k - cover_count[b] for b in bits if s & b)
        for c in range(cap + 1):
            if c:
                parts.append(s)
                for b in bits:
                    if s & b:
                        cover_count[b] += 1
            dfs(idx + 1)
        if cap:
            del parts[-cap:]
            for b in bits:
                if s & b:
                    cover_count[b] -= cap

    dfs(0)
    return found


def decompose(cover: UniformCover) -> Optional[tuple[UniformCover, UniformCover]]:
    """Split into two uniform covers of the same ground, or None if irreducible.

    Searches proper nonempty sub-multisets for uniform coverage k' with
    1 <= k' <= k//2 (the complement is then (k-k')-uniform).  Deterministic:
    distinct parts in canonical order, higher multiplicities tried first.
    """
    sub = _uniform_subcover(cover)
    if sub is None:
        return None
    remaining = Counter(cover.parts)
    remaining.subtract(Counter(sub))
    complement = tuple(remaining.elements())
    return (
        UniformCover.from_parts(cover.ground, sub),
        UniformCover.from_parts(cover.ground, complement),
    )


def _uniform_subcover(cover: UniformCover) -> Optional[tuple[int, ...]]:
    distinct = sorted(Counter(cover.parts).items(), key=lambda it: _part_key(it[0]))
    total = len(cover.parts)
    bits = [1 << e for e in range(MAX_DIMENSION) if cover.ground >> e & 1]
    for kp in range(1, cover.k // 2 + 1):
        cover_count = {b: 0 for b in bits}
        chosen: list[int] = []

        def dfs(i: int) -> bool:
            if i == len(distinct):
                return (
                    all(cover_count[b] == kp for b in bits)
                    and 0 < len(chosen) < total
                )
            part, mult = distinct[i]
            cap = min(mult, min(kp - cover_count[b] for b in bits if part & b))
            for c in range(cap, -1, -1):
                for b in bits:
                    if part & b:
                        cover_count[b] += c
                chosen.extend([part] * c)
                if dfs(i + 1):
                    return True
                del chosen[len(chosen) - c:]
                for b in bits:
                    if part & b:
                        cover_count[b] -= c
            return False

        if dfs(0):
            return tuple(chosen)
    return None


@lru_cache(maxsize=None)
def _irreducible_covers_cached(ground: int, k_max: int) -> tuple[UniformCover, ...]:
    return tuple(c for c in enumerate_covers(ground, k_max) if decompose(c) is None)


def irreducible_covers(ground: int, k_max: Optional[int] = None) -> list[UniformCover]:
    """The covers in enumerate_covers output admitting no decomposition.

    k_max defaults to |ground| (no new irreducible covers appear above that
    for the ground sizes this artifact targets; validated by tests).
    """
    if k_max is None:
        k_max = max(ground.bit_count(), 1)
    return list(_irreducible_covers_cached(ground, k_max))


# ---------------------------------------------------------------------------
# cover file format

def cover_to_json(cover: UniformCover) -> str:
    return json.dumps(cover_to_obj(cover))


def cover_to_obj(cover: UniformCover) -> dict:
    return {
        "ground": format_subset(cover.ground),
        "k": cover.k,
        "parts": [format_subset(p) for p in cover.parts],
    }


def cover_from_json(text: str) -> UniformCover:
    return cover_from_obj(_loads_strict(text))


def cover_from_obj(data: dict) -> UniformCover:
    if not isinstance(data, dict):
        raise FormatError("cover file must be a JSON object")
    for field in ("ground", "k", "parts"):
        if field not in data:
            raise FormatError(f"cover file missing {field!r}")
    ground = parse_subset(data["ground"], MAX_DIMENSION)
    k = data["k"]
    if not isinstance(k, int) or k < 1:
        raise FormatError("'k' must be a positive integer")
    if not isinstance(data["parts"], list):
        raise FormatError("'parts' must be a list")
    parts = [parse_subset(p, MAX_DIMENSION) for p in data["parts"]]
    try:
        cover = UniformCover.from_parts(ground, parts)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    if cover.k != k:
        raise FormatError(f"stated k={k} but the parts form a {cover.k}-uniform cover")
    return cover

"""Realize strictly interior cone vectors as box-union bodies, after scaling.

Given v satisfying every nontrivial irreducible cover inequality strictly,
some multiple lambda*v is the log projection vector of a finite union of
boxes.  The construction walks the nonempty subsets S of [n] from largest to
smallest; at each step it solves a small linear system for the sidelengths of
a box living in Span(S), subtracts that box's projection volumes from the
running targets, and finally places all boxes disjointly.  lambda is found by
doubling; failure at the cap is inconclusive, never a non-realizability claim.

All volume bookkeeping is exact rational; logs/exps are evaluated at
LOG_DIGITS significant digits, and a final exact rescale of one side makes
each step consume its ground target exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .boxgeom import Box, BoxUnionBody, disjoint_offset, projection_volume
from .cone import ConeSystem, build_bt_system, membership
from .core import (
    LOG_DIGITS,
    ProjectionVector,
    canonical_subset_order,
    elements,
    exp_fraction,
    format_subset,
    log_fraction,
    subsets_of,
)
from .covers import irreducible_covers
from .simplex import EQ, GE, LE, INFEASIBLE, OPTIMAL, LinearProgramBuilder

DEFAULT_LAMBDA_CAP = 1024
DEFAULT_TOLERANCE = Fraction(1, 10**6)

#: slack for the exact identity checks on LP output (theorem assertions)
_IDENTITY_TOL = Fraction(1, 10**12)


class NotInConeError(ValueError):
    """The vector is outside the cone, so the operation is undefined."""


class StrictnessError(ValueError):
    """The vector does not satisfy every nontrivial generator strictly."""


class BoxSystemInfeasible(Exception):
    """A step system has no solution; the scaling factor is too small."""

    def __init__(self, ground: int, detail: str = ""):
        self.ground = ground
        msg = f"box system for ground {{{format_subset(ground)}}} is infeasible"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class InconclusiveError(Exception):
    """The doubling search hit the cap; realizability remains undecided."""

    def __init__(self, lambda_cap: Fraction, last: Optional[BoxSystemInfeasible]):
        self.lambda_cap = lambda_cap
        self.last = last
        super().__init__(
            f"no realization found with lambda <= {lambda_cap}"
            + (f" (last failure: {last})" if last else "")
        )


class MinimalityViolation(RuntimeError):
    """The minimal LP solution failed a product identity it should satisfy."""


@dataclass(frozen=True)
class BoxSystem:
    """One step's targets y and minimal solution z, both in volume space.

    sides maps each element of the ground to the emitted box's extent on that
    axis; z is the induced product map, z_A = prod of sides over A.
    """

    ground: int
    y: dict[int, Fraction]
    z: dict[int, Fraction]
    sides: dict[int, Fraction]


@dataclass(frozen=True)
class RealizationStep:
    ground: int
    system: BoxSystem


@dataclass(frozen=True)
class RealizationResult:
    lam: Fraction
    target: ProjectionVector
    body: BoxUnionBody
    steps: tuple[RealizationStep, ...]
    #: per-subset |log |T_A|  -  lam * target_A|
    residual_report: dict[int, Fraction]
    max_gap: Fraction
    tolerance: Fraction


def interior_shift(v: ProjectionVector, eps: Fraction, system: Optional[ConeSystem] = None) -> ProjectionVector:
    """w_A = v_A + eps.  Every nontrivial irreducible cover has more parts
    than its multiplicity, so each generator's margin grows by (l-k)*eps > 0
    and w is strictly interior."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if system is None:
        system = build_bt_system(v.n)
    report = membership(system, v)
    if not report.inside:
        raise NotInConeError(
            f"vector violates {len(report.violated)} generator(s), e.g. "
            + report.violated[0].format_text()
        )
    return v.shift(eps)


def solve_box_system(
    ground: int,
    y: Mapping[int, Fraction],
    digits: int = LOG_DIGITS,
) -> BoxSystem:
    """Minimal solution of the step system for `ground` with targets `y`.

    In log space the constraints are linear:
      (i)   z_A <= y_A                       for all nonempty A subset ground
      (ii)  z_A <= prod of singleton z's     for |A| >= 2
      (iii) y_ground^k <= prod over parts z  for each irreducible cover
    Stage 1 solves the sum-minimizing LP over all z_A and asserts the product
    identities any minimal solution must satisfy; stage 2 picks the balanced
    point of the (degenerate) optimal face by minimizing the largest
    singleton, which makes symmetric inputs yield symmetric sides.
    """
    members = sorted(subsets_of(ground), key=lambda m: (m.bit_count(), m))
    for a in members:
        if a not in y:
            raise ValueError(f"missing target for subset {{{format_subset(a)}}}")
        if y[a] <= 0:
            raise BoxSystemInfeasible(ground, f"target for {{{format_subset(a)}}} is not positive")
    m = ground.bit_count()
    singles = [1 << (e - 1) for e in elements(ground)]
    if m == 1:
        vol = Fraction(y[ground])
        return BoxSystem(ground, {ground: vol}, {ground: vol}, {elements(ground)[0]: vol})

    eta = {a: log_fraction(Fraction(y[a]), digits) for a in members}
    covers = irreducible_covers(ground)
    big = 2 * max(abs(e) for e in eta.values()) + 4

    # stage 1: the sum-minimizing LP over all coordinates (variables shifted
    # by `big` so they are nonnegative; the shift provably never binds)
    lp = LinearProgramBuilder()
    for a in members:
        lp.add({a: 1}, LE, eta[a] + big)
    for a in members:
        if a.bit_count() >= 2:
            coeffs = {a: Fraction(1)}
            for s in singles:
                if a & s:
                    coeffs[s] = Fraction(-1)
            lp.add(coeffs, LE, (1 - a.bit_count()) * big)
    for cover in covers:
        coeffs: dict[int, Fraction] = {}
        for part in cover.parts:
            coeffs[part] = coeffs.get(part, 0) + 1
        lp.add(coeffs, GE, cover.k * eta[ground] + len(cover.parts) * big)
    lp.minimize({a: 1 for a in members})
    status, values, objective = lp.solve()
    if status == INFEASIBLE:
        raise BoxSystemInfeasible(ground)
    if status != OPTIMAL:
        raise RuntimeError(f"step LP unexpectedly {status}")
    zeta0 = {a: values[a] - big for a in members}
    for a in members:
        if a.bit_count() >= 2:
            gap = sum(zeta0[s] for s in singles if a & s) - zeta0[a]
            if abs(gap) > _IDENTITY_TOL:
                raise MinimalityViolation(
                    f"minimal solution violates z_A = prod z_i on {{{format_subset(a)}}} by {float(gap):.3g}"
                )
    expected = (1 << (m - 1)) * eta[ground]
    if abs((objective - len(members) * big) - expected) > _IDENTITY_TOL:
        raise MinimalityViolation("sum-minimum differs from 2^(m-1) * log y_ground")

    # stage 2: balance the singleton split on the optimal face
    lp2 = LinearProgramBuilder()
    for a in members:
        if a == ground:
            continue
        coeffs = {s: Fraction(1) for s in singles if a & s}
        lp2.add(coeffs, LE, eta[a] + a.bit_count() * big)
    lp2.add({s: Fraction(1) for s in singles}, EQ, eta[ground] + m * big)
    for s in singles:
        lp2.add({s: Fraction(1), "t": Fraction(-1)}, LE, Fraction(0))
    lp2.minimize({"t": 1})
    status, values, _ = lp2.solve()
    if status != OPTIMAL:
        raise MinimalityViolation(
            "product-form polytope unexpectedly empty while the full system is feasible"
        )
    zeta = {s: values[s] - big for s in singles}

    sides = {e: exp_fraction(zeta[1 << (e - 1)], digits) for e in elements(ground)}
    # exact consumption: rescale one side so the ground product equals y_ground
    last = elements(ground)[-1]
    prod = Fraction(1)
    for e in elements(ground):
        prod *= sides[e]
    sides[last] *= Fraction(y[ground]) / prod

    z: dict[int, Fraction] = {}
    for a in members:
        vol = Fraction(1)
        for e in elements(a):
            vol *= sides[e]
        z[a] = vol
    _check_solution(ground, dict(y), z, covers)
    return BoxSystem(ground, {a: Fraction(y[a]) for a in members}, z, sides)


_SLACK = Fraction(1, 10**15)


def _check_solution(ground, y, z, covers) -> None:
    if z[ground] != y[ground]:
        raise MinimalityViolation("ground target not consumed exactly")
    for a, vol in z.items():
        if vol <= 0:
            raise MinimalityViolation(f"nonpositive volume on {{{format_subset(a)}}}")
        if a != ground and vol > y[a] * (1 + _SLACK):
            raise MinimalityViolation(f"solution exceeds target on {{{format_subset(a)}}}")
    for cover in covers:
        prod = Fraction(1)
        for part in cover.parts:
            prod *= z[part]
        if prod < y[ground] ** cover.k * (1 - _SLACK):
            raise MinimalityViolation(f"cover constraint broken: {cover}")


def realize_vector(
    v: ProjectionVector,
    lam,
    tolerance: Fraction = DEFAULT_TOLERANCE,
    digits: int = LOG_DIGITS,
) -> RealizationResult:
    """Construct a body whose log projection vector is lam*v within tolerance.

    Requires strict inequality on every nontrivial generator; raises
    BoxSystemInfeasible when lam is too small for some step.
    """
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    system = build_bt_system(v.n)
    for g in system.generators:
        if g.margin(v) <= 0:
            raise StrictnessError(f"not strict on {g.format_text()}")

    targets = {a: exp_fraction(lam * v[a], digits) for a in canonical_subset_order(v.n)}
    steps: list[RealizationStep] = []
    raw_boxes: list[Box] = []
    for ground in reversed(canonical_subset_order(v.n)):
        y = {}
        for a in subsets_of(ground):
            if targets[a] <= 0:
                raise BoxSystemInfeasible(ground, "running target became nonpositive")
            y[a] = targets[a] if a == ground else targets[a] / 2
        bs = solve_box_system(ground, y, digits=digits)
        zero = Fraction(0)
        intervals = []
        for axis in range(1, v.n + 1):
            if ground >> (axis - 1) & 1:
                intervals.append((zero, bs.sides[axis]))
            else:
                intervals.append((zero, zero))
        raw_boxes.append(Box(tuple(intervals)))
        steps.append(RealizationStep(ground, bs))
        for a in subsets_of(ground):
            targets[a] -= bs.z[a]

    body = disjoint_offset(raw_boxes)
    report: dict[int, Fraction] = {}
    for a in canonical_subset_order(v.n):
        vol = projection_volume(body, a)
        report[a] = abs(log_fraction(vol, digits) - lam * v[a])
    max_gap = max(report.values())
    if max_gap > tolerance:
        raise RuntimeError(f"realization drifted beyond tolerance: max gap {float(max_gap):.3g}")
    return RealizationResult(lam, v, body, tuple(steps), report, max_gap, tolerance)


def find_lambda(
    v: ProjectionVector,
    eps: Fraction,
    lambda_cap=DEFAULT_LAMBDA_CAP,
    tolerance: Fraction = DEFAULT_TOLERANCE,
    digits: int = LOG_DIGITS,
) -> RealizationResult:
    """Interior-shift when strictness fails, then double lambda from 1.

    Returns the first success; raises InconclusiveError at the cap (never a
    claim of non-realizability) and NotInConeError for vectors outside the
    cone.
    """
    lambda_cap = Fraction(lambda_cap)
    system = build_bt_system(v.n)
    report = membership(system, v)
    if not report.inside:
        raise NotInConeError(
            f"vector violates {len(report.violated)} generator(s), e.g. "
            + report.violated[0].format_text()
        )
    w = v if not report.tight else v.shift(Fraction(eps))
    lam = Fraction(1)
    last: Optional[BoxSystemInfeasible] = None
    while lam <= lambda_cap:
        try:
            return realize_vector(w, lam, tolerance=tolerance, digits=digits)
        except BoxSystemInfeasible as exc:
            last = exc
            lam *= 2
    raise InconclusiveError(lambda_cap, last)

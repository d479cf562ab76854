"""Implication over the cone: nonnegative-combination certificates, separating
witnesses, and violating bodies for candidate linear inequalities.

A candidate  sum alpha_A x_A >= sum beta_B x_B  holds on the whole cone iff
its coefficient vector is a nonnegative combination of the generator
inequalities.  That feasibility question is solved exactly; the Farkas dual
of an infeasible system is a cone vector on which the candidate fails, and
the realization machinery then turns it into an actual box-union body whose
exact projection volumes violate the candidate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Mapping, Union

from .boxgeom import BoxUnionBody, projection_volume
from .cone import ConeSystem, membership
from .core import (
    FormatError,
    ProjectionVector,
    _loads_strict,
    canonical_subset_order,
    check_dimension,
    format_rational,
    format_subset,
    parse_rational,
    parse_subset,
)
from .realize import DEFAULT_LAMBDA_CAP, RealizationResult, find_lambda
from .simplex import INFEASIBLE, OPTIMAL, solve_equality_lp


@dataclass(frozen=True)
class LinearInequality:
    """sum of lhs coefficients * x_A  >=  sum of rhs coefficients * x_B.

    Both sides carry nonnegative coefficients and no subset appears on both
    (common mass is cancelled on construction).
    """

    n: int
    lhs: tuple[tuple[int, Fraction], ...]
    rhs: tuple[tuple[int, Fraction], ...]

    @classmethod
    def from_maps(cls, n: int, lhs: Mapping[int, Fraction], rhs: Mapping[int, Fraction]) -> "LinearInequality":
        check_dimension(n)
        net: dict[int, Fraction] = {}
        for side, sign in ((lhs, 1), (rhs, -1)):
            for mask, coeff in side.items():
                if not 0 < mask < (1 << n):
                    raise ValueError(f"mask {mask} out of range for n={n}")
                coeff = Fraction(coeff)
                if coeff < 0:
                    raise ValueError("coefficients must be nonnegative")
                net[mask] = net.get(mask, Fraction(0)) + sign * coeff
        left = tuple((m, c) for m, c in sorted(net.items()) if c > 0)
        right = tuple((m, -c) for m, c in sorted(net.items()) if c < 0)
        return cls(n, left, right)

    def lhs_map(self) -> dict[int, Fraction]:
        return dict(self.lhs)

    def rhs_map(self) -> dict[int, Fraction]:
        return dict(self.rhs)

    def coefficient_map(self) -> dict[int, Fraction]:
        """lhs minus rhs; the inequality reads coeffs . x >= 0."""
        out = dict(self.lhs)
        for mask, c in self.rhs:
            out[mask] = out.get(mask, Fraction(0)) - c
        return out

    def evaluate(self, v: ProjectionVector) -> Fraction:
        """lhs(v) - rhs(v); negative means v violates the inequality."""
        return sum((c * v[m] for m, c in self.coefficient_map().items()), Fraction(0))

    def format_text(self) -> str:
        def side(terms):
            if not terms:
                return "0"
            return " + ".join(f"{format_rational(c)}*{format_subset(m)}" for m, c in terms)

        return f"{side(self.lhs)} >= {side(self.rhs)}"


@dataclass(frozen=True)
class FarkasCertificate:
    """Nonnegative weights on generator indices reconstructing the target."""

    weights: dict[int, Fraction]


@dataclass(frozen=True)
class SeparatingWitness:
    """A cone vector violating the candidate, scaled to a gap of exactly 1."""

    vector: ProjectionVector
    gap: Fraction


def check_implication(system: ConeSystem, ineq: LinearInequality) -> Union[FarkasCertificate, SeparatingWitness]:
    """Decide whether the candidate is a nonnegative combination of generators.

    Exact rational feasibility; on failure the phase-1 Farkas dual yields the
    separating witness directly.
    """
    if ineq.n != system.n:
        raise ValueError(f"inequality dimension {ineq.n} != system dimension {system.n}")
    order = canonical_subset_order(system.n)
    index = {mask: i for i, mask in enumerate(order)}
    target = [Fraction(0)] * len(order)
    for mask, c in ineq.coefficient_map().items():
        target[index[mask]] = c
    columns = []
    for g in system.generators:
        col = [Fraction(0)] * len(order)
        for mask, c in g.coefficient_map().items():
            col[index[mask]] = Fraction(c)
        columns.append(col)
    rows = [[columns[j][i] for j in range(len(columns))] for i in range(len(order))]
    res = solve_equality_lp(rows, target, [Fraction(0)] * len(columns))

    if res.status == OPTIMAL:
        weights = {j: w for j, w in enumerate(res.x) if w != 0}
        recon = [Fraction(0)] * len(order)
        for j, w in weights.items():
            for i in range(len(order)):
                recon[i] += w * columns[j][i]
        if recon != target:
            raise RuntimeError("certificate failed exact reconstruction")
        return FarkasCertificate(weights)

    if res.status != INFEASIBLE:
        raise RuntimeError(f"implication LP unexpectedly {res.status}")
    y = res.farkas_dual
    gap = sum(yi * ti for yi, ti in zip(y, target))  # = y.target > 0
    entries = {mask: -y[i] / gap for i, mask in enumerate(order)}
    witness = ProjectionVector.from_entries(system.n, entries)
    if not membership(system, witness).inside:
        raise RuntimeError("separating witness failed cone membership")
    value = ineq.evaluate(witness)
    if value != -1:
        raise RuntimeError(f"witness normalization failed: gap {value}")
    return SeparatingWitness(witness, Fraction(1))


@dataclass(frozen=True)
class ViolationReport:
    """A body refuting the candidate, with the exact integer-exponent check.

    The candidate holds iff prod |T_A|^(scale*alpha_A) >= prod |T_B|^(scale*beta_B)
    where scale clears all coefficient denominators; violated means strict <.
    """

    body: BoxUnionBody
    realization: RealizationResult
    shift_eps: Fraction
    exponent_scale: int
    lhs_product: Fraction
    rhs_product: Fraction

    @property
    def violated(self) -> bool:
        return self.lhs_product < self.rhs_product


def violating_body(
    system: ConeSystem,
    ineq: LinearInequality,
    witness: ProjectionVector,
    lambda_cap=DEFAULT_LAMBDA_CAP,
    shift_eps: Fraction | None = None,
) -> ViolationReport:
    """Turn a separating witness into an actual counterexample body.

    The witness is shifted into the strict interior (keeping the candidate
    violated), realized at the first doubling lambda that works, and the
    violation re-verified on exact projection volumes.
    """
    report = membership(system, witness)
    if not report.inside:
        raise ValueError("witness is not in the cone")
    value = ineq.evaluate(witness)
    if value >= 0:
        raise ValueError("witness does not violate the inequality")
    coeff_sum = sum(ineq.coefficient_map().values(), Fraction(0))
    if shift_eps is None:
        if coeff_sum > 0:
            shift_eps = min(Fraction(1), -value / (2 * coeff_sum))
        else:
            shift_eps = Fraction(1)
    shifted = witness.shift(shift_eps)
    if ineq.evaluate(shifted) >= 0:
        raise ValueError(f"shift eps {shift_eps} destroys the violation")

    realization = find_lambda(shifted, shift_eps, lambda_cap)

    scale = lcm(*(c.denominator for _, c in ineq.lhs + ineq.rhs)) if (ineq.lhs or ineq.rhs) else 1
    lhs_product = Fraction(1)
    for mask, c in ineq.lhs:
        lhs_product *= projection_volume(realization.body, mask) ** int(c * scale)
    rhs_product = Fraction(1)
    for mask, c in ineq.rhs:
        rhs_product *= projection_volume(realization.body, mask) ** int(c * scale)
    out = ViolationReport(
        realization.body, realization, shift_eps, scale, lhs_product, rhs_product
    )
    if not out.violated:
        raise RuntimeError("constructed body does not violate the inequality")
    return out


# ---------------------------------------------------------------------------
# file formats

def read_inequality(text: str) -> LinearInequality:
    data = _loads_strict(text)
    if not isinstance(data, dict) or "n" not in data:
        raise FormatError("inequality file must be an object with an 'n' field")
    n = data["n"]
    if not isinstance(n, int):
        raise FormatError("'n' must be an integer")
    check_dimension(n)
    sides = {}
    for name in ("lhs", "rhs"):
        raw = data.get(name, {})
        if not isinstance(raw, dict):
            raise FormatError(f"'{name}' must be an object")
        parsed = {}
        for key, value in raw.items():
            mask = parse_subset(key, n)
            if not isinstance(value, str):
                raise FormatError(f"coefficient for {key!r} must be a rational string")
            coeff = parse_rational(value)
            if coeff < 0:
                raise FormatError(f"coefficient for {key!r} must be nonnegative")
            parsed[mask] = coeff
        sides[name] = parsed
    return LinearInequality.from_maps(n, sides["lhs"], sides["rhs"])


def write_inequality(ineq: LinearInequality) -> str:
    return json.dumps(
        {
            "n": ineq.n,
            "lhs": {format_subset(m): format_rational(c) for m, c in ineq.lhs},
            "rhs": {format_subset(m): format_rational(c) for m, c in ineq.rhs},
        },
        indent=2,
    )


def certificate_to_obj(system: ConeSystem, cert: FarkasCertificate) -> list[dict]:
    """(ground, parts, k, weight) tuples in generator order."""
    out = []
    for j in sorted(cert.weights):
        g = system.generators[j]
        entry = g.to_obj()
        entry["weight"] = format_rational(cert.weights[j])
        out.append(entry)
    return out

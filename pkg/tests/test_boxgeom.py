import json
import random
from fractions import Fraction

import pytest

from conftest import inclusion_exclusion_volume, random_body
from covercone.boxgeom import (
    Box,
    BoxUnionBody,
    axiswise_disjoint,
    disjoint_offset,
    log_projection_vector,
    projection_volume,
    read_body,
    thicken,
    write_body,
)
from covercone.core import FormatError, canonical_subset_order, log_fraction


def box(*pairs):
    return Box(tuple((Fraction(lo), Fraction(hi)) for lo, hi in pairs))


def unit_cube(n):
    return box(*(((0, 1),) * n))


TWO_BOX = BoxUnionBody(2, (box((0, 1), (0, 1)), box((0, 2), (0, Fraction(1, 2)))))


class TestProjectionVolume:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_unit_cube(self, n):
        body = BoxUnionBody(n, (unit_cube(n),))
        for mask in canonical_subset_order(n):
            assert projection_volume(body, mask) == 1

    def test_two_box_overlap(self):
        # oracle: 1 + 1 - 1/2 = 3/2
        assert inclusion_exclusion_volume(TWO_BOX, 0b11) == Fraction(3, 2)
        assert projection_volume(TWO_BOX, 0b11) == Fraction(3, 2)
        assert projection_volume(TWO_BOX, 0b01) == 2
        assert projection_volume(TWO_BOX, 0b10) == 1

    def test_degenerate_segment(self):
        body = BoxUnionBody(2, (box((0, 5), (0, 0)),))
        assert projection_volume(body, 0b11) == 0
        assert projection_volume(body, 0b01) == 5
        assert projection_volume(body, 0b10) == 0

    @pytest.mark.parametrize("n,trials", [(2, 120), (3, 80), (4, 20)])
    def test_matches_inclusion_exclusion(self, n, trials):
        rng = random.Random(n * 1000 + 9)
        for _ in range(trials):
            body = random_body(rng, n, 3)
            for mask in canonical_subset_order(n):
                assert projection_volume(body, mask) == inclusion_exclusion_volume(body, mask)

    def test_monotone_under_union(self):
        rng = random.Random(31)
        for _ in range(40):
            body = random_body(rng, 3, 3)
            bigger = BoxUnionBody(3, body.boxes + (random_body(rng, 3, 1).boxes[0],))
            for mask in canonical_subset_order(3):
                assert projection_volume(bigger, mask) >= projection_volume(body, mask)

    def test_subadditive_and_exact_after_offset(self):
        rng = random.Random(47)
        for _ in range(40):
            a = random_body(rng, 3, 2)
            b = random_body(rng, 3, 2)
            union = BoxUnionBody(3, a.boxes + b.boxes)
            spread = disjoint_offset(a.boxes + b.boxes)
            for mask in canonical_subset_order(3):
                va, vb = projection_volume(a, mask), projection_volume(b, mask)
                assert projection_volume(union, mask) <= va + vb
                total = sum(
                    (projection_volume(BoxUnionBody(3, (bx,)), mask) for bx in spread.boxes),
                    Fraction(0),
                )
                assert projection_volume(spread, mask) == total

    def test_mask_validation(self):
        body = BoxUnionBody(2, (unit_cube(2),))
        with pytest.raises(ValueError):
            projection_volume(body, 0)
        with pytest.raises(ValueError):
            projection_volume(body, 0b100)

    def test_axis_scaling_equivariance(self):
        rng = random.Random(53)
        s = Fraction(7, 3)
        for _ in range(25):
            body = random_body(rng, 3, 3)
            scaled = BoxUnionBody(
                3,
                tuple(
                    Box(((b.intervals[0][0] * s, b.intervals[0][1] * s),) + b.intervals[1:])
                    for b in body.boxes
                ),
            )
            for mask in canonical_subset_order(3):
                factor = s if mask & 0b001 else 1
                assert projection_volume(scaled, mask) == factor * projection_volume(body, mask)


class TestLogProjectionVector:
    def test_unit_cube_zero_vector(self):
        profile = log_projection_vector(BoxUnionBody(3, (unit_cube(3),)))
        assert profile.all_positive
        vector = profile.to_projection_vector()
        assert all(vector[m] == 0 for m in canonical_subset_order(3))

    def test_two_box_logs(self):
        profile = log_projection_vector(TWO_BOX)
        assert profile.volumes == {0b01: 2, 0b10: 1, 0b11: Fraction(3, 2)}
        assert profile.logs[0b01] == log_fraction(Fraction(2))
        assert profile.logs[0b10] == 0
        assert profile.logs[0b11] == log_fraction(Fraction(3, 2))

    def test_zero_projection_flagged(self):
        profile = log_projection_vector(BoxUnionBody(2, (box((0, 5), (0, 0)),)))
        assert not profile.all_positive
        assert profile.logs[0b10] is None
        with pytest.raises(ValueError):
            profile.to_projection_vector()

    def test_axis_scaling_shifts_logs(self):
        body = BoxUnionBody(2, (box((0, 3), (0, 1)),))
        scaled = BoxUnionBody(2, (box((0, 6), (0, 1)),))
        p, q = log_projection_vector(body), log_projection_vector(scaled)
        log2 = log_fraction(Fraction(2))
        for mask in canonical_subset_order(2):
            expected = p.logs[mask] + (log2 if mask & 0b01 else 0)
            assert abs(q.logs[mask] - expected) < Fraction(1, 10**25)


class TestThicken:
    def test_all_projections_positive(self):
        body = BoxUnionBody(3, (box((0, 5), (0, 0), (1, 1)),))
        fat = thicken(body, Fraction(1, 1024))
        assert log_projection_vector(fat).all_positive

    def test_adds_exactly_eps_power(self):
        eps = Fraction(1, 7)
        body = TWO_BOX
        fat = thicken(body, eps)
        for mask in canonical_subset_order(2):
            assert projection_volume(fat, mask) == projection_volume(body, mask) + eps ** mask.bit_count()

    def test_rejects_nonpositive_eps(self):
        with pytest.raises(ValueError):
            thicken(TWO_BOX, Fraction(0))


class TestDisjointOffset:
    def test_two_unit_squares(self):
        body = disjoint_offset((unit_cube(2), unit_cube(2)))
        assert projection_volume(body, 0b01) == 2
        assert projection_volume(body, 0b11) == 2

    def test_single_box_kept_in_place(self):
        b = box((2, 3), (4, 5))
        assert disjoint_offset((b,)).boxes == (b,)

    def test_axiswise_disjoint(self):
        rng = random.Random(61)
        for _ in range(25):
            body = random_body(rng, 3, 4)
            assert axiswise_disjoint(disjoint_offset(body.boxes))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            disjoint_offset((unit_cube(2), unit_cube(3)))


class TestBodyFiles:
    def test_round_trip(self):
        rng = random.Random(71)
        for _ in range(10):
            body = random_body(rng, 3, 3)
            assert read_body(write_body(body)) == body

    def test_example_shape(self):
        data = json.loads(write_body(TWO_BOX))
        assert data == {
            "n": 2,
            "boxes": [
                {"intervals": [["0", "1"], ["0", "1"]]},
                {"intervals": [["0", "2"], ["0", "1/2"]]},
            ],
        }

    @pytest.mark.parametrize(
        "bad",
        [
            '{"n":2,"boxes":[]}',
            '{"n":2,"boxes":[{"intervals":[["0","1"]]}]}',
            '{"n":2,"boxes":[{"intervals":[["1","0"],["0","1"]]}]}',
            '{"n":2,"boxes":[{"intervals":[["0.5","1"],["0","1"]]}]}',
            '{"boxes":[{"intervals":[["0","1"],["0","1"]]}]}',
        ],
    )
    def test_rejects_malformed(self, bad):
        with pytest.raises(FormatError):
            read_body(bad)

    def test_box_validation(self):
        with pytest.raises(ValueError):
            box((1, 0))
        with pytest.raises(ValueError):
            BoxUnionBody(2, ())

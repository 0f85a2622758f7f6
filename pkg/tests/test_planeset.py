#
# Copyright 2021 Jaroslav Chmurny
#
# This file is part of Library of Plane Set Algorithms for Python.
#
# Library of Plane Set Algorithms for Python is free software developed for
# educational and experimental purposes. It is licensed under the Apache
# License, Version 2.0 (the "License"); you may not use this file except
# in compliance with the License. You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#


"""Unit tests for the planelib.planeset module.
"""

from fractions import Fraction
from math import pi

import numpy as np
from pytest import approx, raises

from planelib.errors import DomainError, ParameterError
from planelib.geom import PolyPath
from planelib.planeset import DEPTH_R_CAP, Compound, Gallery, GalleryKind, Region, SequenceKind, SequenceRule
from planelib.planeset import Skeleton, bad_arc_exact_vertices, bad_arc_quotient_exact, blodge_blocks, blodge_vertices
from planelib.planeset import cantor_function, cantor_function_array, cantor_intervals, contains
from planelib.planeset import dented_square_sequences, disc_deletion_discs, extent, gallery_centre
from planelib.planeset import gallery_witnesses, hull, materialize, parse_sequence_rule, require_member
from planelib.planeset import rsa_parameters, sample_set


_UNIT_SQUARE = Region.of([0j, 1 + 0j, 1 + 1j, 1j])


class TestRegion: # pylint: disable=R0201,C0116,C0121
    """Collection of test methods exercising the class :class:
    planelib.planeset.Region.
    """

    def test_closing_vertex_is_dropped(self):
        region = Region.of([0j, 1 + 0j, 1 + 1j, 1j, 0j])
        assert region == _UNIT_SQUARE
        assert len(region.vertices) == 4

    def test_square_is_convex_and_square_with_hole_is_not(self):
        with_hole = Region.of([0j, 3 + 0j, 3 + 3j, 3j], [[1 + 1j, 2 + 1j, 2 + 2j, 1 + 2j]])
        assert _UNIT_SQUARE.is_convex
        assert with_hole.is_convex == False
        assert len(with_hole.vertices) == 8

    def test_l_shaped_region_is_not_convex(self):
        region = Region.of([0j, 2 + 0j, 2 + 1j, 1 + 1j, 1 + 2j, 2j])
        assert region.is_convex == False

    def test_rings_are_oriented_with_region_on_the_left(self):
        clockwise = Region.of([0j, 1j, 1 + 1j, 1 + 0j])
        outer = clockwise.rings[0]
        signed_area = 0.5 * np.sum((np.conj(outer) * np.roll(outer, -1)).imag)
        assert signed_area == approx(1.0)

    def test_attempt_to_create_self_intersecting_region_leads_to_error(self):
        with raises(ParameterError, match=r'Invalid region'):
            Region.of([0j, 1 + 1j, 1 + 0j, 1j])

    def test_attempt_to_create_region_with_two_vertices_leads_to_error(self):
        with raises(ParameterError, match=r'Outer ring needs at least 3 vertices, got 2\.'):
            Region.of([0j, 1 + 0j])


class TestSkeletonAndCompound: # pylint: disable=R0201,C0116
    """Collection of test methods exercising the classes :class:
    planelib.planeset.Skeleton and :class: planelib.planeset.Compound.
    """

    def test_arcs_sharing_vertex_form_skeleton(self):
        skeleton = Skeleton((PolyPath([0j, 1 + 0j]), PolyPath([1 + 0j, 1 + 1j, 2j])))
        assert skeleton.length == approx(2 + 2 ** 0.5)
        assert skeleton.vertices == (0j, 1 + 0j, 1 + 1j, 2j)

    def test_attempt_to_create_disconnected_skeleton_leads_to_error(self):
        with raises(ParameterError, match=r'Skeleton is not connected \(2 components\)\.'):
            Skeleton((PolyPath([0j, 1 + 0j]), PolyPath([2 + 0j, 3 + 0j])))

    def test_region_and_arc_sharing_vertex_form_compound(self):
        compound = Compound((_UNIT_SQUARE, Skeleton((PolyPath([1 + 1j, 2 + 2j]),))))
        assert compound.regions == (_UNIT_SQUARE,)
        assert len(compound.skeletons) == 1
        assert len(compound.vertices) == 5
        assert contains(compound, 1.5 + 1.5j)

    def test_attempt_to_create_disconnected_compound_leads_to_error(self):
        with raises(ParameterError, match=r'do not form a connected set'):
            Compound((_UNIT_SQUARE, Skeleton((PolyPath([3 + 3j, 4 + 4j]),))))


class TestSequenceRules: # pylint: disable=R0201,C0116
    """Collection of test methods exercising the sequence rules of the
    :mod: planelib.planeset module.
    """

    def test_geometric_rule_is_parsed(self):
        rule = parse_sequence_rule('4^-n')
        assert rule.kind == SequenceKind.GEOMETRIC
        assert rule.value(2) == 1 / 16

    def test_power_rule_is_parsed(self):
        rule = parse_sequence_rule('n^-2')
        assert rule.kind == SequenceKind.POWER
        assert rule.value(4) == 1 / 16

    def test_relative_rules_are_parsed_and_need_reference(self):
        assert parse_sequence_rule('2s').value(3, reference=0.125) == 0.25
        assert parse_sequence_rule('ns').value(3, reference=0.125) == 0.375
        assert parse_sequence_rule('sqrt').value(3, reference=0.25) == 0.5
        with raises(ParameterError, match=r'needs a reference value'):
            parse_sequence_rule('s').value(1)

    def test_constant_rule_is_parsed_from_text_and_number(self):
        assert parse_sequence_rule('0.5') == SequenceRule(SequenceKind.CONST, scale=0.5)
        assert parse_sequence_rule(0.25).value(7) == 0.25

    def test_json_rule_is_parsed(self):
        rule = parse_sequence_rule({'rule': 'table', 'values': [0.5, 0.3, 0.1]})
        assert rule.value(2) == 0.3
        assert parse_sequence_rule(rule.to_json()) == rule

    def test_table_index_out_of_range_leads_to_error(self):
        rule = parse_sequence_rule({'rule': 'table', 'values': [0.5]})
        with raises(ParameterError, match=r'Table sequence has 1 values, index 2 requested\.'):
            rule.value(2)

    def test_attempt_to_parse_invalid_rule_leads_to_error(self):
        with raises(ParameterError, match=r'Cannot parse sequence rule "n\^n"\.'):
            parse_sequence_rule('n^n')
        with raises(ParameterError, match=r'Unknown sequence rule: fibonacci\.'):
            parse_sequence_rule({'rule': 'fibonacci'})
        with raises(ParameterError, match=r'Geometric base must be greater than 1'):
            parse_sequence_rule('1^-n')


class TestGallery: # pylint: disable=R0201,C0116
    """Collection of test methods exercising the class :class:
    planelib.planeset.Gallery and the materialization of the constructions.
    """

    def test_missing_parameters_take_defaults(self):
        gallery = Gallery(GalleryKind.DENTED_SQUARE, {'r': 'ns'}, 3)
        assert gallery.param('r') == 'ns'
        assert gallery.param('s') == '2^-n'
        assert gallery.with_depth(5).depth == 5

    def test_attempt_to_create_gallery_with_invalid_depth_leads_to_error(self):
        with raises(ParameterError, match=r'Gallery depth must be a positive integer, got 0\.'):
            Gallery(GalleryKind.KOCH_ARC, {}, 0)

    def test_attempt_to_create_gallery_with_unknown_parameter_leads_to_error(self):
        with raises(ParameterError, match=r'Unknown parameters for koch-arc: colour\.'):
            Gallery(GalleryKind.KOCH_ARC, {'colour': 'red'}, 1)

    def test_every_construction_materializes(self):
        for kind in GalleryKind:
            materialized = Gallery(kind, {}, 3).materialize()
            assert isinstance(materialized, (Region, Skeleton, Compound))
            assert contains(materialized, gallery_centre(Gallery(kind, {}, 3)))

    def test_dented_square_has_rectangular_dents(self):
        region = materialize(GalleryKind.DENTED_SQUARE, {}, 2)
        assert isinstance(region, Region)
        assert contains(region, 0.25 + 0.4j, tol=0) is False
        assert contains(region, 0.75 + 0.4j, tol=0)
        assert contains(region, 0.25 + 0.7j, tol=0)

    def test_dented_square_ring_has_four_corners_per_dent(self):
        region = materialize(GalleryKind.DENTED_SQUARE, {}, 2)
        assert len(region.outer) == 4 + 4 * 2
        assert region.outer[:5] == (0j, 1 + 0j, 1 + 1j, 1j, 0.5j)
        assert region.outer[-1] == 0.0625j

    def test_dent_depths_are_capped(self):
        r, s = dented_square_sequences(Gallery(GalleryKind.DENTED_SQUARE, {'r': '2s'}, 2))
        assert list(r) == [DEPTH_R_CAP, 0.25]
        assert list(s) == [0.5, 0.25, 0.125, 0.0625]

    def test_dented_square_witnesses_are_dent_corners(self):
        witnesses = gallery_witnesses(Gallery(GalleryKind.DENTED_SQUARE, {}, 3))
        assert witnesses == (0.5j, 0.125j, 0.03125j)

    def test_non_decreasing_dent_heights_lead_to_error(self):
        with raises(ParameterError, match=r'Sequence s must be strictly decreasing\.'):
            materialize(GalleryKind.DENTED_SQUARE, {'s': '0.5'}, 2)

    def test_relative_dent_heights_lead_to_error(self):
        with raises(ParameterError, match=r'Sequence s of the dented square cannot be relative\.'):
            materialize(GalleryKind.DENTED_SQUARE, {'s': 's'}, 2)

    def test_radially_self_absorbing_disc_parameters(self):
        r_1, w_1, z_1, a_1 = rsa_parameters(1)
        assert r_1 == 0.25
        assert w_1 == approx(complex(np.cos(pi / 4), np.sin(pi / 4)))
        assert abs(z_1) == approx(0.5)
        assert abs(a_1) == approx(0.75)
        region = materialize(GalleryKind.RSA_DISC, {'chords': 8}, 3)
        assert contains(region, 1 + 0j)
        assert contains(region, w_1)

    def test_crossed_square_has_two_sides_and_crossings(self):
        skeleton = materialize(GalleryKind.CROSSED_SQUARE, {}, 2)
        assert len(skeleton.arcs) == 6
        assert contains(skeleton, 0.3 + 0.25j)
        assert contains(skeleton, 0.3 + 0.7j) is False

    def test_triangle_arc_junctions(self):
        gallery = Gallery(GalleryKind.TRIANGLE_ARC, {}, 3)
        junctions = blodge_vertices(gallery)
        assert junctions == approx((-0.5 + 0.5j, 0.25 + 0.25j, complex(-1 / 6, 1 / 6)))
        arc = gallery.materialize().arcs[0]
        assert arc.start == 1 + 1j
        assert arc.end == 0j

    def test_constructions_without_junctions_lead_to_error(self):
        with raises(ParameterError, match=r'Construction koch-arc has no block junctions\.'):
            blodge_vertices(Gallery(GalleryKind.KOCH_ARC, {}, 2))

    def test_triangle_arc_blocks_end_in_junctions(self):
        gallery = Gallery(GalleryKind.TRIANGLE_ARC, {}, 3)
        blocks = blodge_blocks(gallery)
        junctions = blodge_vertices(gallery)
        assert len(blocks) == 4
        assert list(blocks[0].arcs[0].points) == [1 + 1j, -1 + 1j, junctions[0]]
        for block, junction in zip(blocks, junctions):
            assert block.arcs[0].end == junction
        for block, junction in zip(blocks[1:], junctions):
            assert block.arcs[0].start == junction
        assert list(blocks[-1].arcs[0].points) == [junctions[-1], 0j]

    def test_fattened_triangle_arc_blocks_pair_crossings_with_runs(self):
        gallery = Gallery(GalleryKind.FATTENED_TRIANGLE_ARC, {}, 2)
        blocks = blodge_blocks(gallery)
        junctions = blodge_vertices(gallery)
        assert len(blocks) == 3
        assert all(isinstance(block, Compound) for block in blocks[:-1])
        assert len(blocks[0].regions) == 1
        assert blocks[0].skeletons[0].arcs[0].end == junctions[0]
        assert blocks[1].skeletons[0].arcs[0].end == junctions[1]
        assert list(blocks[-1].arcs[0].points) == [junctions[1], 0j]

    def test_constructions_without_blocks_lead_to_error(self):
        with raises(ParameterError, match=r'Construction koch-arc is not split into blocks\.'):
            blodge_blocks(Gallery(GalleryKind.KOCH_ARC, {}, 2))

    def test_fattened_triangle_arc_alternates_blocks_and_arcs(self):
        compound = materialize(GalleryKind.FATTENED_TRIANGLE_ARC, {}, 2)
        assert isinstance(compound, Compound)
        assert len(compound.regions) == 2
        assert len(compound.skeletons) == 2

    def test_koch_gallery_depth_is_refinement_level(self):
        skeleton = materialize(GalleryKind.KOCH_ARC, {}, 3)
        assert skeleton.arcs[0].segment_count == 64

    def test_disc_deletion_removes_discs(self):
        gallery = Gallery(GalleryKind.DISC_DELETION, {'chords': 8}, 2)
        discs = disc_deletion_discs(gallery)
        assert discs == ((0.25 + 0j, 0.125), (0.625 + 0j, 0.0625))
        region = gallery.materialize()
        assert len(region.holes) == 2
        assert contains(region, 0.25 + 0j) is False
        assert contains(region, 0.25 + 0.5j)

    def test_intersecting_deleted_discs_lead_to_error(self):
        with raises(ParameterError, match=r'Disc 1 intersects another deleted disc\.'):
            materialize(GalleryKind.DISC_DELETION, {'discs': [[0, 0, 0.3], [0.4, 0, 0.2]]}, 1)


class TestBadArc: # pylint: disable=R0201,C0116
    """Collection of test methods exercising the bad arc construction of the
    :mod: planelib.planeset module.
    """

    def test_exact_vertices_of_first_piece(self):
        half, eighth = Fraction(1, 2), Fraction(1, 8)
        zero = Fraction(0)
        assert bad_arc_exact_vertices(1) == (
            (half, zero), (half, half), (half - eighth, half), (half - eighth, zero), (Fraction(1, 4), zero))

    def test_exact_quotients_follow_closed_formula(self):
        for n in range(1, 8):
            assert bad_arc_quotient_exact(n) == Fraction(2 ** (2 * n - 1) * (n + 2), n * (n + 1))

    def test_attempt_to_get_piece_with_non_positive_index_leads_to_error(self):
        with raises(ParameterError, match=r'Piece index must be positive, got 0\.'):
            bad_arc_exact_vertices(0)


class TestCantor: # pylint: disable=R0201,C0116
    """Collection of test methods exercising the Cantor function and the
    Cantor intervals.
    """

    def test_exact_values_of_cantor_function(self):
        assert cantor_function(Fraction(1, 3)) == Fraction(1, 2)
        assert cantor_function(Fraction(2, 3)) == Fraction(1, 2)
        assert cantor_function(Fraction(1, 4)) == Fraction(1, 3)
        assert cantor_function(Fraction(3, 4)) == Fraction(2, 3)
        assert cantor_function(1) == Fraction(1)
        assert cantor_function(0) == Fraction(0)

    def test_float_values_of_cantor_function(self):
        assert isinstance(cantor_function(0.25), float)
        assert cantor_function(0.25) == approx(1 / 3)
        assert cantor_function_array(np.array([0.0, 0.25, 0.5, 1.0])) == approx(np.array([0.0, 1 / 3, 0.5, 1.0]))

    def test_cantor_function_outside_unit_interval_leads_to_error(self):
        with raises(DomainError, match=r'Cantor function is defined on \[0, 1\], got 2\.'):
            cantor_function(2)

    def test_complementary_intervals_are_sorted_by_start(self):
        assert cantor_intervals(2) == [
            (2, Fraction(1, 9), Fraction(2, 9)),
            (1, Fraction(1, 3), Fraction(2, 3)),
            (2, Fraction(7, 9), Fraction(8, 9)),
        ]
        assert len(cantor_intervals(5)) == 31

    def test_cantor_squares_sit_on_the_intervals(self):
        compound = materialize(GalleryKind.CANTOR_SQUARES, {}, 1)
        assert len(compound.regions) == 1
        assert contains(compound, 0.5 + 0.2j)
        assert contains(compound, 0.1 + 0.2j) is False


class TestSetOperations: # pylint: disable=R0201,C0116,C0121
    """Collection of test methods exercising the set operations of the
    :mod: planelib.planeset module.
    """

    def test_boundary_points_belong_to_region(self):
        assert contains(_UNIT_SQUARE, 1 + 0.5j)
        assert contains(_UNIT_SQUARE, 1 + 1e-12 + 0.5j)
        assert contains(_UNIT_SQUARE, 1.1 + 0.5j) == False

    def test_negative_tolerance_leads_to_error(self):
        with raises(ParameterError, match=r'Tolerance must be non-negative, got -1\.'):
            contains(_UNIT_SQUARE, 0j, tol=-1)

    def test_non_member_leads_to_error(self):
        assert require_member(_UNIT_SQUARE, 0.5 + 0.5j) == 0.5 + 0.5j
        with raises(DomainError, match=r'does not belong to the set') as error:
            require_member(_UNIT_SQUARE, 2 + 2j)
        assert error.value.point == 2 + 2j

    def test_hull_fills_holes(self):
        region = materialize(GalleryKind.DISC_DELETION, {'chords': 8}, 2)
        filled = hull(region)
        assert filled.holes == ()
        assert contains(filled, 0.25 + 0j)
        assert hull(filled) is filled

    def test_hull_fills_faces_enclosed_by_arcs(self):
        filled = hull(materialize(GalleryKind.CROSSED_SQUARE, {}, 2))
        assert isinstance(filled, Region)
        assert contains(filled, 0.3 + 0.7j)
        assert filled.polygon.area == approx(1.0)

    def test_hull_of_simple_arc_is_the_arc(self):
        skeleton = materialize(GalleryKind.KOCH_ARC, {}, 2)
        assert hull(skeleton) is skeleton

    def test_extent_is_larger_side_of_bounding_box(self):
        assert extent(Region.of([0j, 2 + 0j, 2 + 1j, 1j])) == 2.0

    def test_samples_are_reproducible_and_belong_to_set(self):
        gallery = Gallery(GalleryKind.DENTED_SQUARE, {}, 3)
        first = sample_set(gallery, 64, seed=7)
        second = sample_set(gallery, 64, seed=7)
        assert np.array_equal(first, second)
        region = gallery.materialize()
        assert len(first) == len(region.vertices) + 64
        assert all(contains(region, z) for z in first)

    def test_skeleton_samples_lie_on_arcs(self):
        skeleton = materialize(GalleryKind.TRIANGLE_ARC, {}, 3)
        samples = sample_set(skeleton, 32)
        assert all(contains(skeleton, z) for z in samples)

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


"""Unit tests for the planelib.geodesic module.
"""

from math import sqrt

from pytest import approx, raises

from planelib.errors import DomainError, ParameterError
from planelib.geodesic import DentedSquareVerdict, bend_candidates, classify_dented_square, geodesic_diameter
from planelib.geodesic import geodesic_distance, grid_geodesic_distance, is_star_centre, regularity_at
from planelib.geodesic import star_centre
from planelib.geom import PolyPath
from planelib.planeset import Gallery, GalleryKind, Region, Skeleton


_UNIT_SQUARE = Region.of([0j, 1 + 0j, 1 + 1j, 1j])

_L_SHAPE = Region.of([0j, 2 + 0j, 2 + 1j, 1 + 1j, 1 + 2j, 2j])

_SQUARE_WITH_HOLE = Region.of([0j, 3 + 0j, 3 + 3j, 3j], [[1 + 1j, 2 + 1j, 2 + 2j, 1 + 2j]])

_U_SHAPE = Region.of([0j, 3 + 0j, 3 + 2j, 2 + 2j, 2 + 1j, 1 + 1j, 1 + 2j, 2j])


class TestGeodesicDistance: # pylint: disable=R0201,C0116
    """Collection of test methods exercising the method :method:
    planelib.geodesic.geodesic_distance.
    """

    def test_geodesic_in_convex_region_is_straight_segment(self):
        result = geodesic_distance(_UNIT_SQUARE, 0j, 1 + 1j)
        assert result.length == approx(sqrt(2))
        assert list(result.path.points) == [0j, 1 + 1j]
        assert result.start == 0j
        assert result.end == 1 + 1j

    def test_geodesic_bends_at_reflex_vertex(self):
        result = geodesic_distance(_L_SHAPE, 1.75 + 0.75j, 0.75 + 1.75j)
        assert result.length == approx(2 * sqrt(0.625))
        assert list(result.path.points) == [1.75 + 0.75j, 1 + 1j, 0.75 + 1.75j]

    def test_geodesic_goes_around_hole(self):
        result = geodesic_distance(_SQUARE_WITH_HOLE, 0.5 + 1.5j, 2.5 + 1.5j)
        assert result.length == approx(1 + sqrt(2))
        assert len(result.path) == 4

    def test_geodesic_is_symmetric(self):
        forward = geodesic_distance(_U_SHAPE, 0.5 + 1.5j, 2.5 + 1.5j)
        backward = geodesic_distance(_U_SHAPE, 2.5 + 1.5j, 0.5 + 1.5j)
        assert forward.length == approx(backward.length)
        assert forward.length == approx(2 * sqrt(0.5) + 1)

    def test_geodesic_in_skeleton_follows_arcs(self):
        skeleton = Skeleton((PolyPath([0j, 1 + 0j, 1 + 1j]),))
        result = geodesic_distance(skeleton, 0.5 + 0j, 1 + 0.5j)
        assert result.length == approx(1.0)
        assert list(result.path.points) == [0.5 + 0j, 1 + 0j, 1 + 0.5j]

    def test_geodesic_between_points_of_the_same_segment_is_direct(self):
        skeleton = Skeleton((PolyPath([0j, 1 + 0j]),))
        assert geodesic_distance(skeleton, 0.25 + 0j, 0.75 + 0j).length == approx(0.5)

    def test_geodesic_in_crossed_square_uses_crossings(self):
        gallery = Gallery(GalleryKind.CROSSED_SQUARE, {}, 2)
        result = geodesic_distance(gallery, 0.2 + 0.25j, 0.2 + 0.5j)
        assert result.length == approx(0.2 + 0.25 + 0.2)

    def test_geodesic_dominates_euclidean_distance(self):
        gallery = Gallery(GalleryKind.DENTED_SQUARE, {'r': 'ns'}, 3)
        z, w = 0.05 + 0.05j, 0.05 + 0.9j
        assert geodesic_distance(gallery, z, w).length > abs(z - w)

    def test_point_outside_set_leads_to_error(self):
        with raises(DomainError, match=r'does not belong to the set') as error:
            geodesic_distance(_UNIT_SQUARE, 0j, 2 + 2j)
        assert error.value.point == 2 + 2j

    def test_coinciding_points_have_zero_distance(self):
        result = geodesic_distance(_UNIT_SQUARE, 0.5 + 0.5j, 0.5 + 0.5j)
        assert result.length == 0.0
        assert result.path is None
        assert list(result.points) == [0.5 + 0.5j]
        assert result.start == result.end == 0.5 + 0.5j

    def test_coinciding_points_outside_set_lead_to_error(self):
        with raises(DomainError, match=r'does not belong to the set') as error:
            geodesic_distance(_UNIT_SQUARE, 2 + 2j, 2 + 2j)
        assert error.value.point == 2 + 2j

    def test_diameter_of_square_is_its_diagonal(self):
        assert geodesic_diameter(_UNIT_SQUARE, sample_budget=16) == approx(sqrt(2))


class TestGridOracle: # pylint: disable=R0201,C0116
    """Collection of test methods exercising the method :method:
    planelib.geodesic.grid_geodesic_distance.
    """

    def test_lattice_aligned_diagonal_is_exact(self):
        length = grid_geodesic_distance(_UNIT_SQUARE, 0.125 + 0.125j, 0.875 + 0.875j, pixel=1 / 64)
        assert length == approx(0.75 * sqrt(2), rel=1e-9)

    def test_grid_oracle_agrees_with_visibility_graph(self):
        z, w = 1.75 + 0.75j, 0.75 + 1.75j
        oracle = grid_geodesic_distance(_L_SHAPE, z, w, pixel=1 / 32)
        assert oracle == approx(geodesic_distance(_L_SHAPE, z, w).length, rel=1e-3)

    def test_snapping_distances_are_added(self):
        length = grid_geodesic_distance(_UNIT_SQUARE, 0.01 + 0.5j, 0.99 + 0.5j, pixel=1 / 16)
        assert length == approx(1.02)

    def test_point_outside_region_leads_to_error(self):
        with raises(DomainError, match=r'does not belong to the set'):
            grid_geodesic_distance(_UNIT_SQUARE, 0j, 1.5 + 0j, pixel=1 / 16)


class TestStarCentre: # pylint: disable=R0201,C0116,C0121
    """Collection of test methods exercising the star-centre helpers of the
    :mod: planelib.geodesic module.
    """

    def test_bend_candidates_are_reflex_vertices_and_hole_vertices(self):
        assert list(bend_candidates(_UNIT_SQUARE)) == []
        assert list(bend_candidates(_L_SHAPE)) == [1 + 1j]
        assert sorted(bend_candidates(_SQUARE_WITH_HOLE), key=lambda z: (z.real, z.imag)) == [
            1 + 1j, 1 + 2j, 2 + 1j, 2 + 2j]

    def test_l_shape_is_star_shaped(self):
        assert is_star_centre(_L_SHAPE, 0.5 + 0.5j)
        assert is_star_centre(_L_SHAPE, 1.5 + 0.5j) == False
        centre = star_centre(_L_SHAPE)
        assert centre is not None
        assert is_star_centre(_L_SHAPE, centre)

    def test_u_shape_has_no_star_centre(self):
        assert star_centre(_U_SHAPE) is None

    def test_region_with_hole_has_no_star_centre(self):
        assert star_centre(_SQUARE_WITH_HOLE) is None
        assert is_star_centre(_SQUARE_WITH_HOLE, 0.5 + 0.5j) == False

    def test_skeleton_has_no_star_centre(self):
        assert star_centre(Gallery(GalleryKind.KOCH_ARC, {}, 1)) is None


class TestRegularity: # pylint: disable=R0201,C0116,C0121
    """Collection of test methods exercising the regularity diagnostics of
    the :mod: planelib.geodesic module.
    """

    def test_quotients_in_convex_region_are_one(self):
        report = regularity_at(_UNIT_SQUARE, 0j, witnesses=[0.5 + 0j, 0.25 + 0.25j, 0.1j])
        assert report.quotients == approx((1.0, 1.0, 1.0))
        assert report.kz_estimate == approx(1.0)
        assert report.verdict == 'bounded'

    def test_witness_equal_to_probe_is_skipped(self):
        report = regularity_at(_UNIT_SQUARE, 0j, witnesses=[0j, 0.5 + 0j])
        assert len(report.samples) == 1

    def test_quotients_around_long_dents_diverge(self):
        report = regularity_at(Gallery(GalleryKind.DENTED_SQUARE, {'r': 'ns'}, 8), 0j)
        assert report.verdict == 'diverging'
        assert report.kz_estimate > 16

    def test_quotients_around_short_dents_stay_bounded(self):
        report = regularity_at(Gallery(GalleryKind.DENTED_SQUARE, {}, 6), 0j)
        assert report.verdict == 'bounded'

    def test_witnesses_are_required_for_plain_sets(self):
        with raises(ParameterError, match=r'Witnesses must be given'):
            regularity_at(_UNIT_SQUARE, 0j)

    def test_ratio_test_classifies_dented_squares(self):
        short = classify_dented_square({'r': 's'}, 12)
        assert short.verdict == DentedSquareVerdict.COMPLETE
        assert short.ratios == approx((1.0,) * 12)
        assert short.verdict.completeness == 'no-divergence-found'
        long = classify_dented_square({'r': 'ns', 's': '4^-n'}, 12)
        assert long.verdict == DentedSquareVerdict.INCOMPLETE
        assert long.ratios == approx(tuple(float(n) for n in range(1, 13)))
        assert long.verdict.completeness == 'incomplete-certified'
        assert classify_dented_square({'r': 'sqrt'}, 12).verdict == DentedSquareVerdict.INCOMPLETE
        assert classify_dented_square({'r': '2s'}, 12).verdict == DentedSquareVerdict.COMPLETE

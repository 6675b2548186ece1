import pytest
from hypothesis import given
from hypothesis import strategies as st

from gridscope.calibration import CameraProfile, CameraRole, build_sub_area
from gridscope.depth import (
    DepthCorrection,
    DepthObservation,
    compute_def,
    correct_side_point,
    final_adjustment,
)
from gridscope.errors import InvalidObservation
from gridscope.geometry import ModelPoint2D, Quad


def obs(ni=100.0, nf=400.0, ic=50.0, sc=200.0):
    return DepthObservation(ni_top=ni, nf_top=nf, ic_ax=ic, sc_ax=sc)


def face_profile(mde_h=120.0, mde_v=260.0):
    """One identity patch covering a 400 x 800 face, centre at (200, 400)."""
    quad = Quad.from_coords([(0, 0), (400, 0), (400, 800), (0, 800)])
    sub = build_sub_area(0, quad, (400, 800), (0.0, 0.0))
    return CameraProfile(
        "side0", CameraRole.side(0), (400, 800), (sub,), mde_h=mde_h, mde_v=mde_v
    )


class TestDepthObservation:
    def test_valid_bounds_inclusive(self):
        obs(ni=0.0)
        obs(ni=400.0)
        obs(ic=0.0)
        obs(ic=200.0)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"nf": 0.0},
            {"nf": -5.0},
            {"ni": -1.0},
            {"ni": 401.0},
            {"sc": 0.0},
            {"ic": -0.5},
            {"ic": 201.0},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidObservation):
            obs(**kwargs)


class TestFactors:
    def test_def_scales_linearly_with_depth(self):
        assert compute_def(120.0, obs(ni=0.0)) == 0.0
        assert compute_def(120.0, obs(ni=200.0)) == 60.0
        assert compute_def(120.0, obs(ni=400.0)) == 120.0

    def test_def_rejects_negative_mde(self):
        with pytest.raises(InvalidObservation):
            compute_def(-1.0, obs())

    def test_adjustment_scales_with_lateral_offset(self):
        assert final_adjustment(60.0, obs(ic=0.0)) == 0.0
        assert final_adjustment(60.0, obs(ic=100.0)) == 30.0
        assert final_adjustment(60.0, obs(ic=200.0)) == 60.0

    def test_adjustment_rejects_negative_def(self):
        with pytest.raises(InvalidObservation):
            final_adjustment(-0.1, obs())

    @given(
        mde=st.floats(0, 500),
        ni=st.floats(0, 400),
        ic=st.floats(0, 200),
    )
    def test_adjustment_never_exceeds_def_nor_mde(self, mde, ni, ic):
        o = obs(ni=ni, ic=ic)
        d = compute_def(mde, o)
        adj = final_adjustment(d, o)
        assert 0.0 <= adj <= d <= mde


class TestDepthCorrection:
    def test_skipped(self):
        c = DepthCorrection.skipped()
        assert not c.applied
        assert c.adj_h == 0.0

    def test_adjustment_bounded_by_def(self):
        with pytest.raises(InvalidObservation):
            DepthCorrection(def_h=1.0, def_v=1.0, adj_h=2.0, adj_v=0.0, applied=True)

    def test_negative_def_rejected(self):
        with pytest.raises(InvalidObservation):
            DepthCorrection(def_h=-1.0, def_v=0.0, adj_h=0.0, adj_v=0.0, applied=True)


class TestCorrectSidePoint:
    def test_moves_outward_right_of_centre(self):
        profile = face_profile()
        o = obs(ni=200.0, ic=100.0)  # def_h 60, adj_h 30
        corrected, c = correct_side_point(profile, ModelPoint2D(300.0, 400.0), o, 0.0)
        assert corrected.a == 330.0
        assert c.adj_h == 30.0
        assert c.applied

    def test_moves_outward_left_of_centre(self):
        profile = face_profile()
        o = obs(ni=200.0, ic=100.0)
        corrected, _ = correct_side_point(profile, ModelPoint2D(100.0, 400.0), o, 0.0)
        assert corrected.a == 70.0

    def test_at_centre_moves_positive(self):
        profile = face_profile()
        o = obs(ni=200.0, ic=100.0)
        corrected, _ = correct_side_point(profile, ModelPoint2D(200.0, 400.0), o, 0.0)
        assert corrected.a == 230.0

    def test_zero_lateral_offset_means_no_horizontal_move(self):
        profile = face_profile()
        o = obs(ni=200.0, ic=0.0)
        corrected, c = correct_side_point(profile, ModelPoint2D(300.0, 100.0), o, 1.0)
        assert corrected.a == 300.0
        assert c.adj_h == 0.0
        # vertical still corrects: def_v 130, above centre is b < 400
        assert corrected.b == 100.0 - 130.0

    def test_vertical_fraction_scales(self):
        profile = face_profile()
        o = obs(ni=400.0, ic=0.0)  # def_v = 260
        corrected, c = correct_side_point(profile, ModelPoint2D(200.0, 600.0), o, 0.5)
        assert c.adj_v == 130.0
        assert corrected.b == 730.0

    def test_vertical_correction_disabled(self):
        profile = face_profile()
        o = obs(ni=400.0, ic=200.0)
        corrected, c = correct_side_point(
            profile, ModelPoint2D(300.0, 600.0), o, 1.0, vertical_correction=False
        )
        assert c.adj_v == 0.0
        assert corrected.b == 600.0
        assert corrected.a == 420.0  # horizontal still applies

    def test_fraction_out_of_range(self):
        with pytest.raises(InvalidObservation):
            correct_side_point(face_profile(), ModelPoint2D(0, 0), obs(), 1.5)

    def test_zero_mde_is_identity(self):
        profile = face_profile(mde_h=0.0, mde_v=0.0)
        p = ModelPoint2D(137.0, 512.0)
        corrected, c = correct_side_point(profile, p, obs(ni=400.0, ic=200.0), 1.0)
        assert corrected == p
        assert (c.adj_h, c.adj_v) == (0.0, 0.0)
        assert c.applied

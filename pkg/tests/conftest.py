"""Shared fixtures: small standard rigs and their calibrations."""

from __future__ import annotations

import pytest

from gridscope.calibration import RigGeometry, build_calibration
from gridscope.geometry import GridBox, WorldPoint3D
from gridscope.simulate import (
    PathSpec,
    SimScenario,
    marker_picks_for,
    standard_cameras,
)

RESOLUTION = (1920, 1080)
SIDE_DISTANCE_MM = 245.0
FOCAL_PX = 200.0
TOP_FOCAL_PX = 2000.0

# Verdicts recorded by the end-to-end checks; echoed after the test run so
# the per-criterion outcome is visible even with output capture on.
_criterion_verdicts: dict[int, bool] = {}


def record_criterion(number: int, passed: bool) -> None:
    _criterion_verdicts[number] = passed and _criterion_verdicts.get(number, True)


def pytest_terminal_summary(terminalreporter):
    if not _criterion_verdicts:
        return
    terminalreporter.write_line("")
    for number in sorted(_criterion_verdicts):
        verdict = "PASS" if _criterion_verdicts[number] else "FAIL"
        terminalreporter.write_line(f"[criterion {number}] {verdict}")


def make_rig(w=390.0, d=390.0, h=850.0, px_per_mm=1.0) -> RigGeometry:
    return RigGeometry(grid_a=GridBox(WorldPoint3D(0, 0, 0), w, d, h), px_per_mm=px_per_mm)


def make_scenario(
    mode="aligned",
    rig=None,
    grid_b=None,
    path=None,
    n_frames=50,
    side_distance_mm=SIDE_DISTANCE_MM,
    side_height_mm=None,
    top_mode=None,
    **kwargs,
) -> SimScenario:
    """A compact scenario: defaults give a clean, noise-free aligned rig."""
    rig = rig or make_rig()
    grid_a = rig.grid_a
    if side_height_mm is None:
        side_height_mm = grid_a.h_mm / 2.0
    cameras = standard_cameras(
        grid_a,
        mode,
        RESOLUTION,
        side_distance_mm,
        side_height_mm,
        grid_a.h_mm + 2500.0,
        FOCAL_PX,
        TOP_FOCAL_PX,
        top_mode=top_mode,
    )
    grid_b = grid_b or GridBox(WorldPoint3D(120.0, 120.0, 100.0), 150.0, 150.0, 400.0)
    path = path or PathSpec(
        face="y_max",
        waypoints=(
            WorldPoint3D(150.0, 270.0, 200.0),
            WorldPoint3D(250.0, 270.0, 200.0),
        ),
        speed_mm_s=20.0,
        loop=True,
    )
    kwargs.setdefault("noise_sigma_px", 0.0)
    kwargs.setdefault("confidence_jitter", 0.0)
    return SimScenario(
        rig=rig,
        cameras=cameras,
        grid_b=grid_b,
        path=path,
        n_frames=n_frames,
        **kwargs,
    )


@pytest.fixture(scope="session")
def aligned_scenario() -> SimScenario:
    return make_scenario("aligned")


@pytest.fixture(scope="session")
def aligned_calibration(aligned_scenario):
    return build_calibration(marker_picks_for(aligned_scenario))


@pytest.fixture(scope="session")
def pinhole_scenario() -> SimScenario:
    return make_scenario("pinhole")


@pytest.fixture(scope="session")
def pinhole_calibration(pinhole_scenario):
    return build_calibration(marker_picks_for(pinhole_scenario))

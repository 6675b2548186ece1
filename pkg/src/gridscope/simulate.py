"""Synthetic rig generator: seeded scenarios with known ground truth.

Produces everything the reconstruction pipeline consumes (marker picks,
per-camera detection CSVs) together with the ground-truth track, from a
declarative scenario: rig dimensions, camera geometry, a reference box
(grid B), a waypoint path along one of its faces, plus noise, dropout and
a seed.

Two camera models are available per camera:

* ``aligned``: an idealized orthographic camera; the two in-plane world
  axes map linearly onto the sensor and depth is invisible.  Perfect
  alignment means the far face lands exactly on the near face, so the
  measured depth error is zero.
* ``pinhole``: perspective projection through a focal length about the
  image centre.  Deeper points are pulled toward the centre of the frame,
  which is exactly the bias the depth correction targets.

Determinism: one ``random.Random(seed)`` stream drives generation.  Per
frame (ascending) and per camera (sides 0..3 then top) the draws are:
one uniform for dropout; if the detection survives and the noise sigma is
positive, two uniforms turned into a Gaussian pair via Box-Muller (u then
v jitter); if the confidence jitter is positive, one uniform.  Fixed seed
therefore means byte-identical output files.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from pathlib import Path

from .calibration import (
    AxisMap,
    CameraPicks,
    CameraRole,
    MarkerPicks,
    RigGeometry,
    SubAreaPick,
    default_axis_map,
)
from .detections import Detection, write_detections
from .errors import BehindCamera, ConfigError, CsvError
from .evaluation import FACES
from .geometry import GridBox, PixelPoint, Quad, WorldPoint3D
from . import jsonio

SCENARIO_FORMAT_VERSION = 1

DEFAULT_FRAME_RATE_FPS = 20.0
DEFAULT_SIDE_DISTANCE_MM = 245.0
DEFAULT_BBOX_HALF_PX = 15.0
DEFAULT_CONFIDENCE_JITTER = 0.05

_Vec = tuple[float, float, float]


def _dot(a: _Vec, b: _Vec) -> float:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _sub(a: _Vec, b: _Vec) -> _Vec:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _add(a: _Vec, b: _Vec) -> _Vec:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def _scaled(a: _Vec, s: float) -> _Vec:
    return (a[0] * s, a[1] * s, a[2] * s)


def _cross(a: _Vec, b: _Vec) -> _Vec:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _norm(a: _Vec) -> float:
    return math.sqrt(_dot(a, a))


def _unit(a: _Vec) -> _Vec:
    n = _norm(a)
    if n == 0:
        raise ConfigError("zero-length direction vector")
    return _scaled(a, 1.0 / n)


@dataclass(frozen=True)
class SimCamera:
    """One synthetic camera with a fully specified viewing frame."""

    camera_id: str
    role: CameraRole
    position: _Vec
    axis: _Vec  # unit vector toward the grid
    right: _Vec
    down: _Vec
    focal_px: float
    resolution: tuple[int, int]
    mode: str  # "aligned" or "pinhole"
    ortho_px_per_mm: float = 1.0

    def __post_init__(self):
        if self.mode not in ("aligned", "pinhole"):
            raise ConfigError(f"camera mode must be aligned|pinhole, got {self.mode!r}")
        if self.mode == "pinhole" and not self.focal_px > 0:
            raise ConfigError(f"focal_px must be > 0, got {self.focal_px}")
        if self.ortho_px_per_mm <= 0:
            raise ConfigError(f"ortho_px_per_mm must be > 0, got {self.ortho_px_per_mm}")
        if self.role.is_side and abs(self.axis[2]) > 1e-9:
            raise ConfigError(
                f"camera {self.camera_id}: side cameras must be horizontal, "
                f"axis {self.axis}"
            )


def make_camera(
    camera_id: str,
    role: CameraRole,
    position: _Vec,
    axis: _Vec,
    focal_px: float,
    resolution: tuple[int, int],
    mode: str,
    ortho_px_per_mm: float = 1.0,
) -> SimCamera:
    """Build a camera, deriving its right/down frame from role and axis."""
    axis = _unit(axis)
    if role.is_side:
        right = _unit(_cross(axis, (0.0, 0.0, 1.0)))
    else:
        if axis != (0.0, 0.0, -1.0):
            raise ConfigError(f"top camera must look along -z, got axis {axis}")
        right = (1.0, 0.0, 0.0)
    down = _unit(_cross(axis, right))
    return SimCamera(
        camera_id=camera_id,
        role=role,
        position=position,
        axis=axis,
        right=right,
        down=down,
        focal_px=focal_px,
        resolution=resolution,
        mode=mode,
        ortho_px_per_mm=ortho_px_per_mm,
    )


def project(camera: SimCamera, point: WorldPoint3D) -> PixelPoint:
    """Project a world point onto a camera's sensor.

    Raises:
        BehindCamera: perspective projection of a point at or behind the
            image plane.
    """
    d = _sub((point.x, point.y, point.z), camera.position)
    xc = _dot(camera.right, d)
    yc = _dot(camera.down, d)
    cx = camera.resolution[0] / 2.0
    cy = camera.resolution[1] / 2.0
    if camera.mode == "aligned":
        s = camera.ortho_px_per_mm
        return PixelPoint(cx + s * xc, cy + s * yc)
    zc = _dot(camera.axis, d)
    if zc <= 1e-9:
        raise BehindCamera(
            f"camera {camera.camera_id}: point ({point.x}, {point.y}, {point.z}) "
            f"is not in front of the image plane"
        )
    f = camera.focal_px
    return PixelPoint(cx + f * xc / zc, cy + f * yc / zc)


# --- face frames ------------------------------------------------------------


@dataclass(frozen=True)
class FaceFrame:
    """Parameterization of the face a camera watches.

    ``origin + a * a_vec + b * b_vec`` spans the face, with (a, b) matching
    the camera's model-grid axes under the default axis map.  ``depth_vec``
    points into the grid and ``nf_mm`` is the distance to the far face.
    """

    origin: _Vec
    a_vec: _Vec
    b_vec: _Vec
    ext_a: float
    ext_b: float
    depth_vec: _Vec
    nf_mm: float

    def point(self, a: float, b: float, depth: float = 0.0) -> WorldPoint3D:
        p = _add(
            _add(self.origin, _scaled(self.a_vec, a)), _scaled(self.b_vec, b)
        )
        if depth:
            p = _add(p, _scaled(self.depth_vec, depth))
        return WorldPoint3D(*p)


def face_frame(role: CameraRole, grid_a: GridBox) -> FaceFrame:
    """Face parameterization matching the default axis map conventions."""
    w, d, h = grid_a.w_mm, grid_a.d_mm, grid_a.h_mm
    down = (0.0, 0.0, -1.0)
    if role.is_side:
        frames = {
            0: FaceFrame((0.0, 0.0, h), (1.0, 0.0, 0.0), down, w, h, (0.0, 1.0, 0.0), d),
            1: FaceFrame((w, 0.0, h), (0.0, 1.0, 0.0), down, d, h, (-1.0, 0.0, 0.0), w),
            2: FaceFrame((w, d, h), (-1.0, 0.0, 0.0), down, w, h, (0.0, -1.0, 0.0), d),
            3: FaceFrame((0.0, d, h), (0.0, -1.0, 0.0), down, d, h, (1.0, 0.0, 0.0), w),
        }
        return frames[role.index]
    return FaceFrame(
        (0.0, d, h), (1.0, 0.0, 0.0), (0.0, -1.0, 0.0), w, d, (0.0, 0.0, -1.0), h
    )


def standard_cameras(
    grid_a: GridBox,
    mode: str,
    resolution: tuple[int, int],
    side_distance_mm: float,
    side_height_mm: float,
    top_height_mm: float,
    focal_px: float,
    top_focal_px: float,
    ortho_px_per_mm: float = 1.0,
    top_mode: str | None = None,
) -> tuple[SimCamera, ...]:
    """The symmetric five-camera arrangement around the grid."""
    cams = []
    for i in range(4):
        frame = face_frame(CameraRole.side(i), grid_a)
        centre = frame.point(frame.ext_a / 2.0, grid_a.h_mm - side_height_mm)
        pos = _sub(
            (centre.x, centre.y, centre.z), _scaled(frame.depth_vec, side_distance_mm)
        )
        cams.append(
            make_camera(
                f"side{i}",
                CameraRole.side(i),
                pos,
                frame.depth_vec,
                focal_px,
                resolution,
                mode,
                ortho_px_per_mm,
            )
        )
    top_pos = (grid_a.w_mm / 2.0, grid_a.d_mm / 2.0, top_height_mm)
    cams.append(
        make_camera(
            "top",
            CameraRole.top(),
            top_pos,
            (0.0, 0.0, -1.0),
            top_focal_px,
            resolution,
            top_mode or mode,
            ortho_px_per_mm,
        )
    )
    return tuple(cams)


# --- sub-area layouts -------------------------------------------------------


def sub_area_rects(
    layout: str, ext_a: float, ext_b: float, inner: tuple[float, float]
) -> list[tuple[float, float, float, float]]:
    """Face-plane rectangles (a0, b0, a1, b1) for a layout, in index order.

    ``five`` is a pinwheel: four rectangles wrap around a central one whose
    corners sit at the inner fractions of each extent.  The centre patch
    has index 0 so shared-edge points resolve to it.
    """
    if layout == "single":
        return [(0.0, 0.0, ext_a, ext_b)]
    if layout == "four":
        ha, hb = ext_a / 2.0, ext_b / 2.0
        return [
            (0.0, 0.0, ha, hb),
            (ha, 0.0, ext_a, hb),
            (ha, hb, ext_a, ext_b),
            (0.0, hb, ha, ext_b),
        ]
    if layout == "five":
        f1, f2 = inner
        if not 0.0 < f1 < f2 < 1.0:
            raise ConfigError(f"inner fractions must satisfy 0 < f1 < f2 < 1, got {inner}")
        a1, a2 = f1 * ext_a, f2 * ext_a
        b1, b2 = f1 * ext_b, f2 * ext_b
        return [
            (a1, b1, a2, b2),          # centre
            (0.0, 0.0, a2, b1),        # around it, pinwheel-fashion
            (a2, 0.0, ext_a, b2),
            (a1, b2, ext_a, ext_b),
            (0.0, b1, a1, ext_b),
        ]
    raise ConfigError(f"unknown sub_area_layout {layout!r}")


def _camera_picks(
    camera: SimCamera,
    rig: RigGeometry,
    layout: str,
    inner: tuple[float, float],
) -> CameraPicks:
    frame = face_frame(camera.role, rig.grid_a)
    px = rig.px_per_mm
    res_w, res_h = camera.resolution
    sub_areas = []
    for index, (a0, b0, a1, b1) in enumerate(
        sub_area_rects(layout, frame.ext_a, frame.ext_b, inner)
    ):
        corners = []
        for a, b in ((a0, b0), (a1, b0), (a1, b1), (a0, b1)):
            pix = project(camera, frame.point(a, b))
            if not (0 <= pix.u <= res_w and 0 <= pix.v <= res_h):
                raise ConfigError(
                    f"camera {camera.camera_id}: marker at face ({a}, {b}) "
                    f"projects off-sensor to ({pix.u:.1f}, {pix.v:.1f})"
                )
            corners.append((pix.u, pix.v))
        sub_areas.append(
            SubAreaPick(
                index=index,
                src_quad=Quad.from_coords(corners),
                canonical=((a1 - a0) * px, (b1 - b0) * px),
                mg_origin=(a0 * px, b0 * px),
            )
        )
    face_n = face_f = None
    if camera.role.is_side:
        outer = ((0.0, 0.0), (frame.ext_a, 0.0), (frame.ext_a, frame.ext_b), (0.0, frame.ext_b))
        face_n = Quad.from_coords(
            [(p.u, p.v) for p in (project(camera, frame.point(a, b)) for a, b in outer)]
        )
        face_f = Quad.from_coords(
            [
                (p.u, p.v)
                for p in (
                    project(camera, frame.point(a, b, frame.nf_mm)) for a, b in outer
                )
            ]
        )
    return CameraPicks(
        camera_id=camera.camera_id,
        role=camera.role,
        resolution=camera.resolution,
        sub_areas=tuple(sub_areas),
        face_n_quad=face_n,
        face_f_quad=face_f,
    )


def marker_picks_for(scenario: "SimScenario") -> MarkerPicks:
    """Project every marker of the scenario into its cameras' pixels."""
    return MarkerPicks(
        rig=scenario.rig,
        axis_map=scenario.axis_map,
        cameras=tuple(
            _camera_picks(cam, scenario.rig, scenario.sub_area_layout, scenario.inner)
            for cam in scenario.cameras
        ),
    )


# --- scenario ---------------------------------------------------------------


@dataclass(frozen=True)
class PathSpec:
    """A constant-speed waypoint walk along one face of grid B."""

    face: str
    waypoints: tuple[WorldPoint3D, ...]
    speed_mm_s: float
    loop: bool = False

    def __post_init__(self):
        if self.face not in FACES:
            raise ConfigError(f"unknown path face {self.face!r}")
        if not self.waypoints:
            raise ConfigError("path needs at least one waypoint")
        if self.speed_mm_s < 0:
            raise ConfigError(f"speed_mm_s must be >= 0, got {self.speed_mm_s}")


@dataclass(frozen=True)
class SimScenario:
    rig: RigGeometry
    cameras: tuple[SimCamera, ...]
    grid_b: GridBox
    path: PathSpec
    n_frames: int
    frame_rate_fps: float = DEFAULT_FRAME_RATE_FPS
    noise_sigma_px: float = 0.0
    dropout: dict[str, float] | None = None
    bbox_half_px: float = DEFAULT_BBOX_HALF_PX
    confidence_jitter: float = DEFAULT_CONFIDENCE_JITTER
    sub_area_layout: str = "five"
    inner: tuple[float, float] = (0.25, 0.75)
    seed: int = 0

    def __post_init__(self):
        if self.n_frames < 1:
            raise ConfigError(f"n_frames must be >= 1, got {self.n_frames}")
        if self.frame_rate_fps <= 0:
            raise ConfigError(f"frame_rate_fps must be > 0, got {self.frame_rate_fps}")
        if self.noise_sigma_px < 0:
            raise ConfigError(f"noise_sigma_px must be >= 0, got {self.noise_sigma_px}")
        if self.bbox_half_px <= 0:
            raise ConfigError(f"bbox_half_px must be > 0, got {self.bbox_half_px}")
        if not 0 <= self.confidence_jitter < 1:
            raise ConfigError(
                f"confidence_jitter must be in [0, 1), got {self.confidence_jitter}"
            )
        for cam_id, p in (self.dropout or {}).items():
            if not 0 <= p <= 1:
                raise ConfigError(f"dropout for {cam_id} must be in [0, 1], got {p}")
        if not self.rig.grid_a.contains(self.grid_b):
            raise ConfigError("grid B must lie inside grid A")
        self._validate_waypoints()

    def _validate_waypoints(self):
        box = self.grid_b
        o = box.origin
        spans = {
            "x": (o.x, o.x + box.w_mm),
            "y": (o.y, o.y + box.d_mm),
            "z": (o.z, o.z + box.h_mm),
        }
        axis = self.path.face[0]
        plane = spans[axis][0] if self.path.face.endswith("min") else spans[axis][1]
        for wp in self.path.waypoints:
            coords = {"x": wp.x, "y": wp.y, "z": wp.z}
            if abs(coords[axis] - plane) > 1e-6:
                raise ConfigError(
                    f"waypoint ({wp.x}, {wp.y}, {wp.z}) is off the "
                    f"{self.path.face} plane ({axis} = {plane})"
                )
            for other, (lo, hi) in spans.items():
                if other == axis:
                    continue
                if not (lo - 1e-6 <= coords[other] <= hi + 1e-6):
                    raise ConfigError(
                        f"waypoint ({wp.x}, {wp.y}, {wp.z}) leaves the "
                        f"{self.path.face} face rectangle on axis {other}"
                    )

    @property
    def axis_map(self) -> AxisMap:
        return default_axis_map(self.rig.grid_a)

    def dropout_for(self, camera_id: str) -> float:
        table = self.dropout or {}
        return table.get(camera_id, table.get("default", 0.0))


@dataclass(frozen=True)
class TruthSample:
    timestamp_ms: float
    position: WorldPoint3D


@dataclass(frozen=True)
class GeneratedData:
    picks: MarkerPicks
    detections: dict[str, list[Detection]]
    truth: list[TruthSample]


def _sample_path(path: PathSpec, n_frames: int, fps: float) -> list[WorldPoint3D]:
    pts = [(w.x, w.y, w.z) for w in path.waypoints]
    seg_lengths = [
        _norm(_sub(b, a)) for a, b in zip(pts, pts[1:])
    ]
    total = sum(seg_lengths)
    positions = []
    frame_ms = 1000.0 / fps
    for k in range(n_frames):
        t_s = (k * frame_ms) / 1000.0
        dist = path.speed_mm_s * t_s
        if total == 0.0:
            positions.append(WorldPoint3D(*pts[0]))
            continue
        if path.loop:
            dist = math.fmod(dist, total)
        else:
            dist = min(dist, total)
        acc = 0.0
        chosen = pts[-1]
        for (a, b), length in zip(zip(pts, pts[1:]), seg_lengths):
            if length == 0.0:
                continue
            if dist <= acc + length:
                frac = (dist - acc) / length
                chosen = _add(a, _scaled(_sub(b, a), frac))
                break
            acc += length
        positions.append(WorldPoint3D(*chosen))
    return positions


def generate_scenario(scenario: SimScenario) -> GeneratedData:
    """Run a scenario: marker picks, noisy detections, ground truth."""
    picks = marker_picks_for(scenario)
    positions = _sample_path(
        scenario.path, scenario.n_frames, scenario.frame_rate_fps
    )
    frame_ms = 1000.0 / scenario.frame_rate_fps
    rng = random.Random(scenario.seed)
    detections: dict[str, list[Detection]] = {
        cam.camera_id: [] for cam in scenario.cameras
    }
    truth: list[TruthSample] = []
    half = scenario.bbox_half_px
    sigma = scenario.noise_sigma_px
    jitter = scenario.confidence_jitter
    for k, pos in enumerate(positions):
        t = k * frame_ms
        truth.append(TruthSample(t, pos))
        for cam in scenario.cameras:
            miss = rng.random()
            if miss < scenario.dropout_for(cam.camera_id):
                continue
            pix = project(cam, pos)
            u, v = pix.u, pix.v
            if sigma > 0.0:
                u1 = 1.0 - rng.random()
                u2 = rng.random()
                r = math.sqrt(-2.0 * math.log(u1))
                u += sigma * r * math.cos(2.0 * math.pi * u2)
                v += sigma * r * math.sin(2.0 * math.pi * u2)
            confidence = 1.0 - jitter * rng.random() if jitter > 0.0 else 1.0
            detections[cam.camera_id].append(
                Detection(
                    camera_id=cam.camera_id,
                    frame_index=str(k),
                    timestamp_ms=t,
                    u_min=u - half,
                    v_min=v - half,
                    u_max=u + half,
                    v_max=v + half,
                    confidence=confidence,
                )
            )
    return GeneratedData(picks, detections, truth)


# --- truth file -------------------------------------------------------------

TRUTH_HEADER = ("timestamp_ms", "x_mm", "y_mm", "z_mm")


def write_truth(path, truth: list[TruthSample]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(TRUTH_HEADER) + "\n")
        for s in truth:
            fh.write(
                f"{s.timestamp_ms!r},{s.position.x!r},{s.position.y!r},"
                f"{s.position.z!r}\n"
            )


def read_truth(path) -> list[TruthSample]:
    import csv as _csv

    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = _csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != TRUTH_HEADER:
            raise CsvError(1, "", f"expected header {','.join(TRUTH_HEADER)}")
        out = []
        for row_no, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 4:
                raise CsvError(row_no, "", f"expected 4 fields, got {len(row)}")
            try:
                out.append(
                    TruthSample(
                        float(row[0]),
                        WorldPoint3D(float(row[1]), float(row[2]), float(row[3])),
                    )
                )
            except ValueError as exc:
                raise CsvError(row_no, "", str(exc)) from exc
        return out


# --- scenario files ---------------------------------------------------------


def scenario_from_doc(doc: dict) -> SimScenario:
    root = jsonio.DocReader(doc)
    version = root.key("format_version").integer()
    if version != SCENARIO_FORMAT_VERSION:
        raise ConfigError(
            f"scenario format_version {version} unsupported "
            f"(this build reads {SCENARIO_FORMAT_VERSION})"
        )
    grid = root.key("grid_a")
    grid_a = GridBox(
        WorldPoint3D(0.0, 0.0, 0.0),
        grid.key("w_mm").real(),
        grid.key("d_mm").real(),
        grid.key("h_mm").real(),
    )
    px_r = root.optional_key("px_per_mm")
    rig = RigGeometry(grid_a, px_per_mm=px_r.real() if px_r else 1.0)
    cams = root.key("cameras")
    mode = cams.key("mode").string()
    top_mode_r = cams.optional_key("top_mode")
    res_r = cams.key("resolution").fixed_list(2)
    resolution = (res_r[0].integer(), res_r[1].integer())
    side_distance_r = cams.optional_key("side_distance_mm")
    if side_distance_r is None:
        if mode == "pinhole":
            raise ConfigError(
                "pinhole scenarios must state cameras.side_distance_mm explicitly"
            )
        side_distance = DEFAULT_SIDE_DISTANCE_MM
    else:
        side_distance = side_distance_r.real()
    side_height_r = cams.optional_key("side_height_mm")
    side_height = side_height_r.real() if side_height_r else grid_a.h_mm / 2.0
    top_height_r = cams.optional_key("top_height_mm")
    top_height = top_height_r.real() if top_height_r else grid_a.h_mm + 2500.0
    focal_r = cams.optional_key("focal_px")
    focal = focal_r.real() if focal_r else 200.0
    top_focal_r = cams.optional_key("top_focal_px")
    top_focal = top_focal_r.real() if top_focal_r else 2000.0
    ortho_r = cams.optional_key("ortho_px_per_mm")
    ortho = ortho_r.real() if ortho_r else 1.0
    cameras = standard_cameras(
        grid_a,
        mode,
        resolution,
        side_distance,
        side_height,
        top_height,
        focal,
        top_focal,
        ortho,
        top_mode=top_mode_r.string() if top_mode_r else None,
    )
    gb = root.key("grid_b")
    origin = gb.key("origin").fixed_list(3)
    size = gb.key("size").fixed_list(3)
    grid_b = GridBox(
        WorldPoint3D(origin[0].real(), origin[1].real(), origin[2].real()),
        size[0].real(),
        size[1].real(),
        size[2].real(),
    )
    path_r = root.key("path")
    loop_r = path_r.optional_key("loop")
    waypoints = tuple(
        WorldPoint3D(*(w.real() for w in wp.fixed_list(3)))
        for wp in path_r.key("waypoints").items()
    )
    path = PathSpec(
        face=path_r.key("face").string(),
        waypoints=waypoints,
        speed_mm_s=path_r.key("speed_mm_s").real(),
        loop=loop_r.boolean() if loop_r else False,
    )
    dropout_r = root.optional_key("dropout")
    dropout = None
    if dropout_r is not None:
        dropout = {}
        if not isinstance(dropout_r.value, dict):
            dropout_r._fail("a mapping of camera id to probability")
        for cam_id in dropout_r.value:
            dropout[cam_id] = dropout_r.key(cam_id).real()

    def _opt_real(name: str, default: float) -> float:
        r = root.optional_key(name)
        return r.real() if r else default

    layout_r = root.optional_key("sub_area_layout")
    inner_r = root.optional_key("pinwheel_inner")
    return SimScenario(
        rig=rig,
        cameras=cameras,
        grid_b=grid_b,
        path=path,
        n_frames=root.key("n_frames").integer(),
        frame_rate_fps=_opt_real("frame_rate_fps", DEFAULT_FRAME_RATE_FPS),
        noise_sigma_px=_opt_real("noise_sigma_px", 0.0),
        dropout=dropout,
        bbox_half_px=_opt_real("bbox_half_px", DEFAULT_BBOX_HALF_PX),
        confidence_jitter=_opt_real("confidence_jitter", DEFAULT_CONFIDENCE_JITTER),
        sub_area_layout=layout_r.string() if layout_r else "five",
        inner=inner_r.real_pair() if inner_r else (0.25, 0.75),
        seed=root.key("seed").integer(),
    )


def load_scenario(path) -> SimScenario:
    return scenario_from_doc(jsonio.read_doc(path))


def write_generated(data: GeneratedData, out_dir) -> dict[str, str]:
    """Write picks, per-camera detections and truth; returns the file map."""
    from .calibration import marker_picks_doc

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {}
    picks_path = out / "picks.json"
    jsonio.write_doc(picks_path, marker_picks_doc(data.picks))
    files["picks"] = str(picks_path)
    for cam_id, dets in data.detections.items():
        p = out / f"detections_{cam_id}.csv"
        write_detections(p, dets)
        files[f"detections_{cam_id}"] = str(p)
    truth_path = out / "truth.csv"
    write_truth(truth_path, data.truth)
    files["truth"] = str(truth_path)
    return files

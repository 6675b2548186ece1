"""Camera calibration: sub-area rectification and the model-grid mapping.

Each camera watches one face of the main grid.  Manual marker picks divide
that view into one or more convex quads ("sub-areas").  Calibration fits a
four-point homography per sub-area that rectifies it to a canonical
rectangle, attaches per-axis scale ratios, and records where the rectangle
sits inside the camera's consolidated 2D frame (the model grid).  A pixel
is mapped into the model grid by locating its sub-area, applying that
sub-area's homography, scaling about the sub-area origin and offsetting by
that origin.

Calibration also measures the maximum depth error (MDE) per camera: the
largest apparent displacement, in model-grid units, between the near-face
and far-face marker corners.  Downstream depth correction scales this
value by the observed depth and lateral offset of the subject.

The whole calibration (rig dimensions, per-camera sub-areas, MDE values
and the axis mapping that ties each camera's frame to world axes) persists
as a single structured-text document, written deterministically and
round-tripping bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import (
    FormatError,
    NonPositiveLength,
    OutsideCalibratedArea,
    VersionMismatch,
)
from .geometry import (
    GridBox,
    Homography,
    ModelPoint2D,
    PixelPoint,
    Quad,
    ScaleRatios,
    WorldPoint3D,
    apply_homography,
    apply_scale,
    compute_homography,
    point_in_quad,
)
from . import jsonio

FORMAT_VERSION = 1

# Marker corners must land on their canonical rectangle corners this tightly.
CANONICAL_CORNER_TOLERANCE = 1e-9

# Default rig dimensions (mm): 390 wide, 390 deep, 850 tall.
DEFAULT_GRID_W_MM = 390.0
DEFAULT_GRID_D_MM = 390.0
DEFAULT_GRID_H_MM = 850.0
DEFAULT_MARKER_COUNT = 20


@dataclass(frozen=True)
class CameraRole:
    """Which face a camera watches: one of four sides, or the top."""

    kind: str  # "side" or "top"
    index: int | None = None

    def __post_init__(self):
        if self.kind == "side":
            if self.index not in (0, 1, 2, 3):
                raise FormatError(f"side camera index must be 0..3, got {self.index}")
        elif self.kind == "top":
            if self.index is not None:
                raise FormatError("top camera takes no index")
        else:
            raise FormatError(f"unknown camera role kind {self.kind!r}")

    @classmethod
    def side(cls, index: int) -> "CameraRole":
        return cls("side", index)

    @classmethod
    def top(cls) -> "CameraRole":
        return cls("top")

    @property
    def is_side(self) -> bool:
        return self.kind == "side"

    def label(self) -> str:
        return f"side:{self.index}" if self.is_side else "top"

    @classmethod
    def from_label(cls, label: str) -> "CameraRole":
        if label == "top":
            return cls.top()
        if label.startswith("side:"):
            try:
                return cls.side(int(label.split(":", 1)[1]))
            except ValueError:
                pass
        raise FormatError(f"unknown camera role {label!r}")


@dataclass(frozen=True)
class SubArea:
    """One rectified patch of a camera's view.

    The homography sends the four marker corners of ``src`` onto the
    canonical rectangle (0,0), (w,0), (w,h), (0,h); the scale ratios then
    convert canonical units into shared model-grid units, and ``mg_origin``
    places the patch inside the camera's model grid.
    """

    index: int
    src: Quad
    canonical_width: float
    canonical_height: float
    mg_origin: ModelPoint2D
    homography: Homography
    scale: ScaleRatios

    def __post_init__(self):
        if self.index < 0:
            raise FormatError(f"sub-area index must be >= 0, got {self.index}")
        if not (self.canonical_width > 0 and self.canonical_height > 0):
            raise NonPositiveLength(
                f"canonical dims must be positive, got "
                f"({self.canonical_width}, {self.canonical_height})"
            )
        w, h = self.canonical_width, self.canonical_height
        targets = ((0.0, 0.0), (w, 0.0), (w, h), (0.0, h))
        for corner, (ta, tb) in zip(self.src.corners, targets):
            got = apply_homography(self.homography, corner)
            if abs(got.a - ta) > CANONICAL_CORNER_TOLERANCE or (
                abs(got.b - tb) > CANONICAL_CORNER_TOLERANCE
            ):
                raise FormatError(
                    f"sub-area {self.index}: corner ({corner.u}, {corner.v}) "
                    f"maps to ({got.a}, {got.b}), expected ({ta}, {tb})"
                )

    def mg_corners(self) -> tuple[ModelPoint2D, ...]:
        """The canonical rectangle corners placed into the model grid."""
        w, h = self.canonical_width, self.canonical_height
        out = []
        for ca, cb in ((0.0, 0.0), (w, 0.0), (w, h), (0.0, h)):
            out.append(
                ModelPoint2D(
                    self.mg_origin.a + self.scale.rx * ca,
                    self.mg_origin.b + self.scale.ry * cb,
                )
            )
        return tuple(out)


def compute_scale_ratios(mapped_side_lengths, required_side_lengths) -> ScaleRatios:
    """Per-axis ratios that stretch mapped lengths onto required lengths."""
    mw, mh = mapped_side_lengths
    rw, rh = required_side_lengths
    if not (mw > 0 and mh > 0 and rw > 0 and rh > 0):
        raise NonPositiveLength(
            f"side lengths must be positive, got mapped ({mw}, {mh}) "
            f"required ({rw}, {rh})"
        )
    return ScaleRatios(rw / mw, rh / mh)


def build_sub_area(
    index: int,
    marker_quad: Quad,
    canonical_dims,
    mg_origin,
    required_dims=None,
) -> SubArea:
    """Fit one sub-area from its marker quad.

    Args:
        index: position of the patch in the camera's sub-area list.
        marker_quad: the four picked marker corners, TL,TR,BR,BL.
        canonical_dims: (width, height) of the rectangle the homography
            rectifies to.
        mg_origin: where the patch's top-left corner sits in the model grid.
        required_dims: target (width, height) in model-grid units; when the
            canonical rectangle already has the right size (the default),
            the scale ratios come out as (1, 1).
    """
    w, h = float(canonical_dims[0]), float(canonical_dims[1])
    if not (w > 0 and h > 0):
        raise NonPositiveLength(f"canonical dims must be positive, got ({w}, {h})")
    canonical = Quad.from_coords([(0.0, 0.0), (w, 0.0), (w, h), (0.0, h)])
    homography = compute_homography(marker_quad, canonical)
    scale = compute_scale_ratios((w, h), required_dims if required_dims else (w, h))
    origin = (
        mg_origin
        if isinstance(mg_origin, ModelPoint2D)
        else ModelPoint2D(float(mg_origin[0]), float(mg_origin[1]))
    )
    return SubArea(index, marker_quad, w, h, origin, homography, scale)


@dataclass(frozen=True)
class CameraProfile:
    """Everything calibration knows about one camera."""

    camera_id: str
    role: CameraRole
    resolution: tuple[int, int]
    sub_areas: tuple[SubArea, ...]
    mde_h: float = 0.0
    mde_v: float = 0.0

    def __post_init__(self):
        if not self.camera_id:
            raise FormatError("camera id must be non-empty")
        rw, rh = self.resolution
        if rw <= 0 or rh <= 0:
            raise NonPositiveLength(f"resolution must be positive, got {self.resolution}")
        if not self.sub_areas:
            raise FormatError(f"camera {self.camera_id}: needs at least one sub-area")
        indices = [s.index for s in self.sub_areas]
        if sorted(indices) != indices or len(set(indices)) != len(indices):
            raise FormatError(
                f"camera {self.camera_id}: sub-area indices must be unique "
                f"and ascending, got {indices}"
            )
        if self.mde_h < 0 or self.mde_v < 0:
            raise FormatError(
                f"camera {self.camera_id}: MDE must be >= 0, got "
                f"({self.mde_h}, {self.mde_v})"
            )


def to_model_grid(profile: CameraProfile, p: PixelPoint) -> tuple[ModelPoint2D, int]:
    """Map an image pixel into the camera's model grid.

    Sub-areas are tried in ascending index order so points on shared edges
    resolve deterministically to the lowest-indexed patch.

    Returns:
        The model-grid point and the index of the sub-area that claimed it.

    Raises:
        OutsideCalibratedArea: no sub-area contains the pixel.
    """
    for sub in profile.sub_areas:
        if point_in_quad(p, sub.src):
            rectified = apply_homography(sub.homography, p)
            shifted = ModelPoint2D(
                sub.mg_origin.a + rectified.a, sub.mg_origin.b + rectified.b
            )
            return apply_scale(sub.scale, shifted, sub.mg_origin), sub.index
    raise OutsideCalibratedArea(
        f"camera {profile.camera_id}: pixel ({p.u}, {p.v}) is outside "
        f"every calibrated sub-area"
    )


def mg_bounds(profile: CameraProfile) -> tuple[float, float, float, float]:
    """Model-grid footprint (min_a, min_b, max_a, max_b) over all sub-areas."""
    a_vals: list[float] = []
    b_vals: list[float] = []
    for sub in profile.sub_areas:
        for c in sub.mg_corners():
            a_vals.append(c.a)
            b_vals.append(c.b)
    return min(a_vals), min(b_vals), max(a_vals), max(b_vals)


def measure_mde(
    profile: CameraProfile,
    face_n_markers: Quad,
    face_f_markers: Quad,
    aggregate: str = "max",
) -> tuple[float, float]:
    """Measure the per-axis maximum depth error for one camera.

    Both marker quads (near-face and far-face corners, picked in the same
    TL,TR,BR,BL order) go through the camera's model-grid mapping; the MDE
    per axis is the aggregate over the four corner pairs of the absolute
    model-grid displacement on that axis.  ``aggregate`` is "max" (the
    default) or "mean".
    """
    if aggregate not in ("max", "mean"):
        raise FormatError(f"aggregate must be 'max' or 'mean', got {aggregate!r}")
    da: list[float] = []
    db: list[float] = []
    for near, far in zip(face_n_markers.corners, face_f_markers.corners):
        mg_near, _ = to_model_grid(profile, near)
        mg_far, _ = to_model_grid(profile, far)
        da.append(abs(mg_near.a - mg_far.a))
        db.append(abs(mg_near.b - mg_far.b))
    if aggregate == "max":
        return max(da), max(db)
    return sum(da) / 4.0, sum(db) / 4.0


# --- axis mapping -----------------------------------------------------------


@dataclass(frozen=True)
class AxisComponent:
    """Affine link between one model-grid axis and one world axis.

    world = origin_mm + sign * (model_value / px_per_mm)
    """

    axis: str  # "x" or "y"
    origin_mm: float
    sign: int

    def __post_init__(self):
        if self.axis not in ("x", "y"):
            raise FormatError(f"axis must be 'x' or 'y', got {self.axis!r}")
        if self.sign not in (-1, 1):
            raise FormatError(f"sign must be -1 or 1, got {self.sign}")

    def world_from_model(self, value: float, px_per_mm: float) -> float:
        return self.origin_mm + self.sign * (value / px_per_mm)


@dataclass(frozen=True)
class VerticalComponent:
    """Affine link between a side camera's vertical model axis and world z."""

    origin_mm: float
    sign: int

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise FormatError(f"sign must be -1 or 1, got {self.sign}")

    def world_from_model(self, value: float, px_per_mm: float) -> float:
        return self.origin_mm + self.sign * (value / px_per_mm)


@dataclass(frozen=True)
class DepthComponent:
    """How far into the grid a world position sits, seen from one side.

    depth_mm = sign * (world_coord - face_n_mm), zero on the near face.
    """

    axis: str
    face_n_mm: float
    sign: int

    def __post_init__(self):
        if self.axis not in ("x", "y"):
            raise FormatError(f"axis must be 'x' or 'y', got {self.axis!r}")
        if self.sign not in (-1, 1):
            raise FormatError(f"sign must be -1 or 1, got {self.sign}")


@dataclass(frozen=True)
class SideAxes:
    horizontal: AxisComponent
    vertical: VerticalComponent
    depth: DepthComponent

    def __post_init__(self):
        if self.horizontal.axis == self.depth.axis:
            raise FormatError(
                "a side camera's horizontal axis must differ from its depth axis"
            )


@dataclass(frozen=True)
class TopAxes:
    a: AxisComponent
    b: AxisComponent

    def __post_init__(self):
        if self.a.axis == self.b.axis:
            raise FormatError("top camera model axes must map distinct world axes")


@dataclass(frozen=True)
class AxisMap:
    """World-frame interpretation of every camera's model grid.

    ``sides[i]`` belongs to the side camera with role index ``i``.  The four
    side cameras form a cycle around the grid; adjacent indices watch
    perpendicular faces, so their horizontal components measure different
    world axes.
    """

    sides: tuple[SideAxes, SideAxes, SideAxes, SideAxes]
    top: TopAxes

    def __post_init__(self):
        if len(self.sides) != 4:
            raise FormatError(f"axis map needs 4 side entries, got {len(self.sides)}")
        for i in range(4):
            a = self.sides[i].horizontal.axis
            b = self.sides[(i + 1) % 4].horizontal.axis
            if a == b:
                raise FormatError(
                    f"adjacent side cameras {i} and {(i + 1) % 4} must measure "
                    f"different world axes, both have {a!r}"
                )


def default_axis_map(grid_a: GridBox) -> AxisMap:
    """Axis mapping for the standard symmetric rig.

    Side 0 watches the y=0 face, then 1, 2, 3 continue counter-clockwise
    (x=W, y=D, x=0).  The world origin is the bottom corner shared by the
    near faces of sides 3 and 0.  Every side camera sees the face top at
    model-grid b=0, and the top camera reads a as x, b as depth-from-far
    (y reversed).
    """
    w, d, h = grid_a.w_mm, grid_a.d_mm, grid_a.h_mm
    vertical = VerticalComponent(origin_mm=h, sign=-1)
    sides = (
        SideAxes(AxisComponent("x", 0.0, 1), vertical, DepthComponent("y", 0.0, 1)),
        SideAxes(AxisComponent("y", 0.0, 1), vertical, DepthComponent("x", w, -1)),
        SideAxes(AxisComponent("x", w, -1), vertical, DepthComponent("y", d, -1)),
        SideAxes(AxisComponent("y", d, -1), vertical, DepthComponent("x", 0.0, 1)),
    )
    top = TopAxes(AxisComponent("x", 0.0, 1), AxisComponent("y", d, -1))
    return AxisMap(sides, top)


# --- rig + full calibration -------------------------------------------------


@dataclass(frozen=True)
class RigGeometry:
    """Physical dimensions of the main grid plus unit conversion metadata."""

    grid_a: GridBox
    px_per_mm: float = 1.0
    marker_count: int = DEFAULT_MARKER_COUNT

    def __post_init__(self):
        if self.px_per_mm <= 0:
            raise NonPositiveLength(f"px_per_mm must be > 0, got {self.px_per_mm}")
        if self.marker_count < 0:
            raise FormatError(f"marker_count must be >= 0, got {self.marker_count}")

    @classmethod
    def default(cls) -> "RigGeometry":
        box = GridBox(
            WorldPoint3D(0.0, 0.0, 0.0),
            DEFAULT_GRID_W_MM,
            DEFAULT_GRID_D_MM,
            DEFAULT_GRID_H_MM,
        )
        return cls(box)


@dataclass(frozen=True)
class Calibration:
    """A complete rig calibration: geometry, cameras and axis mapping."""

    rig: RigGeometry
    cameras: tuple[CameraProfile, ...]
    axis_map: AxisMap

    def __post_init__(self):
        ids = [c.camera_id for c in self.cameras]
        if len(set(ids)) != len(ids):
            raise FormatError(f"duplicate camera ids in calibration: {ids}")

    def camera(self, camera_id: str) -> CameraProfile:
        for cam in self.cameras:
            if cam.camera_id == camera_id:
                return cam
        raise FormatError(f"no camera {camera_id!r} in calibration")

    def side_camera(self, index: int) -> CameraProfile | None:
        for cam in self.cameras:
            if cam.role.is_side and cam.role.index == index:
                return cam
        return None

    def top_camera(self) -> CameraProfile | None:
        for cam in self.cameras:
            if not cam.role.is_side:
                return cam
        return None


# --- serialization ----------------------------------------------------------


def _quad_doc(quad: Quad) -> list:
    return [[c.u, c.v] for c in quad.corners]


def _quad_from(reader: jsonio.DocReader) -> Quad:
    corners = [r.real_pair() for r in reader.fixed_list(4)]
    return Quad.from_coords(corners)


def _axis_component_doc(c: AxisComponent) -> dict:
    return {"axis": c.axis, "origin_mm": c.origin_mm, "sign": c.sign}


def _axis_component_from(r: jsonio.DocReader) -> AxisComponent:
    return AxisComponent(
        r.key("axis").string(), r.key("origin_mm").real(), r.key("sign").integer()
    )


def _axis_map_doc(axis_map: AxisMap) -> dict:
    sides = []
    for s in axis_map.sides:
        sides.append(
            {
                "horizontal": _axis_component_doc(s.horizontal),
                "vertical": {
                    "origin_mm": s.vertical.origin_mm,
                    "sign": s.vertical.sign,
                },
                "depth": {
                    "axis": s.depth.axis,
                    "face_n_mm": s.depth.face_n_mm,
                    "sign": s.depth.sign,
                },
            }
        )
    return {
        "sides": sides,
        "top": {
            "a": _axis_component_doc(axis_map.top.a),
            "b": _axis_component_doc(axis_map.top.b),
        },
    }


def _axis_map_from(reader: jsonio.DocReader) -> AxisMap:
    sides = []
    for s in reader.key("sides").fixed_list(4):
        vert = s.key("vertical")
        depth = s.key("depth")
        sides.append(
            SideAxes(
                _axis_component_from(s.key("horizontal")),
                VerticalComponent(
                    vert.key("origin_mm").real(), vert.key("sign").integer()
                ),
                DepthComponent(
                    depth.key("axis").string(),
                    depth.key("face_n_mm").real(),
                    depth.key("sign").integer(),
                ),
            )
        )
    top = reader.key("top")
    return AxisMap(
        tuple(sides),
        TopAxes(_axis_component_from(top.key("a")), _axis_component_from(top.key("b"))),
    )


def _sub_area_doc(sub: SubArea) -> dict:
    m = sub.homography.matrix
    return {
        "index": sub.index,
        "src_quad": _quad_doc(sub.src),
        "canonical": [sub.canonical_width, sub.canonical_height],
        "mg_origin": [sub.mg_origin.a, sub.mg_origin.b],
        "homography": [[float(m[r, c]) for c in range(3)] for r in range(3)],
        "scale": [sub.scale.rx, sub.scale.ry],
    }


def _sub_area_from(r: jsonio.DocReader) -> SubArea:
    rows = [row.fixed_list(3) for row in r.key("homography").fixed_list(3)]
    matrix = [[cell.real() for cell in row] for row in rows]
    canon = r.key("canonical").real_pair()
    origin = r.key("mg_origin").real_pair()
    scale = r.key("scale").real_pair()
    return SubArea(
        index=r.key("index").integer(),
        src=_quad_from(r.key("src_quad")),
        canonical_width=canon[0],
        canonical_height=canon[1],
        mg_origin=ModelPoint2D(*origin),
        homography=Homography(matrix),
        scale=ScaleRatios(*scale),
    )


def calibration_doc(cal: Calibration) -> dict:
    """The document form of a calibration (what save_calibration writes)."""
    cameras = []
    for cam in cal.cameras:
        cameras.append(
            {
                "id": cam.camera_id,
                "role": cam.role.label(),
                "resolution": [cam.resolution[0], cam.resolution[1]],
                "mde_h": cam.mde_h,
                "mde_v": cam.mde_v,
                "sub_areas": [_sub_area_doc(s) for s in cam.sub_areas],
            }
        )
    return {
        "format_version": FORMAT_VERSION,
        "grid_a": {
            "w_mm": cal.rig.grid_a.w_mm,
            "d_mm": cal.rig.grid_a.d_mm,
            "h_mm": cal.rig.grid_a.h_mm,
        },
        "px_per_mm": cal.rig.px_per_mm,
        "marker_count": cal.rig.marker_count,
        "axis_map": _axis_map_doc(cal.axis_map),
        "cameras": cameras,
    }


def calibration_from_doc(doc: dict) -> Calibration:
    root = jsonio.DocReader(doc)
    version = root.key("format_version").integer()
    if version != FORMAT_VERSION:
        raise VersionMismatch(
            f"calibration format_version {version} unsupported "
            f"(this build reads {FORMAT_VERSION})"
        )
    grid = root.key("grid_a")
    grid_a = GridBox(
        WorldPoint3D(0.0, 0.0, 0.0),
        grid.key("w_mm").real(),
        grid.key("d_mm").real(),
        grid.key("h_mm").real(),
    )
    marker_count_r = root.optional_key("marker_count")
    rig = RigGeometry(
        grid_a,
        px_per_mm=root.key("px_per_mm").real(),
        marker_count=(
            marker_count_r.integer() if marker_count_r else DEFAULT_MARKER_COUNT
        ),
    )
    axis_map_r = root.optional_key("axis_map")
    axis_map = _axis_map_from(axis_map_r) if axis_map_r else default_axis_map(grid_a)
    cameras = []
    for cam_r in root.key("cameras").items():
        res = cam_r.key("resolution").fixed_list(2)
        cameras.append(
            CameraProfile(
                camera_id=cam_r.key("id").string(),
                role=CameraRole.from_label(cam_r.key("role").string()),
                resolution=(res[0].integer(), res[1].integer()),
                sub_areas=tuple(
                    _sub_area_from(s) for s in cam_r.key("sub_areas").items()
                ),
                mde_h=cam_r.key("mde_h").real(),
                mde_v=cam_r.key("mde_v").real(),
            )
        )
    return Calibration(rig, tuple(cameras), axis_map)


def save_calibration(path, cal: Calibration) -> None:
    jsonio.write_doc(path, calibration_doc(cal))


def load_calibration(path) -> Calibration:
    return calibration_from_doc(jsonio.read_doc(path))


# --- building a calibration from marker picks -------------------------------


@dataclass(frozen=True)
class SubAreaPick:
    """One sub-area's manual inputs: quad, canonical dims, grid placement."""

    index: int
    src_quad: Quad
    canonical: tuple[float, float]
    mg_origin: tuple[float, float]
    required: tuple[float, float] | None = None


@dataclass(frozen=True)
class CameraPicks:
    camera_id: str
    role: CameraRole
    resolution: tuple[int, int]
    sub_areas: tuple[SubAreaPick, ...]
    face_n_quad: Quad | None = None
    face_f_quad: Quad | None = None


@dataclass(frozen=True)
class MarkerPicks:
    """Parsed contents of a marker-picks document."""

    rig: RigGeometry
    axis_map: AxisMap
    cameras: tuple[CameraPicks, ...]


def load_marker_picks(path) -> MarkerPicks:
    doc = jsonio.read_doc(path)
    root = jsonio.DocReader(doc)
    version = root.key("format_version").integer()
    if version != FORMAT_VERSION:
        raise VersionMismatch(
            f"marker picks format_version {version} unsupported "
            f"(this build reads {FORMAT_VERSION})"
        )
    grid = root.key("grid_a")
    grid_a = GridBox(
        WorldPoint3D(0.0, 0.0, 0.0),
        grid.key("w_mm").real(),
        grid.key("d_mm").real(),
        grid.key("h_mm").real(),
    )
    marker_count_r = root.optional_key("marker_count")
    rig = RigGeometry(
        grid_a,
        px_per_mm=root.key("px_per_mm").real(),
        marker_count=(
            marker_count_r.integer() if marker_count_r else DEFAULT_MARKER_COUNT
        ),
    )
    axis_map_r = root.optional_key("axis_map")
    axis_map = _axis_map_from(axis_map_r) if axis_map_r else default_axis_map(grid_a)
    cameras = []
    for cam_r in root.key("cameras").items():
        res = cam_r.key("resolution").fixed_list(2)
        subs = []
        for s in cam_r.key("sub_areas").items():
            required_r = s.optional_key("required")
            subs.append(
                SubAreaPick(
                    index=s.key("index").integer(),
                    src_quad=_quad_from(s.key("src_quad")),
                    canonical=s.key("canonical").real_pair(),
                    mg_origin=s.key("mg_origin").real_pair(),
                    required=required_r.real_pair() if required_r else None,
                )
            )
        depth_r = cam_r.optional_key("depth_markers")
        face_n = face_f = None
        if depth_r is not None:
            face_n = _quad_from(depth_r.key("face_n"))
            face_f = _quad_from(depth_r.key("face_f"))
        cameras.append(
            CameraPicks(
                camera_id=cam_r.key("id").string(),
                role=CameraRole.from_label(cam_r.key("role").string()),
                resolution=(res[0].integer(), res[1].integer()),
                sub_areas=tuple(subs),
                face_n_quad=face_n,
                face_f_quad=face_f,
            )
        )
    return MarkerPicks(rig, axis_map, tuple(cameras))


def marker_picks_doc(picks: MarkerPicks) -> dict:
    cameras = []
    for cam in picks.cameras:
        entry: dict = {
            "id": cam.camera_id,
            "role": cam.role.label(),
            "resolution": [cam.resolution[0], cam.resolution[1]],
            "sub_areas": [
                {
                    "index": s.index,
                    "src_quad": _quad_doc(s.src_quad),
                    "canonical": [s.canonical[0], s.canonical[1]],
                    "mg_origin": [s.mg_origin[0], s.mg_origin[1]],
                    **(
                        {"required": [s.required[0], s.required[1]]}
                        if s.required
                        else {}
                    ),
                }
                for s in cam.sub_areas
            ],
        }
        if cam.face_n_quad is not None and cam.face_f_quad is not None:
            entry["depth_markers"] = {
                "face_n": _quad_doc(cam.face_n_quad),
                "face_f": _quad_doc(cam.face_f_quad),
            }
        cameras.append(entry)
    return {
        "format_version": FORMAT_VERSION,
        "grid_a": {
            "w_mm": picks.rig.grid_a.w_mm,
            "d_mm": picks.rig.grid_a.d_mm,
            "h_mm": picks.rig.grid_a.h_mm,
        },
        "px_per_mm": picks.rig.px_per_mm,
        "marker_count": picks.rig.marker_count,
        "axis_map": _axis_map_doc(picks.axis_map),
        "cameras": cameras,
    }


def build_calibration(picks: MarkerPicks, mde_aggregate: str = "max") -> Calibration:
    """Fit every camera's sub-areas and measure MDE where markers allow."""
    cameras = []
    for cam in picks.cameras:
        sub_areas = tuple(
            build_sub_area(s.index, s.src_quad, s.canonical, s.mg_origin, s.required)
            for s in cam.sub_areas
        )
        profile = CameraProfile(
            camera_id=cam.camera_id,
            role=cam.role,
            resolution=cam.resolution,
            sub_areas=sub_areas,
        )
        if cam.face_n_quad is not None and cam.face_f_quad is not None:
            mde_h, mde_v = measure_mde(
                profile, cam.face_n_quad, cam.face_f_quad, aggregate=mde_aggregate
            )
            profile = replace(profile, mde_h=mde_h, mde_v=mde_v)
        cameras.append(profile)
    return Calibration(picks.rig, tuple(cameras), picks.axis_map)

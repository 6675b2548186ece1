"""Detection CSV parsing and cross-camera frame synchronization.

The detector side of the system hands over per-camera CSV files with the
fixed header ``camera_id,frame_index,timestamp_ms,u_min,v_min,u_max,v_max,
confidence``.  Parsing runs in strict mode (first bad row aborts with a
CsvError naming row and column) or lenient mode (bad rows are skipped and
reported).  Cameras run free, so bundles are assembled by greedy
nearest-timestamp grouping around a reference camera.
"""

from __future__ import annotations

import bisect
import csv
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import CsvError
from .geometry import PixelPoint

CSV_HEADER = (
    "camera_id",
    "frame_index",
    "timestamp_ms",
    "u_min",
    "v_min",
    "u_max",
    "v_max",
    "confidence",
)

DEFAULT_SYNC_TOLERANCE_MS = 25.0


@dataclass(frozen=True)
class Detection:
    """One detector hit: an axis-aligned box in one camera at one time.

    ``frame_index`` is carried through untouched as opaque metadata.
    """

    camera_id: str
    frame_index: str
    timestamp_ms: float
    u_min: float
    v_min: float
    u_max: float
    v_max: float
    confidence: float

    def __post_init__(self):
        if not self.camera_id:
            raise ValueError("camera_id must be non-empty")
        if self.timestamp_ms < 0:
            raise ValueError(f"timestamp_ms must be >= 0, got {self.timestamp_ms}")
        if not self.u_min < self.u_max:
            raise ValueError(f"need u_min < u_max, got {self.u_min} >= {self.u_max}")
        if not self.v_min < self.v_max:
            raise ValueError(f"need v_min < v_max, got {self.v_min} >= {self.v_max}")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence must be in [0, 1], got {self.confidence}")

    @property
    def area(self) -> float:
        return (self.u_max - self.u_min) * (self.v_max - self.v_min)

    @property
    def bbox(self) -> tuple[float, float, float, float]:
        return (self.u_min, self.v_min, self.u_max, self.v_max)


def bbox_center(det: Detection) -> PixelPoint:
    """Midpoint of the detection box."""
    return PixelPoint(
        (det.u_min + det.u_max) / 2.0, (det.v_min + det.v_max) / 2.0
    )


@dataclass
class ParseResult:
    """Detections plus, in lenient mode, the rows that were rejected."""

    detections: list[Detection]
    errors: list[CsvError]

    @property
    def skipped(self) -> int:
        return len(self.errors)


_FLOAT_COLUMNS = ("timestamp_ms", "u_min", "v_min", "u_max", "v_max", "confidence")


def parse_detections(lines: Iterable[str], strict: bool = False) -> ParseResult:
    """Parse detection rows from an iterable of CSV lines.

    Args:
        lines: the file content, header row first.
        strict: raise on the first malformed row instead of skipping it.
    """
    reader = csv.reader(lines)
    detections: list[Detection] = []
    errors: list[CsvError] = []

    def bad(row_no: int, column: str, reason: str):
        err = CsvError(row_no, column, reason)
        if strict:
            raise err
        errors.append(err)

    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != CSV_HEADER:
        raise CsvError(1, "", f"expected header {','.join(CSV_HEADER)}")
    for row_no, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(CSV_HEADER):
            bad(row_no, "", f"expected {len(CSV_HEADER)} fields, got {len(row)}")
            continue
        fields = dict(zip(CSV_HEADER, (f.strip() for f in row)))
        values: dict[str, float] = {}
        ok = True
        for name in _FLOAT_COLUMNS:
            try:
                values[name] = float(fields[name])
            except ValueError:
                bad(row_no, name, f"not a number: {fields[name]!r}")
                ok = False
                break
        if not ok:
            continue
        try:
            det = Detection(
                camera_id=fields["camera_id"],
                frame_index=fields["frame_index"],
                timestamp_ms=values["timestamp_ms"],
                u_min=values["u_min"],
                v_min=values["v_min"],
                u_max=values["u_max"],
                v_max=values["v_max"],
                confidence=values["confidence"],
            )
        except ValueError as exc:
            bad(row_no, "", str(exc))
            continue
        detections.append(det)
    return ParseResult(detections, errors)


def parse_detections_file(path, strict: bool = False) -> ParseResult:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return parse_detections(fh, strict=strict)


def _format_real(x: float) -> str:
    # repr of a float is the shortest string that parses back exactly
    return repr(x)


def write_detections(path, detections: Iterable[Detection]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(CSV_HEADER) + "\n")
        for d in detections:
            fh.write(
                ",".join(
                    (
                        d.camera_id,
                        d.frame_index,
                        _format_real(d.timestamp_ms),
                        _format_real(d.u_min),
                        _format_real(d.v_min),
                        _format_real(d.u_max),
                        _format_real(d.v_max),
                        _format_real(d.confidence),
                    )
                )
                + "\n"
            )


def select_primary(detections: Iterable[Detection]) -> Detection | None:
    """The single detection that represents a camera frame.

    Highest confidence wins; ties fall to the larger box, then to the
    lexicographically smallest box tuple so the choice is deterministic.
    """
    best: Detection | None = None
    best_key = None
    for det in detections:
        key = (-det.confidence, -det.area, det.bbox)
        if best is None or key < best_key:
            best, best_key = det, key
    return best


@dataclass(frozen=True)
class FrameBundle:
    """At most one detection per camera, grouped around one instant."""

    timestamp_ms: float
    per_camera: Mapping[str, Detection]

    def cameras(self) -> tuple[str, ...]:
        return tuple(sorted(self.per_camera))


def synchronize(
    detections: Iterable[Detection],
    tolerance_ms: float = DEFAULT_SYNC_TOLERANCE_MS,
    reference_camera: str | None = None,
) -> list[FrameBundle]:
    """Group per-camera detections into time-aligned bundles.

    Within each camera, detections sharing a timestamp are first reduced to
    one representative via select_primary.  The reference camera's
    detections then seed one bundle each, in time order; every other camera
    contributes its nearest-in-time unused detection when the offset is
    within ``tolerance_ms`` (an exact tie between an earlier and a later
    candidate takes the earlier one).  No detection lands in two bundles,
    and the bundle count never exceeds the reference camera's detection
    count.

    Args:
        reference_camera: camera id to group around.  When absent from the
            data (or None), the camera whose first detection is earliest is
            used, ties broken by camera id.
    """
    if tolerance_ms < 0:
        raise ValueError(f"tolerance_ms must be >= 0, got {tolerance_ms}")
    per_frame: dict[tuple[str, float], list[Detection]] = {}
    for det in detections:
        per_frame.setdefault((det.camera_id, det.timestamp_ms), []).append(det)
    by_camera: dict[str, list[Detection]] = {}
    for (camera_id, _), group in per_frame.items():
        chosen = select_primary(group)
        assert chosen is not None
        by_camera.setdefault(camera_id, []).append(chosen)
    for dets in by_camera.values():
        dets.sort(key=lambda d: d.timestamp_ms)
    if not by_camera:
        return []

    if reference_camera is None or reference_camera not in by_camera:
        reference_camera = min(
            by_camera, key=lambda cam: (by_camera[cam][0].timestamp_ms, cam)
        )

    times: dict[str, list[float]] = {
        cam: [d.timestamp_ms for d in dets] for cam, dets in by_camera.items()
    }
    used: dict[str, set[int]] = {cam: set() for cam in by_camera}

    def claim_nearest(cam: str, t: float) -> Detection | None:
        ts = times[cam]
        taken = used[cam]
        i = bisect.bisect_left(ts, t)
        best_idx = None
        best_delta = None
        # scan outward from the insertion point, preferring the earlier
        # candidate on exact ties
        for idx in (i - 1, i):
            j = idx
            step = -1 if idx == i - 1 else 1
            while 0 <= j < len(ts) and j in taken:
                j += step
            if 0 <= j < len(ts):
                delta = abs(ts[j] - t)
                if delta <= tolerance_ms and (
                    best_delta is None
                    or delta < best_delta
                    or (delta == best_delta and ts[j] < ts[best_idx])
                ):
                    best_idx, best_delta = j, delta
        if best_idx is None:
            return None
        taken.add(best_idx)
        return by_camera[cam][best_idx]

    bundles: list[FrameBundle] = []
    for ref_idx, ref_det in enumerate(by_camera[reference_camera]):
        used[reference_camera].add(ref_idx)
        members = {reference_camera: ref_det}
        for cam in sorted(by_camera):
            if cam == reference_camera:
                continue
            hit = claim_nearest(cam, ref_det.timestamp_ms)
            if hit is not None:
                members[cam] = hit
        bundles.append(FrameBundle(ref_det.timestamp_ms, members))
    return bundles

"""Independent reference implementations used to check the library.

Everything here is deliberately written from first principles with a
different mechanism than the production code: linear algebra goes through
numpy solvers instead of hand-rolled elimination, synchronization is a
quadratic scan instead of bisect bookkeeping, detection metrics are a
brute-force staircase enumeration.  Tests compare the two routes.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np


# --- homography via numpy ---------------------------------------------------


def homography_oracle(src_corners, dst_corners) -> np.ndarray:
    """Solve the four-point direct linear transform with numpy.

    ``src_corners``/``dst_corners`` are sequences of four (x, y) pairs.
    Returns the 3x3 matrix with bottom-right entry 1.
    """
    a = np.zeros((8, 8))
    b = np.zeros(8)
    for i, ((x, y), (xx, yy)) in enumerate(zip(src_corners, dst_corners)):
        a[2 * i] = [x, y, 1.0, 0.0, 0.0, 0.0, -xx * x, -xx * y]
        b[2 * i] = xx
        a[2 * i + 1] = [0.0, 0.0, 0.0, x, y, 1.0, -yy * x, -yy * y]
        b[2 * i + 1] = yy
    h = np.linalg.solve(a, b)
    return np.array(
        [[h[0], h[1], h[2]], [h[3], h[4], h[5]], [h[6], h[7], 1.0]]
    )


def apply_matrix(m: np.ndarray, x: float, y: float) -> tuple[float, float]:
    v = m @ np.array([x, y, 1.0])
    return float(v[0] / v[2]), float(v[1] / v[2])


# --- similar-triangles pinhole predictions ----------------------------------


def pinhole_mde_oracle(
    half_width_mm: float,
    half_height_mm: float,
    depth_mm: float,
    camera_distance_mm: float,
) -> tuple[float, float]:
    """Expected per-axis maximum depth error for a mid-height side camera.

    A far-face corner sits ``depth_mm`` behind the near face.  By similar
    triangles its apparent position in the rectified near-face frame is
    pulled toward the centre by the factor ``distance / (distance + depth)``,
    so the largest apparent shift per axis is the corner offset times
    ``depth / (distance + depth)``.
    """
    pull = depth_mm / (camera_distance_mm + depth_mm)
    return half_width_mm * pull, half_height_mm * pull


def pinhole_projection_oracle(
    focal_px: float,
    centre_px: tuple[float, float],
    lateral_mm: float,
    vertical_mm: float,
    depth_mm: float,
) -> tuple[float, float]:
    """u, v for a point expressed in a camera's own (right, down, axis) frame."""
    return (
        centre_px[0] + focal_px * lateral_mm / depth_mm,
        centre_px[1] + focal_px * vertical_mm / depth_mm,
    )


# --- quadratic synchronization ----------------------------------------------


def naive_synchronize(detections, tolerance_ms, reference_camera=None):
    """Reference grouping: same rules as the library, quadratic scans.

    Returns a list of (timestamp, {camera_id: detection}) tuples.
    """
    per_frame = {}
    for det in detections:
        per_frame.setdefault((det.camera_id, det.timestamp_ms), []).append(det)
    by_camera = {}
    for (cam, _), group in per_frame.items():
        chosen = min(group, key=lambda d: (-d.confidence, -d.area, d.bbox))
        by_camera.setdefault(cam, []).append(chosen)
    for dets in by_camera.values():
        dets.sort(key=lambda d: d.timestamp_ms)
    if not by_camera:
        return []
    if reference_camera is None or reference_camera not in by_camera:
        reference_camera = min(
            by_camera, key=lambda cam: (by_camera[cam][0].timestamp_ms, cam)
        )
    used = {cam: [False] * len(dets) for cam, dets in by_camera.items()}
    bundles = []
    for ref_idx, ref in enumerate(by_camera[reference_camera]):
        used[reference_camera][ref_idx] = True
        members = {reference_camera: ref}
        for cam in sorted(by_camera):
            if cam == reference_camera:
                continue
            best = None
            for idx, det in enumerate(by_camera[cam]):
                if used[cam][idx]:
                    continue
                delta = abs(det.timestamp_ms - ref.timestamp_ms)
                if delta > tolerance_ms:
                    continue
                key = (delta, det.timestamp_ms)
                if best is None or key < best[0]:
                    best = (key, idx, det)
            if best is not None:
                used[cam][best[1]] = True
                members[cam] = best[2]
        bundles.append((ref.timestamp_ms, members))
    return bundles


# --- detection metrics by brute force ---------------------------------------


def iou_oracle(a, b) -> float:
    ax0, ay0, ax1, ay1 = a
    bx0, by0, bx1, by1 = b
    iw = min(ax1, bx1) - max(ax0, bx0)
    ih = min(ay1, by1) - max(ay0, by0)
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    union = (ax1 - ax0) * (ay1 - ay0) + (bx1 - bx0) * (by1 - by0) - inter
    return inter / union


def match_oracle(predictions, ground_truth, threshold):
    """Greedy confidence-ordered matching; returns per-prediction TP flags
    in ranked order plus (tp, fp, fn).

    ``predictions`` are objects with .frame_index, .confidence, .bbox;
    ``ground_truth`` objects with .frame_id and box corner fields.
    """
    order = sorted(
        range(len(predictions)), key=lambda i: (-predictions[i].confidence, i)
    )
    taken = [False] * len(ground_truth)
    flags = []
    for i in order:
        pred = predictions[i]
        best_j = None
        best_iou = 0.0
        for j, gt in enumerate(ground_truth):
            if taken[j] or gt.frame_id != pred.frame_index:
                continue
            overlap = iou_oracle(
                pred.bbox, (gt.u_min, gt.v_min, gt.u_max, gt.v_max)
            )
            if overlap >= threshold and overlap > best_iou:
                best_j, best_iou = j, overlap
        if best_j is None:
            flags.append(False)
        else:
            taken[best_j] = True
            flags.append(True)
    tp = sum(flags)
    fp = len(flags) - tp
    fn = len(ground_truth) - tp
    return flags, (tp, fp, fn)


def ap_oracle(predictions, ground_truth, threshold) -> float:
    """101-point interpolated average precision, enumerated directly."""
    if not ground_truth:
        raise ValueError("AP undefined without ground truth")
    if not predictions:
        return 0.0
    flags, _ = match_oracle(predictions, ground_truth, threshold)
    points = []
    tp = fp = 0
    for flag in flags:
        if flag:
            tp += 1
        else:
            fp += 1
        points.append((tp / (tp + fp), tp / len(ground_truth)))
    total = 0.0
    for k in range(101):
        r = k / 100.0
        best = 0.0
        for precision, recall in points:
            if recall >= r and precision > best:
                best = precision
        total += best
    return total / 101.0


# --- side-camera presence enumeration ---------------------------------------

_ADJACENT = ((0, 1), (1, 2), (2, 3), (3, 0))


def has_adjacent_pair(pattern) -> bool:
    """Whether a set of present side indices contains a 90-degree pair."""
    present = set(pattern)
    return any(a in present and b in present for a, b in _ADJACENT)


def plot_rate_enumeration(presence: Fraction) -> Fraction:
    """P(an adjacent pair is present | at least one side is present).

    Exhausts all 16 presence patterns of the four side cameras, each side
    independently present with the given probability.
    """
    p, q = presence, 1 - presence
    num = Fraction(0)
    den = Fraction(0)
    for mask in range(16):
        pattern = [i for i in range(4) if mask >> i & 1]
        weight = p ** len(pattern) * q ** (4 - len(pattern))
        if pattern:
            den += weight
            if has_adjacent_pair(pattern):
                num += weight
    return num / den


def mean_point_error(track_points, truth_by_timestamp) -> float:
    """Plain recomputation of the mean 3D distance to ground truth."""
    errs = []
    for p in track_points:
        g = truth_by_timestamp[p.timestamp_ms]
        errs.append(
            math.sqrt(
                (p.position.x - g.x) ** 2
                + (p.position.y - g.y) ** 2
                + (p.position.z - g.z) ** 2
            )
        )
    return sum(errs) / len(errs)

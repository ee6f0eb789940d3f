"""Exact hypervolume by dimension sweep, plus the pairwise IBEA indicator."""

from __future__ import annotations

import numpy as np


def _hv(points: np.ndarray, ref: np.ndarray) -> float:
    d = points.shape[1]
    if d == 1:
        return float(ref[0] - points[:, 0].min())
    # slabs along the last axis; each slab's cross-section is the (d-1)-volume
    # of every point at or below the slab floor
    order = np.argsort(points[:, -1], kind="stable")
    pts = points[order]
    total = 0.0
    for i in range(len(pts)):
        top = pts[i + 1, -1] if i + 1 < len(pts) else ref[-1]
        height = top - pts[i, -1]
        if height > 0:
            total += _hv(pts[: i + 1, :-1], ref[:-1]) * height
    return total


def _hv2(points: np.ndarray, ref: np.ndarray) -> float:
    order = np.lexsort((points[:, 1], points[:, 0]))
    total = 0.0
    best_y = ref[1]
    xs = points[order, 0]
    ys = points[order, 1]
    for i in range(len(xs)):
        if ys[i] < best_y:
            total += (ref[0] - xs[i]) * (best_y - ys[i])
            best_y = ys[i]
    return float(total)


def hypervolume(points, ref) -> float:
    """Volume dominated by ``points`` and bounded by ``ref`` (minimization).

    Points that do not strictly dominate ``ref`` on every axis are dropped.
    """
    ref = np.asarray(ref, dtype=float)
    pts = np.asarray(points, dtype=float).reshape(-1, len(ref))
    pts = pts[np.all(pts < ref, axis=1)]
    if len(pts) == 0:
        return 0.0
    if pts.shape[1] == 2:
        return _hv2(pts, ref)
    if pts.shape[1] == 3:
        order = np.argsort(pts[:, 2], kind="stable")
        pts = pts[order]
        total = 0.0
        for i in range(len(pts)):
            top = pts[i + 1, 2] if i + 1 < len(pts) else ref[2]
            height = top - pts[i, 2]
            if height > 0:
                total += _hv2(pts[: i + 1, :2], ref[:2]) * height
        return total
    return _hv(pts, ref)


def hv_indicator_matrix(F: np.ndarray, ref: np.ndarray) -> np.ndarray:
    """``I[i, j]`` = additive hypervolume indicator I_HD({x_i}, {x_j}).

    If x_i weakly dominates x_j this is HV(x_j) - HV(x_i) (<= 0); otherwise it
    is the volume x_j dominates that x_i does not.
    """
    ref = np.asarray(ref, dtype=float)
    vol = np.prod(np.clip(ref - F, 0.0, None), axis=1)
    joint = np.maximum(F[:, None, :], F[None, :, :])
    vol_joint = np.prod(np.clip(ref - joint, 0.0, None), axis=-1)
    weak = np.all(F[:, None, :] <= F[None, :, :], axis=-1)
    return np.where(weak, vol[None, :] - vol[:, None], vol[None, :] - vol_joint)

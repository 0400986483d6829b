"""Hot raster kernels: bilinear homography sampling and disc stamping.

Both kernels exist as pure-numpy implementations and numba @njit loops.
The active backend is chosen at import time from CALLISENSE_KERNELS:

    unset / "numba"  use the jitted loops (falls back to numpy if numba is
                     missing, unless "numba" was requested explicitly)
    "numpy"          force the vectorized numpy path

The two paths are kept arithmetically identical (same operation order, no
fastmath) so outputs match bit-for-bit; tests/test_kernels.py asserts parity.
"""

from __future__ import annotations

import os

import numpy as np

WHITE = 255.0


def warp_bilinear_numpy(src: np.ndarray, hinv: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    """Sample src at hinv @ (x+0.5, y+0.5, 1) for each output pixel center.

    Bilinear interpolation; neighbours outside src contribute white (255).
    """
    src_f = src.astype(np.float64)
    h, w = src.shape
    xs = np.arange(out_w, dtype=np.float64) + 0.5
    ys = np.arange(out_h, dtype=np.float64) + 0.5
    gx, gy = np.meshgrid(xs, ys)
    denom = hinv[2, 0] * gx + hinv[2, 1] * gy + hinv[2, 2]
    sx = (hinv[0, 0] * gx + hinv[0, 1] * gy + hinv[0, 2]) / denom
    sy = (hinv[1, 0] * gx + hinv[1, 1] * gy + hinv[1, 2]) / denom

    fx = sx - 0.5
    fy = sy - 0.5
    x0 = np.floor(fx).astype(np.int64)
    y0 = np.floor(fy).astype(np.int64)
    wx = fx - x0
    wy = fy - y0

    def fetch(xi, yi):
        inside = (xi >= 0) & (xi < w) & (yi >= 0) & (yi < h)
        v = src_f[np.clip(yi, 0, h - 1), np.clip(xi, 0, w - 1)]
        return np.where(inside, v, WHITE)

    v00 = fetch(x0, y0)
    v10 = fetch(x0 + 1, y0)
    v01 = fetch(x0, y0 + 1)
    v11 = fetch(x0 + 1, y0 + 1)
    top = v00 + wx * (v10 - v00)
    bot = v01 + wx * (v11 - v01)
    val = top + wy * (bot - top)
    return np.floor(val + 0.5).clip(0, 255).astype(np.uint8)


def stamp_discs_numpy(canvas: np.ndarray, cx: np.ndarray, cy: np.ndarray,
                      radius: float, value: int = 0) -> None:
    """Paint filled discs in place; a pixel is inside when its center is within radius."""
    h, w = canvas.shape
    r2 = radius * radius
    for k in range(cx.shape[0]):
        x, y = cx[k], cy[k]
        x_lo = max(int(np.floor(x - radius - 1.0)), 0)
        x_hi = min(int(np.ceil(x + radius + 1.0)), w - 1)
        y_lo = max(int(np.floor(y - radius - 1.0)), 0)
        y_hi = min(int(np.ceil(y + radius + 1.0)), h - 1)
        if x_lo > x_hi or y_lo > y_hi:
            continue
        pxs = np.arange(x_lo, x_hi + 1, dtype=np.float64) + 0.5 - x
        pys = np.arange(y_lo, y_hi + 1, dtype=np.float64) + 0.5 - y
        inside = (pys * pys)[:, None] + (pxs * pxs)[None, :] <= r2
        block = canvas[y_lo:y_hi + 1, x_lo:x_hi + 1]
        block[inside] = value


def _build_numba():
    from numba import njit

    @njit(cache=True)
    def warp_bilinear_jit(src, hinv, out_w, out_h):
        h, w = src.shape
        out = np.empty((out_h, out_w), dtype=np.uint8)
        for oy in range(out_h):
            gy = oy + 0.5
            for ox in range(out_w):
                gx = ox + 0.5
                denom = hinv[2, 0] * gx + hinv[2, 1] * gy + hinv[2, 2]
                sx = (hinv[0, 0] * gx + hinv[0, 1] * gy + hinv[0, 2]) / denom
                sy = (hinv[1, 0] * gx + hinv[1, 1] * gy + hinv[1, 2]) / denom
                fx = sx - 0.5
                fy = sy - 0.5
                x0 = int(np.floor(fx))
                y0 = int(np.floor(fy))
                wx = fx - x0
                wy = fy - y0
                if 0 <= x0 < w and 0 <= y0 < h:
                    v00 = float(src[y0, x0])
                else:
                    v00 = WHITE
                if 0 <= x0 + 1 < w and 0 <= y0 < h:
                    v10 = float(src[y0, x0 + 1])
                else:
                    v10 = WHITE
                if 0 <= x0 < w and 0 <= y0 + 1 < h:
                    v01 = float(src[y0 + 1, x0])
                else:
                    v01 = WHITE
                if 0 <= x0 + 1 < w and 0 <= y0 + 1 < h:
                    v11 = float(src[y0 + 1, x0 + 1])
                else:
                    v11 = WHITE
                top = v00 + wx * (v10 - v00)
                bot = v01 + wx * (v11 - v01)
                val = top + wy * (bot - top)
                val = np.floor(val + 0.5)
                if val < 0.0:
                    val = 0.0
                elif val > 255.0:
                    val = 255.0
                out[oy, ox] = np.uint8(val)
        return out

    @njit(cache=True)
    def stamp_discs_jit(canvas, cx, cy, radius, value):
        h, w = canvas.shape
        r2 = radius * radius
        for k in range(cx.shape[0]):
            x = cx[k]
            y = cy[k]
            x_lo = max(int(np.floor(x - radius - 1.0)), 0)
            x_hi = min(int(np.ceil(x + radius + 1.0)), w - 1)
            y_lo = max(int(np.floor(y - radius - 1.0)), 0)
            y_hi = min(int(np.ceil(y + radius + 1.0)), h - 1)
            for py in range(y_lo, y_hi + 1):
                dy = py + 0.5 - y
                for px in range(x_lo, x_hi + 1):
                    dx = px + 0.5 - x
                    if dx * dx + dy * dy <= r2:
                        canvas[py, px] = value

    return warp_bilinear_jit, stamp_discs_jit


_requested = os.environ.get("CALLISENSE_KERNELS", "").strip().lower()
if _requested not in ("", "numpy", "numba"):
    raise RuntimeError(f"CALLISENSE_KERNELS must be 'numpy' or 'numba', got {_requested!r}")

_warp_jit = None
_stamp_jit = None
if _requested != "numpy":
    try:
        _warp_jit, _stamp_jit = _build_numba()
    except ImportError:
        if _requested == "numba":
            raise
        _warp_jit = _stamp_jit = None


def active_backend() -> str:
    return "numba" if _warp_jit is not None else "numpy"


def warp_bilinear(src: np.ndarray, hinv: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    src = np.ascontiguousarray(src, dtype=np.uint8)
    hinv = np.ascontiguousarray(hinv, dtype=np.float64)
    if _warp_jit is not None:
        return _warp_jit(src, hinv, out_w, out_h)
    return warp_bilinear_numpy(src, hinv, out_w, out_h)


def stamp_discs(canvas: np.ndarray, cx: np.ndarray, cy: np.ndarray,
                radius: float, value: int = 0) -> None:
    cx = np.ascontiguousarray(cx, dtype=np.float64)
    cy = np.ascontiguousarray(cy, dtype=np.float64)
    if _stamp_jit is not None:
        _stamp_jit(canvas, cx, cy, float(radius), np.uint8(value))
    else:
        stamp_discs_numpy(canvas, cx, cy, float(radius), value)

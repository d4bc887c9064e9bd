"""Headless frame renderer writing binary PPM (P6) images.

Each cell is painted with the colour of its strongest channel (home blue,
cooperative food green, misleading food red, cautionary yellow), scaled
linearly from the background at 0 to full colour at 1000, and fills a
``c x c`` block so frames are always ``W x H`` pixels.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .config import SimConfig
from .engine import Snapshot, run
from .grid import FOOD, MAX_INTENSITY, NEST

BACKGROUND = np.array([0, 0, 0], dtype=np.float64)
CHANNEL_COLORS = np.array(
    [
        [40, 90, 255],  # home
        [0, 220, 0],  # food_coop
        [255, 30, 30],  # food_mislead
        [255, 230, 0],  # cautionary
    ],
    dtype=np.float64,
)
NEST_COLOR = np.array([160, 100, 40], dtype=np.uint8)
FOOD_COLOR = np.array([200, 255, 200], dtype=np.uint8)
COOPERATOR_COLOR = np.array([255, 255, 255], dtype=np.uint8)
DETRACTOR_COLOR = np.array([255, 0, 255], dtype=np.uint8)


def frame_pixels(snap: Snapshot, config: SimConfig) -> np.ndarray:
    """RGB image of shape ``(H, W, 3)``; row 0 is ``y = 0``."""
    channels = snap.channels
    winner = np.argmax(channels, axis=0)
    strength = np.take_along_axis(channels, winner[None], axis=0)[0] / MAX_INTENSITY
    rgb = BACKGROUND + (CHANNEL_COLORS[winner] - BACKGROUND) * strength[..., None]
    cells = np.rint(rgb).astype(np.uint8)
    cells[snap.kind == NEST] = NEST_COLOR
    cells[snap.kind == FOOD] = FOOD_COLOR
    # (nx, ny, 3) -> (ny, nx, 3) -> upsample by c
    c = int(round(config.c))
    img = np.repeat(np.repeat(cells.transpose(1, 0, 2), c, axis=0), c, axis=1)
    h, w = img.shape[:2]
    px = np.clip(snap.x.astype(np.int64), 0, w - 1)
    py = np.clip(snap.y.astype(np.int64), 0, h - 1)
    coop = snap.role == 0
    img[py[coop], px[coop]] = COOPERATOR_COLOR
    img[py[~coop], px[~coop]] = DETRACTOR_COLOR
    return img


def write_ppm(path: str | Path, pixels: np.ndarray) -> Path:
    path = Path(path)
    h, w = pixels.shape[:2]
    with open(path, "wb") as fh:
        fh.write(b"P6\n%d %d\n255\n" % (w, h))
        fh.write(np.ascontiguousarray(pixels, dtype=np.uint8).tobytes())
    return path


def read_ppm(path: str | Path) -> np.ndarray:
    data = Path(path).read_bytes()
    parts = data.split(maxsplit=4)
    if parts[0] != b"P6":
        raise ValueError(f"{path}: not a binary PPM")
    w, h, maxval = int(parts[1]), int(parts[2]), int(parts[3])
    if maxval != 255:
        raise ValueError(f"{path}: unsupported maxval {maxval}")
    return np.frombuffer(parts[4][: w * h * 3], dtype=np.uint8).reshape(h, w, 3)


def render_frames(config: SimConfig, interval: int, out_dir: str | Path, prefix: str = "frame"):
    """Run ``config`` and write ``<prefix>_<step>.ppm`` every ``interval`` steps.

    Returns the run result and the list of written paths.
    """
    if interval < 1:
        raise ValueError("interval must be >= 1")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    width = len(str(config.N))
    paths: list[Path] = []

    def emit(snap: Snapshot) -> None:
        paths.append(write_ppm(out / f"{prefix}_{snap.step:0{width}d}.ppm", frame_pixels(snap, config)))

    result = run(config, on_snapshot=emit, snapshot_every=interval)
    return result, paths

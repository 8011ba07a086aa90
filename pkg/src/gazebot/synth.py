"""Synthetic eye-image generator.

Renders a light sclera ellipse on a skin-toned background with a dark
iris/pupil disc whose center is displaced toward the gaze direction
(Straight stays centered). Seeded noise, brightness jitter and small
placement offsets make every sample unique yet fully deterministic for
a given (class, seed, params) triple.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from gazebot.classes import DEFAULT_CLASS_COUNTS, GazeClass

# unit displacement of the iris center per class, image coordinates
# (x grows right, y grows down)
_DIRECTIONS = {
    GazeClass.DOWN: (0.0, 1.0),
    GazeClass.UP: (0.0, -1.0),
    GazeClass.LEFT: (-1.0, 0.0),
    GazeClass.RIGHT: (1.0, 0.0),
    GazeClass.STRAIGHT: (0.0, 0.0),
}


@dataclass(frozen=True)
class StyleParams:
    size: int = 128
    sclera_width_frac: float = 0.42  # horizontal semi-axis / image width
    sclera_height_frac: float = 0.27
    iris_radius_frac: float = 0.13
    displacement_frac: float = 0.20  # minimum shift, fraction of eye width
    displacement_jitter: float = 0.06  # extra shift, uniform [0, this]
    center_jitter_frac: float = 0.02
    noise_sigma: float = 6.0
    brightness_jitter: float = 14.0


def synth_eye(gaze: GazeClass, seed: int, params: StyleParams = StyleParams()) -> np.ndarray:
    """Render one (size, size, 3) uint8 RGB eye image for the given class."""
    rng = np.random.default_rng(seed)
    s = params.size
    cx = s / 2 + rng.uniform(-1, 1) * params.center_jitter_frac * s
    cy = s / 2 + rng.uniform(-1, 1) * params.center_jitter_frac * s

    ax = params.sclera_width_frac * s * rng.uniform(0.95, 1.05)
    ay = params.sclera_height_frac * s * rng.uniform(0.92, 1.08)
    eye_width = 2.0 * ax

    dirx, diry = _DIRECTIONS[gaze]
    shift = (params.displacement_frac + rng.uniform(0, params.displacement_jitter)) * eye_width
    ix = cx + dirx * shift + rng.uniform(-1, 1) * 0.01 * s
    iy = cy + diry * shift * (ay / ax) + rng.uniform(-1, 1) * 0.01 * s
    iris_r = params.iris_radius_frac * s * rng.uniform(0.92, 1.08)

    yy, xx = np.mgrid[0:s, 0:s].astype(np.float64) + 0.5
    brightness = rng.uniform(-1, 1) * params.brightness_jitter

    skin = 196.0 + brightness
    canvas = np.full((s, s), skin, dtype=np.float64)

    in_sclera = ((xx - cx) / ax) ** 2 + ((yy - cy) / ay) ** 2 <= 1.0
    canvas[in_sclera] = 237.0 + brightness

    rr2 = (xx - ix) ** 2 + (yy - iy) ** 2
    iris = rr2 <= iris_r**2
    canvas[iris & in_sclera] = 88.0 + 0.5 * brightness
    pupil = rr2 <= (0.45 * iris_r) ** 2
    canvas[pupil & in_sclera] = 28.0

    canvas += rng.normal(0.0, params.noise_sigma, size=canvas.shape)
    canvas = canvas.clip(0, 255)

    # mild warm tint so the RGB -> luma path is exercised for real
    rgb = np.empty((s, s, 3), dtype=np.float64)
    rgb[..., 0] = canvas * 1.03
    rgb[..., 1] = canvas
    rgb[..., 2] = canvas * 0.94
    return rgb.clip(0, 255).astype(np.uint8)


def sample_seed(corpus_seed: int, gaze: GazeClass, index: int) -> np.random.SeedSequence:
    """Stable per-sample seed so generation parallelizes by index."""
    return np.random.SeedSequence([corpus_seed, int(gaze), index])


def darkness_centroid(gray: np.ndarray) -> tuple[float, float]:
    """(x, y) centroid of darkness weight 255 - value; pupil dominates."""
    weights = 255.0 - gray.astype(np.float64)
    total = weights.sum()
    yy, xx = np.mgrid[0 : gray.shape[0], 0 : gray.shape[1]].astype(np.float64)
    return float((weights * xx).sum() / total), float((weights * yy).sum() / total)


def pupil_centroid(gray: np.ndarray, quantile: float = 0.01) -> tuple[float, float]:
    """(x, y) centroid of the darkest pixels; isolates the pupil disc."""
    g = gray.astype(np.float64)
    cut = np.quantile(g, quantile)
    mask = g <= cut
    yy, xx = np.mgrid[0 : gray.shape[0], 0 : gray.shape[1]].astype(np.float64)
    return float(xx[mask].mean()), float(yy[mask].mean())


def generate_corpus(
    out_dir,
    counts: dict[GazeClass, int] | None = None,
    corpus_seed: int = 0,
    params: StyleParams = StyleParams(),
) -> dict:
    """Write data/<Class>/<index>.png for every class plus a manifest.

    Returns the manifest dict (also written to manifest.json).
    """
    counts = dict(DEFAULT_CLASS_COUNTS) if counts is None else counts
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for gaze in GazeClass:
        cls_dir = out_dir / gaze.label
        cls_dir.mkdir(exist_ok=True)
        for i in range(counts.get(gaze, 0)):
            img = synth_eye(gaze, sample_seed(corpus_seed, gaze, i), params)
            Image.fromarray(img, mode="RGB").save(cls_dir / f"{i:05d}.png")
    manifest = {
        "counts": {g.label: counts.get(g, 0) for g in GazeClass},
        "total": sum(counts.values()),
        "corpus_seed": corpus_seed,
        "style": asdict(params),
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest

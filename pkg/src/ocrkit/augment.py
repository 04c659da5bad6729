"""Image-degradation transforms and the 1/2/3-transform subset protocol.

The registry holds 29 transforms across eight categories with fixed
cardinalities (5, 5, 2, 3, 4, 2, 5, 3).  Nine of the transforms are the
canonical named examples (watermark, dirty drum, handwritten markup, folding,
yellowing, salt-and-pepper, perspective distortion, low-light, motion blur);
the remaining twenty are artifact-defined fillers with documented parameter
ranges.  Every noise / lighting / blur transform is an exact identity at its
zero-strength parameter, and application is deterministic per
(image, transform, seed).
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field

import numpy as np

from .errors import NotDivisibleByThree, UnknownTransform

PLAN_SCHEMA_VERSION = 1

CATEGORY_COUNTS = {
    "preprint": 5,
    "mechanical": 5,
    "human_marks": 2,
    "aging": 3,
    "digital_noise": 4,
    "geometric": 2,
    "lighting": 5,
    "blur": 3,
}


@dataclass(frozen=True, eq=False)
class TransformSpec:
    category: str
    name: str
    params: dict  # param name -> (low, high)
    seed_consuming: bool = True


def _as_float(img: np.ndarray) -> np.ndarray:
    return img.astype(np.float64)


def _to_uint8(arr: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(arr), 0, 255).astype(np.uint8)


def _coords(img: np.ndarray):
    h, w = img.shape[:2]
    return np.meshgrid(np.arange(w), np.arange(h))


def _convolve1d(img: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    """Edge-padded 1-D convolution along rows or columns, per channel."""
    k = len(kernel)
    if k == 1:
        return img * kernel[0]
    pad = k // 2
    pads = [(0, 0)] * img.ndim
    pads[axis] = (pad, k - 1 - pad)
    padded = np.pad(img, pads, mode="edge")
    out = np.zeros_like(img, dtype=np.float64)
    for i, kv in enumerate(kernel):
        sl = [slice(None)] * img.ndim
        sl[axis] = slice(i, i + img.shape[axis])
        out += kv * padded[tuple(sl)]
    return out


def _convolve2d(img: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    kh, kw = kernel.shape
    pad_h, pad_w = kh // 2, kw // 2
    padded = np.pad(img, ((pad_h, kh - 1 - pad_h), (pad_w, kw - 1 - pad_w), (0, 0)),
                    mode="edge")
    out = np.zeros_like(img, dtype=np.float64)
    for dy in range(kh):
        for dx in range(kw):
            if kernel[dy, dx] == 0.0:
                continue
            out += kernel[dy, dx] * padded[dy:dy + img.shape[0],
                                           dx:dx + img.shape[1], :]
    return out


def _warp(img: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """Inverse-map warp (nearest neighbor), same output size, white fill."""
    h, w = img.shape[:2]
    xs, ys = _coords(img)
    ones = np.ones_like(xs)
    pts = np.stack([xs.ravel(), ys.ravel(), ones.ravel()]).astype(np.float64)
    inv = np.linalg.inv(matrix)
    src = inv @ pts
    sx = src[0] / src[2]
    sy = src[1] / src[2]
    ix = np.rint(sx).astype(np.int64)
    iy = np.rint(sy).astype(np.int64)
    valid = (ix >= 0) & (ix < w) & (iy >= 0) & (iy < h)
    out = np.full_like(img, 255)
    flat_out = out.reshape(-1, img.shape[2])
    flat_out[valid] = img[iy[valid], ix[valid]]
    return flat_out.reshape(img.shape)


def _disk_mask(img: np.ndarray, cx: float, cy: float, radius: float,
               soft: float = 0.0) -> np.ndarray:
    xs, ys = _coords(img)
    dist = np.hypot(xs - cx, ys - cy)
    if soft <= 0:
        return (dist <= radius).astype(np.float64)
    return np.clip((radius + soft - dist) / soft, 0.0, 1.0) * (dist <= radius + soft)


def _draw_strokes(img: np.ndarray, rng, n_strokes: int, color, thickness: int):
    h, w = img.shape[:2]
    out = img.copy()
    for _ in range(n_strokes):
        n_pts = int(rng.integers(3, 6))
        px = rng.uniform(0, w - 1, n_pts)
        py = rng.uniform(0, h - 1, n_pts)
        for i in range(n_pts - 1):
            steps = max(2, int(np.hypot(px[i + 1] - px[i], py[i + 1] - py[i])) * 2)
            xs = np.linspace(px[i], px[i + 1], steps)
            ys = np.linspace(py[i], py[i + 1], steps)
            for t in range(-thickness, thickness + 1):
                ix = np.clip(np.rint(xs).astype(int), 0, w - 1)
                iy = np.clip(np.rint(ys + t).astype(int), 0, h - 1)
                out[iy, ix] = color
    return out


# ---------------------------------------------------------------------------
# Transform implementations.  Each takes (uint8 image, Generator, params dict)
# and returns a uint8 image of the same dtype.


def _t_watermark(img, rng, p):
    if p["opacity"] <= 0:
        return img.copy()
    h, w = img.shape[:2]
    xs, ys = _coords(img)
    stripe = ((xs + ys) % max(20, (w + h) // 10) < max(6, (w + h) // 30))
    overlay = np.where(stripe[..., None], 128.0, _as_float(img))
    return _to_uint8(_as_float(img) * (1 - p["opacity"]) + overlay * p["opacity"])


def _t_stamp_overlay(img, rng, p):
    h, w = img.shape[:2]
    cx = rng.uniform(0.2, 0.8) * w
    cy = rng.uniform(0.2, 0.8) * h
    radius = p["radius_frac"] * min(h, w)
    ring = _disk_mask(img, cx, cy, radius) - _disk_mask(img, cx, cy, radius * 0.8)
    ring = np.clip(ring, 0, 1)
    out = _as_float(img)
    stamp = np.array([170.0, 30.0, 30.0])
    blend = p["opacity"] * ring[..., None]
    return _to_uint8(out * (1 - blend) + stamp * blend)


def _t_bleed_through(img, rng, p):
    mirrored = img[:, ::-1, :]
    ghost = 255.0 - (255.0 - _as_float(mirrored)) * p["strength"]
    return _to_uint8(np.minimum(_as_float(img), ghost))


def _t_faint_ink(img, rng, p):
    arr = _as_float(img)
    return _to_uint8(arr + (255.0 - arr) * p["fade"])


def _t_page_number_overlay(img, rng, p):
    h, w = img.shape[:2]
    out = img.copy()
    bh = max(2, int(h * 0.02))
    bw = max(4, int(w * 0.04))
    y0 = h - bh - max(1, int(h * 0.01))
    x0 = (w - bw) // 2 + int(rng.integers(-w // 20, w // 20 + 1))
    x0 = int(np.clip(x0, 0, max(0, w - bw)))
    out[y0:y0 + bh, x0:x0 + bw] = int(40 + p["darkness"] * 60)
    return out


def _t_dirty_drum(img, rng, p):
    h, w = img.shape[:2]
    arr = _as_float(img)
    period = max(8, int(h * 0.2))
    n_smudges = max(1, int(p["density"] * 10))
    mask = np.zeros((h, w))
    for _ in range(n_smudges):
        x = int(rng.integers(0, w))
        width = max(1, int(rng.integers(1, max(2, w // 40))))
        phase = int(rng.integers(0, period))
        ys = np.arange(h)
        stripe = ((ys + phase) % period) < period // 3
        mask[stripe, max(0, x - width):min(w, x + width)] = 1.0
    arr = arr * (1 - 0.35 * mask[..., None])
    return _to_uint8(arr)


def _t_banding(img, rng, p):
    h = img.shape[0]
    phase = rng.uniform(0, 2 * np.pi)
    rows = np.arange(h)
    band = 1.0 + p["amplitude"] * np.sin(rows / max(2.0, h / 24.0) + phase)
    return _to_uint8(_as_float(img) * band[:, None, None])


def _t_toner_scatter(img, rng, p):
    h, w = img.shape[:2]
    out = img.copy()
    n = int(p["density"] * h * w)
    if n == 0:
        return out
    ys = rng.integers(0, h, n)
    xs = rng.integers(0, w, n)
    out[ys, xs] = rng.integers(0, 80, (n, 1))
    return out


def _t_roller_streak(img, rng, p):
    h, w = img.shape[:2]
    x0 = int(rng.integers(0, w))
    width = max(2, int(w * p["width_frac"]))
    gain = 1.0 - p["strength"]
    arr = _as_float(img)
    arr[:, x0:x0 + width, :] *= gain
    return _to_uint8(arr)


def _t_registration_offset(img, rng, p):
    offset = int(round(p["offset_px"]))
    if offset == 0:
        return img.copy()
    out = img.copy()
    out[:, :, 0] = np.roll(img[:, :, 0], offset, axis=1)
    return out


def _t_handwritten_markup(img, rng, p):
    n = max(1, int(p["strokes"]))
    return _draw_strokes(img, rng, n, np.array([20, 20, 120], dtype=np.uint8), 1)


def _t_highlighter_marks(img, rng, p):
    h, w = img.shape[:2]
    y0 = int(rng.uniform(0, max(1, h - 3)))
    band_h = max(2, int(h * p["height_frac"]))
    arr = _as_float(img)
    arr[y0:y0 + band_h, :, 2] *= 0.35   # suppress blue -> yellow cast
    return _to_uint8(arr)


def _t_folding(img, rng, p):
    h, w = img.shape[:2]
    xs, ys = _coords(img)
    x0 = rng.uniform(0.3, 0.7) * w
    slope = rng.uniform(-0.2, 0.2)
    dist = np.abs((xs - x0) + slope * ys) / np.hypot(1.0, slope)
    width = max(1.0, w * 0.01)
    crease = np.clip(1.0 - dist / width, 0.0, 1.0)
    arr = _as_float(img) * (1.0 - p["depth"] * crease[..., None])
    return _to_uint8(arr)


def _t_yellowing(img, rng, p):
    # Blue suppressed toward the paper-aging hue; red/green untouched, so
    # every pixel's blue stays <= its original value.
    arr = _as_float(img)
    arr[:, :, 2] *= (1.0 - p["amount"])
    return _to_uint8(arr)


def _t_coffee_stain(img, rng, p):
    h, w = img.shape[:2]
    cx = rng.uniform(0.15, 0.85) * w
    cy = rng.uniform(0.15, 0.85) * h
    radius = p["radius_frac"] * min(h, w)
    mask = _disk_mask(img, cx, cy, radius, soft=radius * 0.4)
    stain = np.array([150.0, 110.0, 60.0])
    arr = _as_float(img)
    blend = 0.35 * mask[..., None]
    return _to_uint8(arr * (1 - blend) + stain * blend)


def _t_salt_and_pepper(img, rng, p):
    if p["density"] <= 0:
        return img.copy()
    h, w = img.shape[:2]
    out = img.copy()
    noise = rng.random((h, w))
    out[noise < p["density"] / 2] = 0
    out[noise > 1 - p["density"] / 2] = 255
    return out


def _t_gaussian_noise(img, rng, p):
    if p["sigma"] <= 0:
        return img.copy()
    noise = rng.normal(0.0, p["sigma"], img.shape)
    return _to_uint8(_as_float(img) + noise)


def _t_jpeg_blockiness(img, rng, p):
    if p["strength"] <= 0:
        return img.copy()
    h, w = img.shape[:2]
    arr = _as_float(img)
    block = 8
    ph = (block - h % block) % block
    pw = (block - w % block) % block
    padded = np.pad(arr, ((0, ph), (0, pw), (0, 0)), mode="edge")
    hh, ww = padded.shape[:2]
    blocks = padded.reshape(hh // block, block, ww // block, block, 3)
    means = blocks.mean(axis=(1, 3), keepdims=True)
    flat = np.broadcast_to(means, blocks.shape).reshape(hh, ww, 3)
    mixed = padded * (1 - p["strength"]) + flat * p["strength"]
    return _to_uint8(mixed[:h, :w, :])


def _t_speckle(img, rng, p):
    if p["sigma"] <= 0:
        return img.copy()
    noise = rng.normal(0.0, p["sigma"], img.shape)
    return _to_uint8(_as_float(img) * (1.0 + noise))


def _t_perspective_distortion(img, rng, p):
    h, w = img.shape[:2]
    if h < 2 or w < 2:
        return img.copy()  # degenerate corner geometry
    jitter = p["strength"] * min(h, w)
    src = np.array([[0, 0], [w - 1, 0], [w - 1, h - 1], [0, h - 1]], dtype=np.float64)
    dst = src + rng.uniform(-jitter, jitter, (4, 2))
    # Solve the 8-dof homography mapping src -> dst.
    rows = []
    rhs = []
    for (x, y), (u, v) in zip(src, dst):
        rows.append([x, y, 1, 0, 0, 0, -u * x, -u * y])
        rhs.append(u)
        rows.append([0, 0, 0, x, y, 1, -v * x, -v * y])
        rhs.append(v)
    h8 = np.linalg.solve(np.array(rows), np.array(rhs))
    matrix = np.append(h8, 1.0).reshape(3, 3)
    return _warp(img, matrix)


def _t_rotation_skew(img, rng, p):
    angle = np.deg2rad(p["max_angle_deg"]) * rng.uniform(-1.0, 1.0)
    h, w = img.shape[:2]
    cx, cy = (w - 1) / 2.0, (h - 1) / 2.0
    c, s = np.cos(angle), np.sin(angle)
    matrix = np.array([
        [c, -s, cx - c * cx + s * cy],
        [s, c, cy - s * cx - c * cy],
        [0, 0, 1.0],
    ])
    return _warp(img, matrix)


def _t_low_light(img, rng, p):
    if p["amount"] <= 0:
        return img.copy()
    return _to_uint8(_as_float(img) * (1.0 - p["amount"]))


def _t_overexposure(img, rng, p):
    if p["amount"] <= 0:
        return img.copy()
    return _to_uint8(_as_float(img) + 255.0 * p["amount"])


def _t_shadow_gradient(img, rng, p):
    if p["amount"] <= 0:
        return img.copy()
    h, w = img.shape[:2]
    horizontal = rng.random() < 0.5
    ramp = np.linspace(1.0, 1.0 - p["amount"], w if horizontal else h)
    gain = ramp[None, :, None] if horizontal else ramp[:, None, None]
    return _to_uint8(_as_float(img) * gain)


def _t_uneven_illumination(img, rng, p):
    if p["amount"] <= 0:
        return img.copy()
    h, w = img.shape[:2]
    xs, ys = _coords(img)
    dist = np.hypot(xs - (w - 1) / 2, ys - (h - 1) / 2)
    vignette = 1.0 - p["amount"] * (dist / max(1.0, dist.max())) ** 2
    return _to_uint8(_as_float(img) * vignette[..., None])


def _t_glare(img, rng, p):
    if p["amount"] <= 0:
        return img.copy()
    h, w = img.shape[:2]
    cx = rng.uniform(0.2, 0.8) * w
    cy = rng.uniform(0.2, 0.8) * h
    xs, ys = _coords(img)
    sigma = 0.25 * min(h, w)
    blob = np.exp(-((xs - cx) ** 2 + (ys - cy) ** 2) / (2 * sigma ** 2))
    return _to_uint8(_as_float(img) + 255.0 * p["amount"] * blob[..., None])


def _t_motion_blur(img, rng, p):
    length = int(round(p["length"]))
    if length <= 0:
        return img.copy()
    kernel = np.ones(length + 1) / (length + 1)
    return _to_uint8(_convolve1d(_as_float(img), kernel, axis=1))


def _t_defocus_blur(img, rng, p):
    radius = int(round(p["radius"]))
    if radius <= 0:
        return img.copy()
    size = 2 * radius + 1
    ys, xs = np.mgrid[-radius:radius + 1, -radius:radius + 1]
    kernel = (np.hypot(xs, ys) <= radius).astype(np.float64)
    kernel /= kernel.sum()
    return _to_uint8(_convolve2d(_as_float(img), kernel))


def _t_gaussian_blur(img, rng, p):
    sigma = p["sigma"]
    if sigma <= 0:
        return img.copy()
    radius = max(1, int(np.ceil(3 * sigma)))
    xs = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-xs ** 2 / (2 * sigma ** 2))
    kernel /= kernel.sum()
    blurred = _convolve1d(_as_float(img), kernel, axis=1)
    blurred = _convolve1d(blurred, kernel, axis=0)
    return _to_uint8(blurred)


_REGISTRY: list[tuple[TransformSpec, callable]] = [
    (TransformSpec("preprint", "watermark", {"opacity": (0.05, 0.3)}), _t_watermark),
    (TransformSpec("preprint", "stamp_overlay",
                   {"radius_frac": (0.05, 0.15), "opacity": (0.3, 0.8)}), _t_stamp_overlay),
    (TransformSpec("preprint", "bleed_through", {"strength": (0.1, 0.4)}), _t_bleed_through),
    (TransformSpec("preprint", "faint_ink", {"fade": (0.2, 0.6)}), _t_faint_ink),
    (TransformSpec("preprint", "page_number_overlay", {"darkness": (0.0, 1.0)}),
     _t_page_number_overlay),
    (TransformSpec("mechanical", "dirty_drum", {"density": (0.2, 1.0)}), _t_dirty_drum),
    (TransformSpec("mechanical", "banding", {"amplitude": (0.05, 0.25)}), _t_banding),
    (TransformSpec("mechanical", "toner_scatter", {"density": (0.0005, 0.01)}),
     _t_toner_scatter),
    (TransformSpec("mechanical", "roller_streak",
                   {"width_frac": (0.02, 0.1), "strength": (0.1, 0.4)}), _t_roller_streak),
    (TransformSpec("mechanical", "registration_offset", {"offset_px": (1, 4)}),
     _t_registration_offset),
    (TransformSpec("human_marks", "handwritten_markup", {"strokes": (1, 4)}),
     _t_handwritten_markup),
    (TransformSpec("human_marks", "highlighter_marks", {"height_frac": (0.02, 0.08)}),
     _t_highlighter_marks),
    (TransformSpec("aging", "folding", {"depth": (0.2, 0.6)}), _t_folding),
    (TransformSpec("aging", "yellowing", {"amount": (0.1, 0.45)}), _t_yellowing),
    (TransformSpec("aging", "coffee_stain", {"radius_frac": (0.08, 0.25)}),
     _t_coffee_stain),
    (TransformSpec("digital_noise", "salt_and_pepper", {"density": (0.002, 0.05)}),
     _t_salt_and_pepper),
    (TransformSpec("digital_noise", "gaussian_noise", {"sigma": (2.0, 20.0)}),
     _t_gaussian_noise),
    (TransformSpec("digital_noise", "jpeg_blockiness", {"strength": (0.2, 0.8)}),
     _t_jpeg_blockiness),
    (TransformSpec("digital_noise", "speckle", {"sigma": (0.02, 0.15)}), _t_speckle),
    (TransformSpec("geometric", "perspective_distortion", {"strength": (0.01, 0.06)}),
     _t_perspective_distortion),
    (TransformSpec("geometric", "rotation_skew", {"max_angle_deg": (0.5, 5.0)}),
     _t_rotation_skew),
    (TransformSpec("lighting", "low_light", {"amount": (0.2, 0.6)}), _t_low_light),
    (TransformSpec("lighting", "overexposure", {"amount": (0.1, 0.4)}), _t_overexposure),
    (TransformSpec("lighting", "shadow_gradient", {"amount": (0.2, 0.6)}),
     _t_shadow_gradient),
    (TransformSpec("lighting", "uneven_illumination", {"amount": (0.2, 0.6)}),
     _t_uneven_illumination),
    (TransformSpec("lighting", "glare", {"amount": (0.2, 0.7)}), _t_glare),
    (TransformSpec("blur", "motion_blur", {"length": (2, 9)}), _t_motion_blur),
    (TransformSpec("blur", "defocus_blur", {"radius": (1, 4)}), _t_defocus_blur),
    (TransformSpec("blur", "gaussian_blur", {"sigma": (0.5, 2.5)}), _t_gaussian_blur),
]

_BY_NAME = {spec.name: (spec, fn) for spec, fn in _REGISTRY}


def registry() -> list[TransformSpec]:
    return [spec for spec, _ in _REGISTRY]


def get_transform(name: str) -> TransformSpec:
    try:
        return _BY_NAME[name][0]
    except KeyError:
        raise UnknownTransform(name) from None


def _derive_rng(name: str, seed: int) -> np.random.Generator:
    digest = hashlib.sha256(f"{name}:{seed}".encode()).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], "big"))


def apply_transform(img: np.ndarray, spec: TransformSpec, seed: int,
                    params: dict | None = None) -> np.ndarray:
    """Apply one degradation; params default to a seed-deterministic draw
    from the spec's documented ranges."""
    if spec.name not in _BY_NAME:
        raise UnknownTransform(spec.name)
    if img.ndim != 3 or img.shape[2] != 3 or img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError("expected an HxWx3 RGB image")
    _, fn = _BY_NAME[spec.name]
    rng = _derive_rng(spec.name, seed)
    drawn = {name: rng.uniform(lo, hi) for name, (lo, hi) in sorted(spec.params.items())}
    if params:
        drawn.update(params)
    return fn(np.ascontiguousarray(img, dtype=np.uint8), rng, drawn)


# ---------------------------------------------------------------------------
# Subset planning


@dataclass(frozen=True)
class Assignment:
    image_id: str
    transforms: tuple[str, ...]
    seed: int


@dataclass
class AugmentPlan:
    assignments: list[Assignment]
    subset_sizes: tuple[int, int, int]
    seed: int = 0

    def to_jsonl(self) -> str:
        lines = [json.dumps({"schema_version": PLAN_SCHEMA_VERSION,
                             "subset_sizes": list(self.subset_sizes),
                             "seed": self.seed})]
        for a in self.assignments:
            lines.append(json.dumps({"image_id": a.image_id,
                                     "transforms": list(a.transforms),
                                     "seed": a.seed}, ensure_ascii=False))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "AugmentPlan":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = json.loads(lines[0])
        if head.get("schema_version") != PLAN_SCHEMA_VERSION:
            raise ValueError(f"unsupported plan schema {head.get('schema_version')}")
        assignments = [
            Assignment(d["image_id"], tuple(d["transforms"]), d["seed"])
            for d in (json.loads(ln) for ln in lines[1:])
        ]
        return cls(assignments, tuple(head["subset_sizes"]), head.get("seed", 0))


def _assignment_seed(seed: int, image_id: str) -> int:
    digest = hashlib.sha256(f"{seed}:{image_id}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def plan_augmentation(image_ids: list[str], seed: int,
                      allow_remainder: bool = False) -> AugmentPlan:
    """Random thirds with 1/2/3 transforms each, without replacement per image.

    With ``allow_remainder`` the 1-2 leftover ids pad the 3-transform subset;
    otherwise the count must divide by 3.
    """
    n = len(image_ids)
    if n % 3 != 0 and not allow_remainder:
        raise NotDivisibleByThree(f"{n} images leave remainder {n % 3}")
    shuffled = list(image_ids)
    random.Random(seed).shuffle(shuffled)
    third = n // 3
    subsets = [shuffled[:third], shuffled[third:2 * third], shuffled[2 * third:]]
    names = [spec.name for spec in registry()]
    assignments = []
    for subset_idx, subset in enumerate(subsets, start=1):
        for image_id in subset:
            a_seed = _assignment_seed(seed, image_id)
            picker = random.Random(a_seed)
            chosen = tuple(picker.sample(names, subset_idx))
            assignments.append(Assignment(image_id, chosen, a_seed))
    return AugmentPlan(assignments, tuple(len(s) for s in subsets), seed)


def apply_assignment(img: np.ndarray, assignment: Assignment) -> np.ndarray:
    """Run the assignment's transforms in recorded order, varying the seed per
    position so repeated categories do not correlate."""
    out = img
    for i, name in enumerate(assignment.transforms):
        spec = get_transform(name)
        out = apply_transform(out, spec, assignment.seed + i)
    return out

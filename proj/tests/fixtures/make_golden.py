#!/usr/bin/env python3
"""Regenerates metrics.json and the PNG pair in this directory.

Expected values come from numpy (MSE, PSNR, global SSIM) and
scikit-image's structural_similarity (windowed SSIM), so the C++ metrics
are checked against an implementation they share no code with.
"""

import json
import os

import numpy as np
from PIL import Image
from skimage.metrics import structural_similarity

C1 = 1e-4
C2 = 9e-4
HERE = os.path.dirname(os.path.abspath(__file__))


def mse(a, b):
    return float(np.mean((a - b) ** 2))


def psnr(a, b):
    m = mse(a, b)
    return 100.0 if m == 0 else float(10 * np.log10(1.0 / m))


def ssim_global(a, b):
    vals = []
    for c in range(a.shape[2]):
        x, y = a[..., c].ravel(), b[..., c].ravel()
        mx, my = x.mean(), y.mean()
        vx, vy = ((x - mx) ** 2).mean(), ((y - my) ** 2).mean()
        cov = ((x - mx) * (y - my)).mean()
        vals.append((2 * mx * my + C1) * (2 * cov + C2) /
                    ((mx * mx + my * my + C1) * (vx + vy + C2)))
    return float(np.mean(vals))


def ssim_gaussian(a, b):
    if min(a.shape[0], a.shape[1]) < 11:
        return None
    return float(structural_similarity(
        a, b, data_range=1.0, channel_axis=2, gaussian_weights=True,
        sigma=1.5, use_sample_covariance=False, K1=0.01, K2=0.03))


def case(name, a, b):
    if a.ndim == 2:
        a, b = a[..., None], b[..., None]
    return {
        "name": name,
        "width": a.shape[1],
        "height": a.shape[0],
        "channels": a.shape[2],
        "a": a.ravel().tolist(),
        "b": b.ravel().tolist(),
        "mse": mse(a, b),
        "psnr": psnr(a, b),
        "ssim_global": ssim_global(a, b),
        "ssim_gaussian": ssim_gaussian(a, b),
    }


def main():
    rng = np.random.default_rng(20240607)
    cases = []

    g = rng.random((16, 16))
    cases.append(case("identical_gray", g, g.copy()))
    cases.append(case("zeros_vs_ones", np.zeros((2, 2)), np.ones((2, 2))))
    base = rng.random((12, 13)) * 0.9
    cases.append(case("uniform_difference", base, base + 0.1))
    cases.append(case("constants", np.full((12, 12), 0.2), np.full((12, 12), 0.6)))

    a = rng.random((20, 24))
    b = np.clip(a + rng.normal(0, 0.08, a.shape), 0, 1)
    cases.append(case("noisy_gray", a, b))

    a = rng.random((16, 17, 3))
    b = np.clip(0.7 * a + 0.2 + rng.normal(0, 0.05, a.shape), 0, 1)
    cases.append(case("rgb_affine", a, b))

    a = rng.random((15, 15))
    cases.append(case("tiny_noise", a, np.clip(a + 1e-6 * rng.standard_normal(a.shape), 0, 1)))

    # 8-bit pair, also written as PNG for the command-line test
    a8 = rng.integers(0, 256, (24, 32, 3), dtype=np.uint8)
    b8 = np.clip(a8.astype(int) + rng.integers(-20, 21, a8.shape), 0, 255).astype(np.uint8)
    Image.fromarray(a8, "RGB").save(os.path.join(HERE, "pair_a.png"))
    Image.fromarray(b8, "RGB").save(os.path.join(HERE, "pair_b.png"))
    cases.append(case("png_pair", a8 / 255.0, b8 / 255.0))

    with open(os.path.join(HERE, "metrics.json"), "w") as f:
        json.dump({"c1": C1, "c2": C2, "cases": cases}, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()

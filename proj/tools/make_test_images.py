#!/usr/bin/env python3
"""Export a few bundled scikit-image photographs as 8-bit binary PGM files.

The test suite and the benchmark use these as clean reference images.
"""
import pathlib
import sys

import numpy as np
from skimage import color, data

IMAGES = {
    "camera": lambda: data.camera(),
    "astronaut": lambda: color.rgb2gray(data.astronaut()),
    "coffee": lambda: color.rgb2gray(data.coffee()),
    "moon": lambda: data.moon(),
}


def to_u8(img):
    if img.dtype != np.uint8:
        img = np.clip(np.rint(img * 255.0), 0, 255).astype(np.uint8)
    return img


def main(out_dir):
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, load in IMAGES.items():
        img = to_u8(load())
        h, w = img.shape
        with open(out / f"{name}.pgm", "wb") as f:
            f.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
            f.write(img.tobytes())
        print(f"{name}: {w}x{h}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data")

"""Regenerate testdata/ from images bundled with scikit-image and scikit-learn.

lena.png ships only with scikit-image <= 0.9.x; point SKIMAGE_OLD at the
`skimage/data` directory of an unpacked 0.9.3 source tarball.
Grayscale conversion is PIL's ITU-R 601-2 luma ("L" mode).
"""
import os
import sys

import numpy as np
from PIL import Image

SK = os.path.join(os.path.dirname(__import__("skimage").__file__), "data")
SKL = os.path.join(os.path.dirname(__import__("sklearn").__file__), "datasets", "images")
OLD = os.environ.get("SKIMAGE_OLD", "")
OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "testdata")


def gray(path):
    return np.array(Image.open(path).convert("L"), dtype=np.uint8)


def center_crop(a, h, w):
    y = (a.shape[0] - h) // 2
    x = (a.shape[1] - w) // 2
    return a[y : y + h, x : x + w]


def save(a, path):
    h, w = a.shape
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (w, h))
        f.write(a.tobytes())


standard = {
    "lena": gray(os.path.join(OLD, "lena.png")),
    "camera": gray(os.path.join(SK, "camera.png")),
    "astronaut": gray(os.path.join(SK, "astronaut.png")),
    "moon": gray(os.path.join(SK, "moon.png")),
    "ihc": gray(os.path.join(SK, "ihc.png")),
    "brick": gray(os.path.join(SK, "brick.png")),
    "gravel": gray(os.path.join(SK, "gravel.png")),
    "cell": center_crop(gray(os.path.join(SK, "cell.png")), 512, 512),
    "retina": center_crop(gray(os.path.join(SK, "retina.jpg")), 512, 512),
    "hubble": center_crop(gray(os.path.join(SK, "hubble_deep_field.jpg")), 512, 512),
}
for name, a in standard.items():
    assert a.shape == (512, 512), name
    save(a, os.path.join(OUT, "standard", name + ".pgm"))

sources = dict(standard)
for name in ["chelsea.png", "coffee.png", "coins.png", "motorcycle_left.png",
             "rocket.jpg", "grass.png", "clock_motion.png"]:
    sources[name.split(".")[0]] = gray(os.path.join(SK, name))
for name in ["china.jpg", "flower.jpg"]:
    sources[name.split(".")[0]] = gray(os.path.join(SKL, name))
sources["rough_wall"] = gray(os.path.join(OLD, "rough-wall.png"))

rng = np.random.default_rng(2021)
tile = 128
count = 0
for name in sorted(sources):
    a = sources[name]
    for k in range(3):
        y = int(rng.integers(0, a.shape[0] - tile + 1))
        x = int(rng.integers(0, a.shape[1] - tile + 1))
        save(a[y : y + tile, x : x + tile],
             os.path.join(OUT, "corpus", "%s_%d.pgm" % (name, k)))
        count += 1
print("standard:", len(standard), "corpus:", count, file=sys.stderr)

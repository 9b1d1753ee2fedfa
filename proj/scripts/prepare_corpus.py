#!/usr/bin/env python3
"""Build 256x256 8-bit greyscale PGM test images.

  prepare_corpus.py --out data/natural --skimage
  prepare_corpus.py --out data/usc-sipi lena.tiff aeroplane.tiff mandrill.tiff
"""
import argparse
from pathlib import Path

from PIL import Image

SKIMAGE_SAMPLES = ["camera", "astronaut", "coffee", "chelsea", "moon", "coins"]


def to_pgm(img: Image.Image, size: int, dest: Path) -> None:
    img = img.convert("L")
    if img.size != (size, size):
        img = img.resize((size, size), Image.LANCZOS)
    img.save(dest, format="PPM")  # mode L is written as binary P5


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("images", nargs="*", type=Path)
    ap.add_argument("--out", type=Path, required=True)
    ap.add_argument("--size", type=int, default=256)
    ap.add_argument("--skimage", action="store_true", help="use scikit-image sample images")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    for path in args.images:
        to_pgm(Image.open(path), args.size, args.out / (path.stem.lower() + ".pgm"))
    if args.skimage:
        from skimage import data

        for name in SKIMAGE_SAMPLES:
            to_pgm(Image.fromarray(getattr(data, name)()), args.size, args.out / f"{name}.pgm")


if __name__ == "__main__":
    main()

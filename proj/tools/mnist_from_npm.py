#!/usr/bin/env python3
"""Convert the digit set bundled with the npm `mnist` package into IDX files.

The package ships 10000 MNIST digits as JSON arrays of 784 floats in [0, 1]
(rounded to three decimals), grouped by label. This script interleaves the
classes round-robin so any prefix is class-balanced, quantizes back to bytes
and writes gzipped IDX3 (images) and IDX1 (labels) files.

    npm pack mnist && tar xzf mnist-*.tgz
    python3 tools/mnist_from_npm.py package/src/digits data/
"""
import argparse
import gzip
import json
import pathlib
import struct


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("digits_dir", type=pathlib.Path)
    parser.add_argument("out_dir", type=pathlib.Path)
    args = parser.parse_args()

    per_class = []
    for label in range(10):
        flat = json.loads((args.digits_dir / f"{label}.json").read_text())["data"]
        assert len(flat) % 784 == 0
        per_class.append([flat[i:i + 784] for i in range(0, len(flat), 784)])

    images, labels = [], []
    cursor = [0] * 10
    while any(cursor[c] < len(per_class[c]) for c in range(10)):
        for c in range(10):
            if cursor[c] < len(per_class[c]):
                images.append(per_class[c][cursor[c]])
                labels.append(c)
                cursor[c] += 1

    args.out_dir.mkdir(parents=True, exist_ok=True)
    with gzip.GzipFile(args.out_dir / "digits10k-images-idx3-ubyte.gz", "wb", mtime=0) as f:
        f.write(struct.pack(">IIII", 0x00000803, len(images), 28, 28))
        f.write(bytes(min(255, max(0, round(v * 255.0))) for img in images for v in img))
    with gzip.GzipFile(args.out_dir / "digits10k-labels-idx1-ubyte.gz", "wb", mtime=0) as f:
        f.write(struct.pack(">II", 0x00000801, len(labels)))
        f.write(bytes(labels))
    print(f"wrote {len(images)} images")


if __name__ == "__main__":
    main()

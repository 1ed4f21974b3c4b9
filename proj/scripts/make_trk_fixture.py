#!/usr/bin/env python3
"""Writes a small TRK fixture with one 3-point streamline at float32-exact
coordinates. Kept independent of the C++ writer so parser tests have an
outside reference for the canonical header layout."""

import struct
import sys


POINTS = [(1.5, 2.25, 3.0), (4.0, 5.5, 6.75), (7.125, 8.0, 9.5)]


def header(n_count: int, dim, voxel_size=(1.0, 1.0, 1.0)) -> bytes:
    buf = bytearray(1000)
    struct.pack_into("<6s", buf, 0, b"TRACK")
    struct.pack_into("<3h", buf, 6, *dim)
    struct.pack_into("<3f", buf, 12, *voxel_size)
    struct.pack_into("<3f", buf, 24, 0.0, 0.0, 0.0)      # origin
    struct.pack_into("<h", buf, 36, 0)                   # n_scalars
    struct.pack_into("<h", buf, 238, 0)                  # n_properties
    # vox_to_ras: diag(voxel_size) with +0.5*voxel_size translation, so
    # world = M @ (p / voxel_size - 0.5) is the identity on stored points.
    m = [
        [voxel_size[0], 0.0, 0.0, 0.5 * voxel_size[0]],
        [0.0, voxel_size[1], 0.0, 0.5 * voxel_size[1]],
        [0.0, 0.0, voxel_size[2], 0.5 * voxel_size[2]],
        [0.0, 0.0, 0.0, 1.0],
    ]
    for i in range(4):
        struct.pack_into("<4f", buf, 440 + 16 * i, *m[i])
    struct.pack_into("<4s", buf, 948, b"RAS\x00")        # voxel_order
    struct.pack_into("<i", buf, 988, n_count)
    struct.pack_into("<i", buf, 992, 2)                  # version
    struct.pack_into("<i", buf, 996, 1000)               # hdr_size
    return bytes(buf)


def main(path: str) -> None:
    # dim = ceil(extent / voxel_size) + 1 per axis, matching the writer.
    lo = [min(p[i] for p in POINTS) for i in range(3)]
    hi = [max(p[i] for p in POINTS) for i in range(3)]
    import math

    dim = [int(math.ceil(hi[i] - lo[i])) + 1 for i in range(3)]
    with open(path, "wb") as f:
        f.write(header(1, dim))
        f.write(struct.pack("<i", len(POINTS)))
        for p in POINTS:
            f.write(struct.pack("<3f", *p))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/one_streamline.trk")

"""Points files and atomic file output.

A points file holds one decoded configuration, one point per line:

    TCP-POINTS v1
    SPACE hp d=3 n=6
    SEED 1
    N 6
    <d * dim K coefficients, or m * n generator entries row-major>

Floats are written with 17 significant digits so they read back exactly;
exact rationals are written as p/q.
"""
from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import DIMS, Configuration
from .systems import SpaceDescriptor


def atomic_write(path, text: str) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_number(v) -> str:
    if isinstance(v, (int, Fraction)):
        v = Fraction(v)
        return f"{v.numerator}/{v.denominator}"
    return f"{float(v):.17g}"


def parse_number(s: str):
    if "/" in s:
        p, q = s.split("/", 1)
        return Fraction(int(p), int(q))
    return float(s)


@dataclass
class PointsFile:
    space: str
    seed: int
    rows: list  # one list of numbers per point

    @property
    def descriptor(self) -> SpaceDescriptor:
        return SpaceDescriptor.parse(self.space)

    def to_text(self) -> str:
        lines = ["TCP-POINTS v1", f"SPACE {self.space}", f"SEED {self.seed}", f"N {len(self.rows)}"]
        lines.extend(" ".join(format_number(v) for v in row) for row in self.rows)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PointsFile":
        lines = [ln for ln in text.splitlines()]
        if len(lines) < 4 or lines[0] != "TCP-POINTS v1":
            raise ValueError("not a TCP-POINTS v1 file")
        if not lines[1].startswith("SPACE ") or not lines[2].startswith("SEED ") or not lines[3].startswith("N "):
            raise ValueError("malformed points header")
        space = lines[1][6:].strip()
        SpaceDescriptor.parse(space)
        seed = int(lines[2][5:])
        count = int(lines[3][2:])
        body = [ln for ln in lines[4:] if ln.strip()]
        if len(body) != count:
            raise ValueError(f"header announces {count} points, file has {len(body)}")
        rows = [[parse_number(t) for t in ln.split()] for ln in body]
        return cls(space, seed, rows)

    def point_shape(self) -> tuple:
        desc = self.descriptor
        if desc.is_grassmann:
            return (desc.m, desc.n)
        return (desc.dim, DIMS[desc.tag])

    def to_configuration(self) -> Configuration:
        desc = self.descriptor
        shape = self.point_shape()
        width = shape[0] * shape[1]
        for r in self.rows:
            if len(r) != width:
                raise ValueError(f"each point needs {width} numbers, found {len(r)}")
        pts = np.array([[float(v) for v in r] for r in self.rows]).reshape((len(self.rows),) + shape)
        kind = "grassmann" if desc.is_grassmann else "projective"
        return Configuration(kind, pts, desc.tag, None, {"descriptor": self.space, "seed": self.seed})

    @classmethod
    def from_configuration(cls, space: str, seed: int, config: Configuration) -> "PointsFile":
        rows = [list(np.asarray(p, dtype=float).ravel()) for p in config.points]
        return cls(space, seed, rows)


def write_points(path, pf: PointsFile) -> None:
    atomic_write(path, pf.to_text())


def read_points(path) -> PointsFile:
    with open(path, encoding="ascii") as fh:
        return PointsFile.from_text(fh.read())

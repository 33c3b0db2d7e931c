"""Shared measure containers: cube measures and shift samples.

These types are produced by the construction module and consumed by the
spectral module; keeping them here avoids a dependency cycle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

__all__ = ["CubeMeasure", "ShiftSample"]

_FORMAT_VERSION = "cantor-measure/1"


@dataclass(frozen=True)
class CubeMeasure:
    """A finite sum Sigma w_i * lambda_{Q_i} of normalized Lebesgue measures
    on axis-aligned cubes Q_i = corner + [0, side]^d.

    ``mass_fractions`` optionally carries the masses as exact rationals; the
    float ``atoms`` field is always authoritative for numerics.
    """

    d: int
    atoms: tuple  # of (corner tuple, side, mass)
    mass_fractions: Optional[tuple] = None  # of Fraction, parallel to atoms

    def __post_init__(self):
        norm = tuple(
            (tuple(float(c) for c in corner), float(side), float(mass))
            for corner, side, mass in self.atoms
        )
        object.__setattr__(self, "atoms", norm)
        for corner, side, mass in norm:
            if len(corner) != self.d:
                raise ValueError("corner dimension mismatch")
            if not side > 0:
                raise ValueError("cube side must be positive")
            if not mass > 0:
                raise ValueError("atom mass must be positive")
        if self.mass_fractions is not None:
            fr = tuple(Fraction(f) for f in self.mass_fractions)
            object.__setattr__(self, "mass_fractions", fr)
            if len(fr) != len(norm):
                raise ValueError("mass_fractions must parallel atoms")

    @property
    def total_mass(self) -> float:
        return sum(mass for _, _, mass in self.atoms)

    def corners_sides_masses(self):
        corners = np.array([c for c, _, _ in self.atoms], dtype=float)
        sides = np.array([s for _, s, _ in self.atoms], dtype=float)
        masses = np.array([m for _, _, m in self.atoms], dtype=float)
        return corners, sides, masses

    def to_json(self) -> str:
        atoms = []
        for i, (corner, side, mass) in enumerate(self.atoms):
            rec = {
                "corner": [repr(c) for c in corner],
                "side": repr(side),
                "mass": repr(mass),
            }
            if self.mass_fractions is not None:
                rec["mass_exact"] = str(self.mass_fractions[i])
            atoms.append(rec)
        doc = {"version": _FORMAT_VERSION, "d": self.d, "atoms": atoms}
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CubeMeasure":
        doc = json.loads(text)
        if doc.get("version") != _FORMAT_VERSION:
            raise ValueError(f"unsupported measure format {doc.get('version')!r}")
        atoms = []
        fractions = []
        for rec in doc["atoms"]:
            atoms.append(
                (tuple(float(c) for c in rec["corner"]), float(rec["side"]), float(rec["mass"]))
            )
            if "mass_exact" in rec:
                fractions.append(Fraction(rec["mass_exact"]))
        mf = tuple(fractions) if len(fractions) == len(atoms) else None
        return cls(int(doc["d"]), tuple(atoms), mf)


@dataclass(frozen=True)
class ShiftSample:
    """M uniform shifts in [0, 1-r]^d defining one realization of the
    random average of shifted side-r cube measures."""

    M: int
    r: float
    shifts: tuple  # of coordinate tuples
    d: int
    seed_lineage: tuple = ()

    def __post_init__(self):
        sh = tuple(tuple(float(c) for c in v) for v in self.shifts)
        object.__setattr__(self, "shifts", sh)
        if not 0 < self.r < 0.5:
            raise ValueError(f"r must lie in (0, 1/2), got {self.r}")
        if len(sh) != self.M:
            raise ValueError("shift count must equal M")
        for v in sh:
            if len(v) != self.d:
                raise ValueError("shift dimension mismatch")
            if any(c < 0 or c > 1 - self.r + 1e-15 for c in v):
                raise ValueError(f"shift {v} outside [0, 1-r]^d")

    def as_cube_measure(self) -> CubeMeasure:
        mass = 1.0 / self.M
        return CubeMeasure(self.d, tuple((v, self.r, mass) for v in self.shifts))

"""Ranked offspring displacement sequences and their exponential functionals.

A branch event is described by a finite non-decreasing sequence of real
displacements; entries beyond the stored list are understood as +infinity and
carry no mass, so a finite tuple represents the whole sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PointSequence:
    """Finite non-decreasing displacement sequence (trailing infinities implicit)."""

    atoms: tuple[float, ...]

    def __post_init__(self):
        for v in self.atoms:
            if not math.isfinite(v):
                raise ValueError(f"non-finite displacement {v!r}")
        if any(self.atoms[i] > self.atoms[i + 1] for i in range(len(self.atoms) - 1)):
            raise ValueError("atoms must be non-decreasing; use canonicalize()")

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def to_json(self) -> list[float]:
        return list(self.atoms)


def canonicalize(values) -> PointSequence:
    """Sort raw displacements into ranked form. Empty input is the pure-cemetery sequence."""
    vals = [float(v) for v in values]
    for v in vals:
        if not math.isfinite(v):
            raise ValueError(f"non-finite displacement {v!r}")
    return PointSequence(tuple(sorted(vals)))


def translate(x: PointSequence, y: float) -> PointSequence:
    """Shift every displacement by y; length is preserved."""
    return PointSequence(tuple(v + y for v in x.atoms))


def exp_sum(x: PointSequence) -> float:
    """Sum of exp(-v) over the atoms (0 for the empty sequence)."""
    return math.fsum(math.exp(-v) for v in x.atoms)


def xexp_sum(x: PointSequence) -> float:
    """Sum of v * exp(-v) over the non-negative atoms.

    Each term lies in [0, 1/e], so the value is bounded by len(x)/e.
    """
    return math.fsum(v * math.exp(-v) for v in x.atoms if v >= 0.0)


def exp_xexp_sum(x: PointSequence) -> float:
    """exp_sum + xexp_sum, i.e. sum of (1 + max(v,0)) exp(-v)."""
    return exp_sum(x) + xexp_sum(x)

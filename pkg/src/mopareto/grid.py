"""Geometric bucketing of objective vectors with exact cell placement.

Each dimension is subdivided at powers of 1 + eps above a per-dimension
anchor, so any two solutions sharing a cell approximate each other within a
factor strictly below 1 + eps in every component.  Anchors are the
per-dimension instance minima rather than the global value-range floor:
identical correctness, far fewer cells.

Cell coordinates are found by exact search; boundary values always land in
the upper cell, giving every value a unique home.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .model import Instance
from .numerics import pow_ratio

__all__ = [
    "CellIndex",
    "GridBucketing",
    "cell_coord",
    "bucket",
    "filter_weakly_nondominated_cells",
    "diagonal_of",
    "ratio_steps_to_reach",
]

CellIndex = tuple[int, ...]


@dataclass(frozen=True)
class GridBucketing:
    """A partition of solution ids into grid cells keyed by coordinate tuples."""

    eps: Fraction
    lower: tuple[Fraction, ...]
    cells: Mapping[CellIndex, tuple[str, ...]]


def cell_coord(value: Fraction, anchor: Fraction, eps: Fraction) -> int:
    """Maximal integer t with anchor * (1+eps)**t <= value, computed exactly.

    Exponential probing followed by binary search; no floating-point log is
    ever the final authority, so values sitting exactly on a cell boundary are
    placed deterministically (they go up).
    """
    if anchor <= 0 or eps <= 0:
        raise ValueError("anchor and eps must be positive")
    if value < anchor:
        raise ValueError(f"value {value} below anchor {anchor}")
    ratio = 1 + eps
    if anchor * ratio > value:
        return 0
    lo, hi = 1, 2
    while anchor * pow_ratio(ratio, hi) <= value:
        lo, hi = hi, hi * 2
    # invariant: anchor * ratio**lo <= value < anchor * ratio**hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if anchor * pow_ratio(ratio, mid) <= value:
            lo = mid
        else:
            hi = mid
    return lo


def bucket(instance: Instance, eps: Fraction) -> GridBucketing:
    """Assign every solution to its grid cell; anchors are per-dimension minima."""
    if not instance.solutions:
        raise ValueError("cannot bucket an empty instance")
    anchors = tuple(
        min(sol.f[i] for sol in instance.solutions) for i in range(instance.p)
    )
    cells: dict[CellIndex, list[str]] = {}
    for sol in instance.solutions:
        coords = tuple(
            cell_coord(sol.f[i], anchors[i], eps) for i in range(instance.p)
        )
        cells.setdefault(coords, []).append(sol.id)
    return GridBucketing(
        eps=eps, lower=anchors, cells={c: tuple(ids) for c, ids in cells.items()}
    )


def filter_weakly_nondominated_cells(bucketing: GridBucketing) -> set[CellIndex]:
    """Keep a nonempty cell unless another nonempty cell is strictly below it
    in every coordinate (in which case that cell's points cover it under any
    monotonic relation)."""
    cells = list(bucketing.cells)
    return {
        c
        for c in cells
        if not any(
            all(d_i < c_i for d_i, c_i in zip(d, c)) for d in cells if d != c
        )
    }


def diagonal_of(cell: CellIndex) -> CellIndex:
    """Canonical key of the diagonal through a cell.

    Two cells share a key iff they differ by a multiple of the all-ones
    vector; the key is the cell shifted so its minimum coordinate is zero.
    """
    low = min(cell)
    return tuple(c - low for c in cell)


def ratio_steps_to_reach(target: Fraction, eps: Fraction) -> int:
    """Smallest t >= 0 with (1+eps)**t >= target (target >= 1 assumed useful)."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if target <= 1:
        return 0
    t = cell_coord(target, Fraction(1), eps)
    return t if pow_ratio(1 + eps, t) == target else t + 1

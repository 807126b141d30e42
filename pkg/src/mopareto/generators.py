"""Deterministic instance families used throughout the test and CLI surface.

Each generator is a pure function of its parameters.  The named families
reproduce specific extremal behaviors exactly (see the individual
docstrings); antichain and random instances exist for property testing.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Literal

from .model import Instance, Solution
from .numerics import pow_ratio

__all__ = [
    "gen_prop_dominated",
    "gen_prop_one_exact",
    "gen_quasi2_gap",
    "gen_duplicated",
    "gen_antichain",
    "gen_random",
]

DuplicationMode = Literal["one_exact_quasi2", "quasi_k_over_half"]


def gen_prop_dominated(eps: Fraction) -> Instance:
    """Six biobjective points whose unique two-member quasi-1-exact cover
    consists of strictly dominated solutions only.

    x5 and x6 are strictly dominated (by x2 and x3 respectively), yet
    {x5, x6} covers everything with at least one exact component, and no
    single solution covers all six even within factor 1 + eps.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    e = eps
    one = Fraction(1)
    points = [
        ("x1", one, (1 + e) ** 2),
        ("x2", 1 + e / 2, (1 + e) * (1 + e / 4)),
        ("x3", (1 + e) * (1 + e / 4), 1 + e / 2),
        ("x4", (1 + e) ** 2, one),
        ("x5", 1 + e, (1 + e) * (1 + e / 2)),
        ("x6", (1 + e) * (1 + e / 2), 1 + e),
    ]
    return Instance(p=2, solutions=tuple(Solution(i, (a, b)) for i, a, b in points))


def gen_prop_one_exact(delta: Fraction, n: int, eps: Fraction | None = None) -> Instance:
    """Biobjective family of 3n + 1 points whose smallest first-component-exact
    cover has exactly n + 1 members, all but one of them strictly dominated.

    Parameterized by (delta, n) with eps derived as (1+delta)**(2n) - 1 so all
    values stay rational; an explicit eps is cross-checked against that
    identity.  Points: x0 = (1, (1+eps)**n) and, for i = 1..n,
    xbar_i = (3i,   (1+eps)**(n-i) * (1+delta)**(i-1)),
    x_i    = (3i+1, (1+eps)**(n-i) * (1+delta)**i),
    xtil_i = (3i+2, (1+eps)**(n-i) / (1+delta)**i).
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if n < 1:
        raise ValueError("n must be at least 1")
    derived = pow_ratio(1 + delta, 2 * n) - 1
    if eps is not None and eps != derived:
        raise ValueError(
            f"(1+delta)**(2n) = 1+eps must hold exactly: got eps={eps}, expected {derived}"
        )
    e, d = derived, delta
    solutions = [Solution("x0", (Fraction(1), pow_ratio(1 + e, n)))]
    for i in range(1, n + 1):
        tail = pow_ratio(1 + e, n - i)
        solutions.append(Solution(f"xbar{i}", (Fraction(3 * i), tail * pow_ratio(1 + d, i - 1))))
        solutions.append(Solution(f"x{i}", (Fraction(3 * i + 1), tail * pow_ratio(1 + d, i))))
        solutions.append(Solution(f"xtil{i}", (Fraction(3 * i + 2), tail / pow_ratio(1 + d, i))))
    return Instance(p=2, solutions=tuple(solutions))


def gen_quasi2_gap(eps: Fraction, n: int) -> Instance:
    """Three-objective family of n + 1 points where requiring two exact
    components forces all n + 1 points into the cover, while a single point
    suffices within factor 1 + eps.

    x_j = (1 + (n-j)/n * eps, 1 + (n-j)/n * eps, (1+eps)**(2j+1)) for j = 0..n.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if n < 1:
        raise ValueError("n must be at least 1")
    solutions = []
    for j in range(n + 1):
        head = 1 + Fraction(n - j, n) * eps
        solutions.append(Solution(f"x{j}", (head, head, pow_ratio(1 + eps, 2 * j + 1))))
    return Instance(p=3, solutions=tuple(solutions))


def gen_duplicated(base: Instance, p: int, mode: DuplicationMode) -> Instance:
    """Lift a biobjective instance to p objectives by duplicating components.

    one_exact_quasi2:   (g1, g2, g2, ..., g2)  -- one copy of g1, p-1 of g2.
    quasi_k_over_half:  g1 repeated ceil(p/2) times, then g2 floor(p/2) times.
    """
    if base.p != 2:
        raise ValueError("duplication lifts biobjective instances only")
    if p < 3:
        raise ValueError("target objective count must be at least 3")
    half_up = -(-p // 2)
    solutions = []
    for sol in base.solutions:
        g1, g2 = sol.f
        if mode == "one_exact_quasi2":
            vec = (g1,) + (g2,) * (p - 1)
        elif mode == "quasi_k_over_half":
            vec = (g1,) * half_up + (g2,) * (p - half_up)
        else:
            raise ValueError(f"unknown duplication mode: {mode!r}")
        solutions.append(Solution(sol.id, vec))
    return Instance(p=p, solutions=tuple(solutions))


def gen_antichain(n: int) -> Instance:
    """n pairwise nondominated biobjective points (i, n+1-i) for i = 1..n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return Instance(
        p=2,
        solutions=tuple(
            Solution(f"a{i}", (Fraction(i), Fraction(n + 1 - i))) for i in range(1, n + 1)
        ),
    )


def gen_random(n: int, p: int, seed: int, value_range: int = 4) -> Instance:
    """Reproducible random instance: values are ratios of integers drawn from
    [1, 2**value_range], hence inside [2**-value_range, 2**value_range]."""
    if n < 1 or p < 1:
        raise ValueError("n and p must be at least 1")
    if value_range < 1:
        raise ValueError("value_range must be at least 1")
    rng = random.Random(seed)
    top = 1 << value_range
    solutions = tuple(
        Solution(
            f"s{i}",
            tuple(Fraction(rng.randint(1, top), rng.randint(1, top)) for _ in range(p)),
        )
        for i in range(1, n + 1)
    )
    return Instance(p=p, solutions=solutions)

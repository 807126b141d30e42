"""Instances, relation specifications, approximation sets, and their file formats.

An instance is an explicit list of identified solutions, each carrying a
vector of strictly positive rational objective values (all objectives are
minimized).  Instances are immutable after construction; every downstream
operation takes a read-only view.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterator, Mapping

from .numerics import parse_rational, render_rational

__all__ = [
    "FormatError",
    "Solution",
    "Instance",
    "RelationKind",
    "RelationSpec",
    "CertificateEntry",
    "ApproximationSet",
    "GapQuery",
    "derive_value_bound",
    "load_instance",
    "save_instance",
    "load_set",
    "save_set",
]


class FormatError(ValueError):
    """A file or payload does not conform to the documented schema."""


@dataclass(frozen=True)
class Solution:
    """One feasible solution: an identifier plus its objective vector."""

    id: str
    f: tuple[Fraction, ...]


@dataclass(frozen=True)
class Instance:
    """An explicit multiobjective instance: p objectives, ordered solutions.

    Invariants enforced here: ids are unique and nonempty, every objective
    value is strictly positive, and all vectors have exactly p components.
    """

    p: int
    solutions: tuple[Solution, ...]
    _pos: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.p < 1:
            raise ValueError("an instance needs at least one objective")
        pos: dict[str, int] = {}
        for i, sol in enumerate(self.solutions):
            if not sol.id:
                raise ValueError("solution ids must be nonempty")
            if sol.id in pos:
                raise ValueError(f"duplicate solution id: {sol.id!r}")
            if len(sol.f) != self.p:
                raise ValueError(
                    f"solution {sol.id!r} has {len(sol.f)} objective values, expected {self.p}"
                )
            if any(v <= 0 for v in sol.f):
                raise ValueError(f"nonpositive objective value in solution {sol.id!r}")
            pos[sol.id] = i
        object.__setattr__(self, "_pos", pos)

    def __len__(self) -> int:
        return len(self.solutions)

    def __iter__(self) -> Iterator[Solution]:
        return iter(self.solutions)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.solutions)

    def solution(self, sol_id: str) -> Solution:
        return self.solutions[self.position(sol_id)]

    def position(self, sol_id: str) -> int:
        """Index of a solution in instance order (the canonical id order)."""
        try:
            return self._pos[sol_id]
        except KeyError:
            raise KeyError(f"unknown solution id: {sol_id!r}") from None


class RelationKind(str, Enum):
    """The five approximate-dominance relation families."""

    EPSILON = "epsilon"
    ONE_EXACT = "one-exact"
    TWO_EXACT = "two-exact"
    QUASI_K = "quasi-k"
    ONE_EXACT_QUASI_K = "one-exact-quasi-k"


_KINDS_WITH_K = (RelationKind.QUASI_K, RelationKind.ONE_EXACT_QUASI_K)


@dataclass(frozen=True)
class RelationSpec:
    """Which approximate-dominance relation is meant, with its parameters.

    k is present exactly for the quasi-k kinds; the upper bound k <= p is
    checked where an instance is at hand.
    """

    kind: RelationKind
    eps: Fraction
    k: int | None = None

    def __post_init__(self) -> None:
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.kind in _KINDS_WITH_K:
            if self.k is None:
                raise ValueError(f"relation {self.kind.value} requires k")
            if self.k < 1:
                raise ValueError("k must be at least 1")
        elif self.k is not None:
            raise ValueError(f"relation {self.kind.value} does not take k")


@dataclass(frozen=True)
class CertificateEntry:
    """Coverage witness: `by` approximates `covered`, exactly in `exact_indices`.

    Indices are 1-based objective positions and list every component in which
    the covering member is at least as good, so one certificate serves every
    relation kind.
    """

    covered: str
    by: str
    exact_indices: tuple[int, ...]


@dataclass(frozen=True)
class ApproximationSet:
    """Selected member ids plus the coverage certificate that justifies them."""

    relation: RelationSpec
    members: tuple[str, ...]
    certificate: tuple[CertificateEntry, ...] = ()


@dataclass(frozen=True)
class GapQuery:
    """A budget-threshold query: componentwise bounds b and a slack delta."""

    b: tuple[Fraction, ...]
    delta: Fraction

    def __post_init__(self) -> None:
        if any(v <= 0 for v in self.b):
            raise ValueError("all budget components must be positive")
        if self.delta <= 0:
            raise ValueError("delta must be positive")


def derive_value_bound(instance: Instance) -> int:
    """Smallest integer M >= 0 with every objective value in [2**-M, 2**M].

    Derived, never user-supplied, so the value-range assumption cannot be
    violated by configuration.
    """
    if not instance.solutions:
        raise ValueError("cannot derive a value bound for an empty instance")
    m = 0
    for sol in instance.solutions:
        for v in sol.f:
            big = v if v >= 1 else 1 / v
            while big > (1 << m):
                m += 1
    return m


def _parse_value(text: object, context: str) -> Fraction:
    if not isinstance(text, str):
        raise FormatError(f"{context}: rational values must be strings, got {text!r}")
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise FormatError(f"{context}: {exc}") from None


def load_instance(data: bytes | str) -> Instance:
    """Parse the JSON instance format; lossless inverse of save_instance."""
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    if not isinstance(raw, dict) or "p" not in raw or "solutions" not in raw:
        raise FormatError('instance file must be an object with "p" and "solutions"')
    p = raw["p"]
    if not isinstance(p, int) or p < 1:
        raise FormatError(f'"p" must be a positive integer, got {p!r}')
    entries = raw["solutions"]
    if not isinstance(entries, list):
        raise FormatError('"solutions" must be a list')
    solutions = []
    for entry in entries:
        if not isinstance(entry, dict) or "id" not in entry or "f" not in entry:
            raise FormatError(f'solution entries need "id" and "f": {entry!r}')
        sol_id = entry["id"]
        if not isinstance(sol_id, str):
            raise FormatError(f"solution id must be a string: {sol_id!r}")
        values = entry["f"]
        if not isinstance(values, list):
            raise FormatError(f"solution {sol_id!r}: \"f\" must be a list")
        vec = tuple(_parse_value(v, f"solution {sol_id!r}") for v in values)
        if any(v <= 0 for v in vec):
            raise FormatError(f"nonpositive objective value in solution {sol_id!r}")
        solutions.append(Solution(id=sol_id, f=vec))
    try:
        return Instance(p=p, solutions=tuple(solutions))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def save_instance(instance: Instance) -> bytes:
    payload = {
        "p": instance.p,
        "solutions": [
            {"id": s.id, "f": [render_rational(v) for v in s.f]} for s in instance.solutions
        ],
    }
    return (json.dumps(payload, indent=2) + "\n").encode()


def _relation_to_json(spec: RelationSpec) -> dict:
    out: dict = {"kind": spec.kind.value, "eps": render_rational(spec.eps)}
    if spec.k is not None:
        out["k"] = spec.k
    return out


def _relation_from_json(raw: object) -> RelationSpec:
    if not isinstance(raw, dict) or "kind" not in raw or "eps" not in raw:
        raise FormatError('relation must be an object with "kind" and "eps"')
    try:
        kind = RelationKind(raw["kind"])
    except ValueError:
        raise FormatError(f"unknown relation kind: {raw['kind']!r}") from None
    eps = _parse_value(raw["eps"], "relation eps")
    k = raw.get("k")
    if k is not None and not isinstance(k, int):
        raise FormatError(f'"k" must be an integer, got {k!r}')
    try:
        return RelationSpec(kind=kind, eps=eps, k=k)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def load_set(data: bytes | str) -> ApproximationSet:
    """Parse the JSON approximation-set format."""
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    if not isinstance(raw, dict) or "relation" not in raw or "members" not in raw:
        raise FormatError('set file must be an object with "relation" and "members"')
    relation = _relation_from_json(raw["relation"])
    members = raw["members"]
    if not isinstance(members, list) or not all(isinstance(m, str) for m in members):
        raise FormatError('"members" must be a list of id strings')
    entries = []
    for item in raw.get("certificate", []):
        if (
            not isinstance(item, dict)
            or not isinstance(item.get("covered"), str)
            or not isinstance(item.get("by"), str)
            or not isinstance(item.get("exact_indices"), list)
            or not all(isinstance(i, int) and i >= 1 for i in item["exact_indices"])
        ):
            raise FormatError(f"malformed certificate entry: {item!r}")
        entries.append(
            CertificateEntry(
                covered=item["covered"],
                by=item["by"],
                exact_indices=tuple(item["exact_indices"]),
            )
        )
    return ApproximationSet(relation=relation, members=tuple(members), certificate=tuple(entries))


def save_set(aset: ApproximationSet) -> bytes:
    payload = {
        "relation": _relation_to_json(aset.relation),
        "members": list(aset.members),
        "certificate": [
            {"covered": e.covered, "by": e.by, "exact_indices": list(e.exact_indices)}
            for e in aset.certificate
        ],
    }
    return (json.dumps(payload, indent=2) + "\n").encode()

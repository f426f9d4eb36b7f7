"""Points, lines, planes and hyperplanes of P^4 with exact coordinates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .exact import Q, ZERO, constant_part, format_q, mat_nullspace, mat_rank

DIM = 5  # homogeneous coordinates of P^4


def _canonical(coords: Sequence) -> tuple[Fraction, ...]:
    coords = tuple(Q(x) for x in coords)
    lead = next((x for x in coords if x), None)
    if lead is None:
        raise ValueError("the zero vector is not a projective point")
    return tuple(x / lead for x in coords)


def coords_of(p) -> tuple[Fraction, ...]:
    if isinstance(p, ProjPoint):
        return p.coords
    return tuple(constant_part(x) for x in p)


@dataclass(frozen=True)
class ProjPoint:
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(Q(x) for x in self.coords)
        if not any(coords):
            raise ValueError("the zero vector is not a projective point")
        object.__setattr__(self, "coords", coords)

    @property
    def canonical(self) -> tuple[Fraction, ...]:
        return _canonical(self.coords)

    def __eq__(self, other):
        return isinstance(other, ProjPoint) and self.canonical == other.canonical

    def __hash__(self):
        return hash(self.canonical)

    def to_json(self) -> list[str]:
        return [format_q(x) for x in self.canonical]


def plucker(a: Sequence, b: Sequence) -> tuple[Fraction, ...]:
    """The 10 entries a_i b_j - a_j b_i, i < j, of the exterior product."""
    a, b = coords_of(a), coords_of(b)
    return tuple(a[i] * b[j] - a[j] * b[i] for i, j in combinations(range(len(a)), 2))


def plucker_relations(p: Sequence[Fraction], n: int = DIM) -> list[Fraction]:
    """Values of the quadratic Plucker relations p_ij p_kl - p_ik p_jl + p_il p_jk."""
    index = {ij: k for k, ij in enumerate(combinations(range(n), 2))}
    return [
        p[index[i, j]] * p[index[k, l]]
        - p[index[i, k]] * p[index[j, l]]
        + p[index[i, l]] * p[index[j, k]]
        for i, j, k, l in combinations(range(n), 4)
    ]


@dataclass(frozen=True, eq=False)
class ProjLine:
    a: ProjPoint
    b: ProjPoint

    def __post_init__(self):
        if span_rank([self.a, self.b]) != 2:
            raise ValueError("a line needs two independent points")

    @classmethod
    def through(cls, a, b) -> "ProjLine":
        return cls(ProjPoint(coords_of(a)), ProjPoint(coords_of(b)))

    @property
    def plucker(self) -> tuple[Fraction, ...]:
        return _canonical(plucker(self.a, self.b))

    def contains(self, p) -> bool:
        return span_rank([self.a, self.b, p]) == 2

    def __eq__(self, other):
        return isinstance(other, ProjLine) and self.plucker == other.plucker

    def __hash__(self):
        return hash(self.plucker)

    def to_json(self) -> list[str]:
        return [format_q(x) for x in self.plucker]


@dataclass(frozen=True)
class Hyperplane:
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(Q(x) for x in self.coords)
        if not any(coords):
            raise ValueError("the zero form is not a hyperplane")
        object.__setattr__(self, "coords", coords)

    def __call__(self, p) -> Fraction:
        return sum((h * x for h, x in zip(self.coords, coords_of(p))), ZERO)

    def contains(self, p) -> bool:
        return self(p) == 0


@dataclass(frozen=True, eq=False)
class ProjPlane:
    points: tuple[ProjPoint, ProjPoint, ProjPoint]

    def __post_init__(self):
        if span_rank(self.points) != 3:
            raise ValueError("a plane needs three independent points")

    @classmethod
    def through(cls, *pts) -> "ProjPlane":
        return cls(tuple(ProjPoint(coords_of(p)) for p in pts))

    def equations(self) -> list[Hyperplane]:
        """Two hyperplanes whose intersection is the plane."""
        return [Hyperplane(h) for h in mat_nullspace([p.coords for p in self.points])]

    def contains(self, p) -> bool:
        return span_rank(list(self.points) + [p]) == 3

    def meet(self, h: Hyperplane) -> "ProjLine | ProjPlane":
        vals = [h(p) for p in self.points]
        if not any(vals):
            return self
        # combinations a*p0 + b*p1 + c*p2 with h vanishing
        basis = mat_nullspace([vals])
        pts = [
            tuple(sum(w * x for w, x in zip(vec, col)) for col in zip(*(p.coords for p in self.points)))
            for vec in basis
        ]
        return ProjLine.through(*pts)

    def __eq__(self, other):
        return (
            isinstance(other, ProjPlane)
            and span_rank(list(self.points) + list(other.points)) == 3
        )

    def __hash__(self):
        return 0


def span_rank(points: Sequence) -> int:
    rows = [coords_of(p) for p in points]
    return mat_rank(rows) if rows else 0


def proj_equal(a, b) -> bool:
    if isinstance(a, ProjLine) and isinstance(b, ProjLine):
        return a.plucker == b.plucker
    if isinstance(a, ProjPoint) and isinstance(b, ProjPoint):
        return a.canonical == b.canonical
    raise TypeError("proj_equal compares two points or two lines")


def image_dim(value: Sequence, derivatives: Sequence[Sequence]) -> int:
    """Local dimension of an image variety: rank[value; derivatives] - 1."""
    value = coords_of(value)
    if not any(value):
        raise ValueError("value must be a nonzero vector")
    return mat_rank([value] + [coords_of(d) for d in derivatives]) - 1

"""Plane charts: three polynomial point maps (u, v) -> P^4 spanning a moving plane.

Also the chart text format, jet evaluation into frames, and the
nondegeneracy check.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    ChartSyntaxError,
    DegenerateChart,
    DegenerateCongruence,
    DegenerateSpanAtBase,
    UnknownVariable,
    ZeroPointMap,
)
from .exact import Jet2, Q, dot, format_q, jet_nullspace, mat_rank
from .poly import Poly, poly_to_jet

PointMap = tuple[Poly, Poly, Poly, Poly, Poly]


@dataclass(frozen=True)
class Sampling:
    """Seeded sampling of generic base points.

    Base points have coordinates n/d with |n| <= num_bound, 1 <= d <= den_bound.
    """

    seed: int = 0
    samples: int = 5
    budget: int = 12
    num_bound: int = 40
    den_bound: int = 7

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")

    def rng(self) -> random.Random:
        return random.Random(self.seed)


def random_rational(rng: random.Random, num_bound: int, den_bound: int) -> Fraction:
    return Fraction(rng.randint(-num_bound, num_bound), rng.randint(1, den_bound))


def sample_point(rng: random.Random, sampling: Sampling) -> tuple[Fraction, Fraction]:
    return (
        random_rational(rng, sampling.num_bound, sampling.den_bound),
        random_rational(rng, sampling.num_bound, sampling.den_bound),
    )


@dataclass(frozen=True)
class PlaneChart:
    points: tuple[PointMap, PointMap, PointMap]
    name: str | None = field(default=None, compare=False)
    expected: str | None = field(default=None, compare=False)

    def __post_init__(self):
        pts = tuple(tuple(_as_poly(c) for c in p) for p in self.points)
        if len(pts) != 3 or any(len(p) != 5 for p in pts):
            raise ValueError("a plane chart has three point maps of five coordinates")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_maps(cls, *maps, name=None, expected=None) -> "PlaneChart":
        return cls(tuple(tuple(m) for m in maps), name=name, expected=expected)

    def evaluate(self, u0, v0) -> list[tuple[Fraction, ...]]:
        return [tuple(c(u0, v0) for c in p) for p in self.points]

    def with_points(self, points) -> "PlaneChart":
        return PlaneChart(tuple(tuple(p) for p in points), name=self.name, expected=self.expected)


def _as_poly(c) -> Poly:
    if isinstance(c, Poly):
        return c
    if isinstance(c, str):
        return parse_expr(c)
    return Poly.const(c)


# -- parsing --------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(.))")


class _ExprParser:
    """Recursive descent over the chart expression grammar.

    A leading unary minus is accepted at the start of an expression, which is
    what the canonical printer emits for negative leading terms.
    """

    def __init__(self, text: str, line: int = 1, col0: int = 1):
        self.line = line
        self.col0 = col0
        self.toks = []
        for m in _TOKEN.finditer(text):
            if m.group(0).strip() == "":
                continue
            kind = "int" if m.group(1) else "name" if m.group(2) else "op"
            self.toks.append((kind, m.group(m.lastindex), m.start(m.lastindex)))
        self.end = len(text.rstrip())
        self.i = 0

    def _err(self, msg, pos=None):
        if pos is None:
            pos = self.toks[self.i][2] if self.i < len(self.toks) else self.end
        raise ChartSyntaxError(msg, self.line, self.col0 + pos)

    def _peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, self.end)

    def _take(self):
        tok = self._peek()
        self.i += 1
        return tok

    def parse(self) -> Poly:
        p = self.expr()
        if self.i != len(self.toks):
            self._err(f"unexpected {self._peek()[1]!r}")
        return p

    def expr(self) -> Poly:
        neg = False
        if self._peek()[1] == "-":
            self._take()
            neg = True
        p = self.term()
        if neg:
            p = -p
        while self._peek()[1] in ("+", "-"):
            op = self._take()[1]
            t = self.term()
            p = p + t if op == "+" else p - t
        return p

    def term(self) -> Poly:
        p = self.factor()
        while self._peek()[1] == "*":
            self._take()
            p = p * self.factor()
        return p

    def factor(self) -> Poly:
        b = self.base()
        if self._peek()[1] == "^":
            self._take()
            kind, val, pos = self._take()
            if kind != "int":
                self._err("expected a natural exponent after '^'", pos)
            b = b ** int(val)
        return b

    def base(self) -> Poly:
        kind, val, pos = self._take()
        if kind == "int":
            num = int(val)
            if self._peek()[1] == "/":
                self._take()
                k2, den, pos2 = self._take()
                if k2 != "int" or int(den) == 0:
                    self._err("expected a positive integer denominator", pos2)
                return Poly.const(Fraction(num, int(den)))
            return Poly.const(num)
        if kind == "name":
            if val not in ("u", "v"):
                raise UnknownVariable(val, self.line, self.col0 + pos)
            return Poly.var(val)
        if val == "(":
            p = self.expr()
            k2, v2, pos2 = self._take()
            if v2 != ")":
                self._err("expected ')'", pos2)
            return p
        if kind is None:
            self._err("unexpected end of expression", pos)
        self._err(f"unexpected {val!r}", pos)


def parse_expr(text: str, line: int = 1, col0: int = 1) -> Poly:
    return _ExprParser(text, line, col0).parse()


def _split_list(body: str, line: int, col0: int):
    """Split the inside of [...] on top-level commas, keeping column offsets."""
    items, depth, start = [], 0, 0
    for k, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            items.append((body[start:k], col0 + start))
            start = k + 1
    items.append((body[start:], col0 + start))
    return items


def parse_chart(text: str) -> PlaneChart:
    maps = []
    vars_seen = False
    name = expected = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, rest = raw.partition(":")
        key = key.strip()
        if not sep:
            raise ChartSyntaxError("expected 'key: value'", lineno, 1)
        rest_col = len(raw) - len(rest) + 1
        if key == "vars":
            names = rest.split()
            for n in names:
                if n not in ("u", "v"):
                    raise UnknownVariable(n, lineno, rest_col + rest.index(n))
            if names != ["u", "v"]:
                raise ChartSyntaxError("expected 'vars: u v'", lineno, rest_col)
            vars_seen = True
        elif key == "point":
            lb, rb = rest.find("["), rest.rfind("]")
            if lb < 0 or rb < lb or rest[rb + 1:].strip():
                raise ChartSyntaxError("expected '[p0, p1, p2, p3, p4]'", lineno, rest_col)
            items = _split_list(rest[lb + 1:rb], lineno, rest_col + lb + 1)
            if len(items) != 5:
                raise ChartSyntaxError(
                    f"a point map has 5 coordinates, got {len(items)}", lineno, rest_col + lb
                )
            coords = tuple(parse_expr(body, lineno, col) for body, col in items)
            if all(c.is_zero() for c in coords):
                raise ZeroPointMap(f"line {lineno}: point map is identically zero")
            maps.append(coords)
        elif key == "expect":
            expected = rest.strip()
        elif key == "name":
            name = rest.strip()
        else:
            raise ChartSyntaxError(f"unknown key {key!r}", lineno, 1)
    if not vars_seen:
        raise ChartSyntaxError("missing 'vars: u v' line", 1, 1)
    if len(maps) != 3:
        raise ChartSyntaxError(f"expected exactly three point lines, got {len(maps)}", 1, 1)
    return PlaneChart(tuple(maps), name=name, expected=expected)


def format_chart(chart: PlaneChart, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    if chart.name:
        lines.append(f"name: {chart.name}")
    lines.append("vars: u v")
    for p in chart.points:
        lines.append("point: [" + ", ".join(str(c) for c in p) + "]")
    if chart.expected:
        lines.append(f"expect: {chart.expected}")
    return "\n".join(lines) + "\n"


# -- frames ---------------------------------------------------------------------


@dataclass(frozen=True)
class JetFrame:
    """A chart evaluated at a base point.

    x, y, z are jets of the spanning points, xu.. their first partials (as
    jets of the derivative polynomials), n1, n2 a jet dual basis of the plane.
    """

    base: tuple[Fraction, Fraction]
    x: tuple[Jet2, ...]
    y: tuple[Jet2, ...]
    z: tuple[Jet2, ...]
    du: tuple[tuple[Jet2, ...], ...]  # (x_u, y_u, z_u)
    dv: tuple[tuple[Jet2, ...], ...]  # (x_v, y_v, z_v)
    n1: tuple[Jet2, ...]
    n2: tuple[Jet2, ...]

    @property
    def spanning(self):
        return (self.x, self.y, self.z)

    @property
    def duals(self):
        return (self.n1, self.n2)

    def point(self, coords: Sequence) -> tuple[Jet2, ...]:
        """Jets of a*x + b*y + c*z for (jet or scalar) plane coordinates."""
        return tuple(dot(coords, col) for col in zip(self.x, self.y, self.z))


def _jets(p: PointMap, base) -> tuple[Jet2, ...]:
    return tuple(poly_to_jet(c, base) for c in p)


def eval_frame(chart: PlaneChart, base) -> JetFrame:
    base = (Q(base[0]), Q(base[1]))
    values = [tuple(c(*base) for c in p) for p in chart.points]
    if mat_rank(values) < 3:
        raise DegenerateSpanAtBase(f"spanning points are dependent at {base}")
    spans = tuple(_jets(p, base) for p in chart.points)
    du = tuple(_jets(tuple(c.diff("u") for c in p), base) for p in chart.points)
    dv = tuple(_jets(tuple(c.diff("v") for c in p), base) for p in chart.points)
    n1, n2 = jet_nullspace(spans)
    return JetFrame(base, *spans, du, dv, n1, n2)


@dataclass(frozen=True)
class ChartValidation:
    ok: bool
    realization_dim: int
    resamples: int = 0


def _random_coords(rng: random.Random) -> tuple[Fraction, Fraction, Fraction]:
    return tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3))


def validate_chart(
    chart: PlaneChart,
    sampling: Sampling = Sampling(),
    rng: random.Random | None = None,
    strict: bool = True,
) -> ChartValidation:
    """Check the span is generically a plane and the planes fill P^4.

    realization_dim is the max over samples of rank[x, y, z, Q_u, Q_v] - 1 at a
    random plane point Q.  With ``strict`` a deficient dimension raises
    DegenerateCongruence, otherwise ``ok`` is False.
    """
    rng = rng or sampling.rng()
    derivs = [
        [tuple(c.diff(var) for c in p) for p in chart.points] for var in ("u", "v")
    ]
    best = -1
    good = rejected = 0
    while good < sampling.samples:
        base = sample_point(rng, sampling)
        span = chart.evaluate(*base)
        if mat_rank(span) < 3:
            rejected += 1
            if rejected > sampling.budget:
                if good == 0:
                    raise DegenerateChart("spanning points never have rank 3")
                break
            continue
        good += 1
        coeffs = _random_coords(rng)
        q_derivs = [
            tuple(
                sum(w * col for w, col in zip(coeffs, column))
                for column in zip(*[[c(*base) for c in p] for p in d])
            )
            for d in derivs
        ]
        best = max(best, mat_rank(span + q_derivs) - 1)
    if best < 4 and strict:
        raise DegenerateCongruence(best)
    return ChartValidation(best == 4, best, rejected)

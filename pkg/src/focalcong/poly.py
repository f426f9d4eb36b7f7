"""Bivariate polynomials in the chart parameters u, v over the rationals."""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Mapping

from .exact import JET_MONOMIALS, ZERO, Jet2, Q, format_q

VARS = ("u", "v")


class Poly:
    """Sparse polynomial: a mapping (i, j) -> coefficient of u^i v^j.

    Instances are immutable and always stored without zero coefficients, so
    structural equality is polynomial equality.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        clean = {}
        for (i, j), c in (terms or {}).items():
            c = Q(c)
            if c:
                clean[(int(i), int(j))] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(0, 0): c})

    @classmethod
    def var(cls, name: str) -> "Poly":
        if name == "u":
            return cls({(1, 0): 1})
        if name == "v":
            return cls({(0, 1): 1})
        raise ValueError(f"unknown variable {name!r}")

    @classmethod
    def monomial(cls, i: int, j: int, c=1) -> "Poly":
        return cls({(i, j): c})

    # -- structure --------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(i == 0 and j == 0 for i, j in self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- arithmetic -------------------------------------------------------------
    @staticmethod
    def _lift(x):
        if isinstance(x, Poly):
            return x
        if isinstance(x, (int, Fraction)):
            return Poly.const(x)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly({k: c * other for k, c in self.terms.items()})
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, ZERO) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def diff(self, var: str) -> "Poly":
        if var == "u":
            return Poly({(i - 1, j): c * i for (i, j), c in self.terms.items() if i})
        if var == "v":
            return Poly({(i, j - 1): c * j for (i, j), c in self.terms.items() if j})
        raise ValueError(f"unknown variable {var!r}")

    def __call__(self, u0, v0) -> Fraction:
        u0, v0 = Q(u0), Q(v0)
        return sum((c * u0**i * v0**j for (i, j), c in self.terms.items()), ZERO)

    def compose(self, pu: "Poly", pv: "Poly") -> "Poly":
        """Substitute u -> pu, v -> pv."""
        out = Poly()
        upow: dict[int, Poly] = {}
        vpow: dict[int, Poly] = {}
        for (i, j), c in self.terms.items():
            if i not in upow:
                upow[i] = pu**i
            if j not in vpow:
                vpow[j] = pv**j
            out = out + upow[i] * vpow[j] * c
        return out

    def to_jet(self, u0, v0) -> Jet2:
        return poly_to_jet(self, (u0, v0))

    # -- printing ---------------------------------------------------------------
    def sorted_terms(self):
        """Terms in degree-lex order: higher total degree first, u before v."""
        return sorted(self.terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0]))

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for (i, j), c in self.sorted_terms():
            mono = "*".join(
                s for s in (_power("u", i), _power("v", j)) if s
            )
            mag = abs(c)
            if not mono:
                body = format_q(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_q(mag)}*{mono}"
            if not out:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"Poly({self})"


def _power(name, k):
    if k == 0:
        return ""
    return name if k == 1 else f"{name}^{k}"


def poly_to_jet(p: Poly, base) -> Jet2:
    """Taylor coefficients of p at base, truncated at total degree 2."""
    u0, v0 = Q(base[0]), Q(base[1])
    out = [ZERO] * 6
    for (i, j), c in p.terms.items():
        for k, (a, b) in enumerate(JET_MONOMIALS):
            if a <= i and b <= j:
                out[k] += c * comb(i, a) * u0 ** (i - a) * comb(j, b) * v0 ** (j - b)
    return Jet2(*out)


U = Poly.var("u")
V = Poly.var("v")

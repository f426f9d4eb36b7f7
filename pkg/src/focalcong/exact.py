"""Exact arithmetic substrate: rationals, degree-2 jets, elimination, binary forms.

Everything here works over :class:`fractions.Fraction`.  A :class:`Jet2` is a
truncated Taylor expansion in the two chart parameters; elimination over jets
only ever divides by units (jets with nonzero constant term).
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Callable, Sequence

from .errors import DivisionByNonUnit, PivotNotUnit, WrongDegree

ZERO = Fraction(0)
ONE = Fraction(1)

# exponents (i, j) of du^i dv^j for the six stored coefficients
JET_MONOMIALS = ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))
_MAX_ORDER = 2

# (k, l, m): coefficient k of a product receives a_l * b_m
_PRODUCT_TABLE = tuple(
    (k, l, m)
    for k, (ki, kj) in enumerate(JET_MONOMIALS)
    for l, (li, lj) in enumerate(JET_MONOMIALS)
    for m, (mi, mj) in enumerate(JET_MONOMIALS)
    if li + mi == ki and lj + mj == kj
)


def Q(x) -> Fraction:
    """Coerce ints, strings like ``"3/2"`` and Fractions to a Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def format_q(x: Fraction) -> str:
    x = Q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class Jet2:
    """Truncated Taylor expansion c00 + c10 du + c01 dv + c20 du^2 + c11 du dv + c02 dv^2.

    ``order`` is the total degree up to which the coefficients are known (2 for
    jets of polynomials, 1 after one differentiation).  Coefficients above the
    order are stored as zero and ignored.
    """

    __slots__ = ("c", "order")

    def __init__(self, c00=0, c10=0, c01=0, c20=0, c11=0, c02=0, order=_MAX_ORDER):
        if not 0 <= order <= _MAX_ORDER:
            raise ValueError(f"jet order must be in 0..{_MAX_ORDER}")
        coeffs = (c00, c10, c01, c20, c11, c02)
        self.c = tuple(
            Q(x) if sum(JET_MONOMIALS[k]) <= order else ZERO for k, x in enumerate(coeffs)
        )
        self.order = order

    @classmethod
    def const(cls, x, order=_MAX_ORDER) -> "Jet2":
        return cls(x, order=order)

    @classmethod
    def _raw(cls, coeffs, order) -> "Jet2":
        jet = cls.__new__(cls)
        jet.c = tuple(
            x if sum(JET_MONOMIALS[k]) <= order else ZERO for k, x in enumerate(coeffs)
        )
        jet.order = order
        return jet

    # -- accessors ------------------------------------------------------------
    @property
    def value(self) -> Fraction:
        return self.c[0]

    @property
    def du(self) -> Fraction:
        return self.c[1]

    @property
    def dv(self) -> Fraction:
        return self.c[2]

    @property
    def duu(self) -> Fraction:
        return 2 * self.c[3]

    @property
    def duv(self) -> Fraction:
        return self.c[4]

    @property
    def dvv(self) -> Fraction:
        return 2 * self.c[5]

    def is_unit(self) -> bool:
        return self.c[0] != 0

    def is_zero(self) -> bool:
        return not any(self.c)

    def d_du(self) -> "Jet2":
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        c = self.c
        return Jet2._raw((c[1], 2 * c[3], c[4], ZERO, ZERO, ZERO), self.order - 1)

    def d_dv(self) -> "Jet2":
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        c = self.c
        return Jet2._raw((c[2], c[4], 2 * c[5], ZERO, ZERO, ZERO), self.order - 1)

    def truncate(self, order: int) -> "Jet2":
        return Jet2._raw(self.c, min(order, self.order))

    # -- arithmetic -----------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, Jet2):
            return other
        if isinstance(other, (int, Fraction)):
            return Jet2._raw((Q(other), ZERO, ZERO, ZERO, ZERO, ZERO), _MAX_ORDER)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Jet2._raw(
            tuple(a + b for a, b in zip(self.c, other.c)), min(self.order, other.order)
        )

    __radd__ = __add__

    def __neg__(self):
        return Jet2._raw(tuple(-a for a in self.c), self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Jet2._raw(
            tuple(a - b for a, b in zip(self.c, other.c)), min(self.order, other.order)
        )

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Jet2._raw(tuple(a * other for a in self.c), self.order)
        if not isinstance(other, Jet2):
            return NotImplemented
        order = min(self.order, other.order)
        out = [ZERO] * 6
        a, b = self.c, other.c
        for k, l, m in _PRODUCT_TABLE:
            if a[l] and b[m]:
                out[k] += a[l] * b[m]
        return Jet2._raw(out, order)

    __rmul__ = __mul__

    def inverse(self) -> "Jet2":
        b0 = self.c[0]
        if b0 == 0:
            raise DivisionByNonUnit("jet has zero constant term")
        # b = b0 (1 + e) with e nilpotent of order 3 after truncation
        e = Jet2._raw((ZERO,) + tuple(x / b0 for x in self.c[1:]), self.order)
        return (1 - e + e * e) * (ONE / b0)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByNonUnit("division by zero scalar")
            return Jet2._raw(tuple(a / other for a in self.c), self.order)
        if not isinstance(other, Jet2):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Jet2._raw((Q(other),) + (ZERO,) * 5, self.order)
        if not isinstance(other, Jet2):
            return NotImplemented
        order = min(self.order, other.order)
        return self.truncate(order).c == other.truncate(order).c

    def __hash__(self):
        return hash((self.c, self.order))

    def __repr__(self):
        names = ("", "du", "dv", "du^2", "du*dv", "dv^2")
        parts = [
            f"{format_q(x)}{'*' + n if n else ''}" for x, n in zip(self.c, names) if x
        ]
        body = " + ".join(parts) if parts else "0"
        return f"Jet2({body}; order={self.order})"


def jet_arith(a: Jet2, b: Jet2, op: str) -> Jet2:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown jet operation {op!r}")


def constant_part(x):
    return x.value if isinstance(x, Jet2) else Q(x)


def dot(a: Sequence, b: Sequence):
    """Sum of products; works for any mix of Fractions and Jet2."""
    terms = iter(zip(a, b))
    x, y = next(terms)
    total = x * y
    for x, y in terms:
        total = total + x * y
    return total


# -- elimination ------------------------------------------------------------------


def _rref(
    rows: Sequence[Sequence],
    is_unit: Callable[[object], bool],
    is_zero: Callable[[object], bool],
):
    """Reduced row echelon form pivoting only on ``is_unit`` entries.

    Returns (nonzero rows, pivot columns, leftover rows).  Leftover rows are
    the ones for which no unit pivot was found; over a field they are zero.
    """
    M = [list(r) for r in rows]
    if not M:
        return [], [], []
    nrows, ncols = len(M), len(M[0])
    pivots = []
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if is_unit(M[i][col])), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][col]
        M[r] = [x / p for x in M[r]]
        for i in range(nrows):
            if i != r and not is_zero(M[i][col]):
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
    leftovers = [row for row in M[r:] if not all(is_zero(x) for x in row)]
    return M[:r], pivots, leftovers


def _kernel_from_rref(R, pivots, ncols, one, zero):
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return basis


def _q_matrix(M):
    return [[Q(x) for x in row] for row in M]


def mat_rank(M: Sequence[Sequence]) -> int:
    M = _q_matrix(M)
    _, pivots, _ = _rref(M, lambda x: x != 0, lambda x: x == 0)
    return len(pivots)


def mat_nullspace(M: Sequence[Sequence]) -> list[tuple[Fraction, ...]]:
    """Basis of {v : M v = 0}, one vector per free column with that entry 1."""
    M = _q_matrix(M)
    ncols = len(M[0])
    R, pivots, _ = _rref(M, lambda x: x != 0, lambda x: x == 0)
    return _kernel_from_rref(R, pivots, ncols, ONE, ZERO)


def as_jet(x) -> Jet2:
    return x if isinstance(x, Jet2) else Jet2.const(x)


def jet_nullspace(M: Sequence[Sequence]) -> list[tuple[Jet2, ...]]:
    """Kernel basis over the jet ring.

    The pivoting rule matches :func:`mat_nullspace` on constant parts, so the
    constant parts of the result equal ``mat_nullspace`` of the constant
    matrix.  Raises :class:`PivotNotUnit` when a row survives elimination with
    a non-unit entry (the jet rank exceeds the constant rank).
    """
    M = [[as_jet(x) for x in row] for row in M]
    ncols = len(M[0])
    R, pivots, leftovers = _rref(M, Jet2.is_unit, Jet2.is_zero)
    if leftovers:
        raise PivotNotUnit("rank of the jet matrix exceeds the rank of its constant part")
    order = min((x.order for row in M for x in row), default=2)
    return _kernel_from_rref(R, pivots, ncols, Jet2.const(1, order), Jet2.const(0, order))


def mat_mul(A, B):
    return [[dot(row, col) for col in zip(*B)] for row in A]


def mat_vec(A, v):
    return tuple(dot(row, v) for row in A)


def mat_det(M) -> Fraction:
    """Determinant by rational elimination."""
    M = _q_matrix(M)
    n = len(M)
    det = ONE
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col] != 0), None)
        if piv is None:
            return ZERO
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        p = M[col][col]
        det *= p
        for i in range(col + 1, n):
            f = M[i][col] / p
            if f:
                M[i] = [a - f * b for a, b in zip(M[i], M[col])]
    return det


def mat_inverse(M):
    n = len(M)
    aug = [list(map(Q, row)) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(M)]
    R, pivots, _ = _rref(aug, lambda x: x != 0, lambda x: x == 0)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


# -- univariate helpers (coefficient lists, highest degree first) ------------------


def _trim(p):
    i = 0
    while i < len(p) and p[i] == 0:
        i += 1
    return list(p[i:])


def _poly_divmod(a, b):
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    a = list(a)
    quot = []
    for i in range(len(a) - len(b) + 1):
        f = a[i] / b[0]
        quot.append(f)
        if f:
            for j, bj in enumerate(b):
                a[i + j] -= f * bj
    return _trim(quot), _trim(a[len(quot):])


def _poly_gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    return [x / a[0] for x in a]


# -- binary forms -----------------------------------------------------------------


class BinaryForm:
    """Homogeneous form sum_k coeffs[k] * lam^(d-k) * mu^k of degree d = len(coeffs)-1."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        if not coeffs:
            raise ValueError("a binary form needs at least one coefficient")
        self.coeffs = tuple(Q(c) for c in coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __call__(self, lam, mu):
        d = self.degree
        return sum(c * Q(lam) ** (d - k) * Q(mu) ** k for k, c in enumerate(self.coeffs))

    def __eq__(self, other):
        return isinstance(other, BinaryForm) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"BinaryForm({', '.join(format_q(c) for c in self.coeffs)})"

    def __str__(self):
        d = self.degree
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "*".join(
                s for s in (_pow("lam", d - k), _pow("mu", k)) if s
            )
            if not mono:
                parts.append(format_q(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{format_q(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    # dehomogenisation at mu = 1: returns (multiplicity of the root (1:0), poly in t)
    def _split(self):
        e = 0
        while e < len(self.coeffs) and self.coeffs[e] == 0:
            e += 1
        return e, list(self.coeffs[e:])

    @classmethod
    def _join(cls, e, p):
        return cls([ZERO] * e + list(p))

    def monic(self) -> "BinaryForm":
        lead = next((c for c in self.coeffs if c), None)
        if lead is None:
            return self
        return BinaryForm([c / lead for c in self.coeffs])

    def divides(self, other: "BinaryForm") -> bool:
        """True iff self divides other exactly (every form divides the zero form)."""
        if self.is_zero():
            return other.is_zero()
        if other.is_zero():
            return True
        e1, p1 = self._split()
        e2, p2 = other._split()
        if e1 > e2:
            return False
        _, rem = _poly_divmod(p2, p1)
        return not rem

    def disc(self) -> Fraction:
        return binform_disc(self)

    def rational_roots(self) -> list[tuple[Fraction, Fraction]]:
        """Distinct rational roots (lam:mu), normalised with mu = 1 or (1:0)."""
        if self.is_zero():
            raise ValueError("the zero form vanishes everywhere")
        e, p = self._split()
        roots = [(ONE, ZERO)] if e else []
        p = _trim(p)
        deg = len(p) - 1
        if deg == 1:
            roots.append((-p[1] / p[0], ONE))
        elif deg == 2:
            a, b, c = p
            disc = b * b - 4 * a * c
            s = rational_sqrt(disc)
            if s is not None:
                for r in sorted({(-b + s) / (2 * a), (-b - s) / (2 * a)}):
                    roots.append((r, ONE))
        elif deg > 2:
            raise WrongDegree("rational_roots supports degree <= 2")
        return roots


def _pow(name, k):
    if k == 0:
        return ""
    return name if k == 1 else f"{name}^{k}"


def rational_sqrt(x: Fraction) -> Fraction | None:
    x = Q(x)
    if x < 0:
        return None
    n, d = isqrt(x.numerator), isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


class _AllOfP1:
    """Sentinel: every point of P^1 is a common root."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "AllOfP1"


AllOfP1 = _AllOfP1()


def binform_gcd(forms: Sequence[BinaryForm]) -> BinaryForm | _AllOfP1:
    """Monic gcd of the nonzero forms; AllOfP1 when every input is zero."""
    nonzero = [f for f in forms if not f.is_zero()]
    if not nonzero:
        return AllOfP1
    e, g = nonzero[0]._split()
    for f in nonzero[1:]:
        ef, pf = f._split()
        e = min(e, ef)
        g = _poly_gcd(g, pf)
    g = _poly_gcd(g, g) if g else [ONE]
    return BinaryForm._join(e, g).monic()


def binform_disc(f: BinaryForm) -> Fraction:
    if f.degree != 2:
        raise WrongDegree(f"discriminant needs a degree-2 form, got degree {f.degree}")
    a, b, c = f.coeffs
    return b * b - 4 * a * c


def double_root(f: BinaryForm) -> tuple[Fraction, Fraction]:
    """The root of a degree-2 form with zero discriminant, i.e. (-b : 2a)."""
    a, b, c = f.coeffs
    if a != 0:
        return (-b / (2 * a), ONE)
    return (ONE, ZERO)


def normalize_direction(lam, mu) -> tuple[Fraction, Fraction]:
    lam, mu = Q(lam), Q(mu)
    if mu != 0:
        return (lam / mu, ONE)
    if lam == 0:
        raise ValueError("the zero direction is not a point of P^1")
    return (ONE, ZERO)

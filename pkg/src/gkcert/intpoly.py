"""Univariate polynomials over Z with exact operations.

A polynomial a_0 + a_1 X + ... + a_n X^n is the coefficient tuple
(a_0, ..., a_n), constant term first, with no trailing zeros; the zero
polynomial is the empty tuple and has degree -1.

Beyond ring arithmetic this module provides the three exact-algebra
operations the rest of the package leans on:

* ``count_real_roots`` -- Sturm sequence over Q (fractions.Fraction),
* ``poly_discriminant`` -- subresultant PRS, integer arithmetic throughout,
* squarefreeness via gcd(f, f').
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd

from .errors import NotMonic, NotSquarefree


class IntPoly:
    """Immutable integer polynomial, constant term first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        if not all(isinstance(c, int) for c in cs):
            raise TypeError("integer coefficients required")
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("IntPoly is immutable")

    # -- basic structure --

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> int:
        if self.is_zero:
            return 0
        return self.coeffs[-1]

    @property
    def is_monic(self) -> bool:
        return self.lc == 1

    def __eq__(self, other):
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                x = "X" if i == 1 else f"X^{i}"
                if c == 1:
                    parts.append(x)
                elif c == -1:
                    parts.append(f"-{x}")
                else:
                    parts.append(f"{c}*{x}")
        return " + ".join(reversed(parts)).replace("+ -", "- ")

    # -- ring operations --

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPoly(out)

    def __neg__(self):
        return IntPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly([other * c for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPoly(())
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return IntPoly(out)

    __rmul__ = __mul__

    def __call__(self, x):
        """Evaluate at x (int or Fraction) by Horner."""
        v = 0
        for c in reversed(self.coeffs):
            v = v * x + c
        return v

    def derivative(self) -> "IntPoly":
        return IntPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def content(self) -> int:
        return reduce(gcd, (abs(c) for c in self.coeffs), 0)

    def primitive_part(self) -> "IntPoly":
        c = self.content()
        if c <= 1:
            return self
        sign = 1 if self.lc > 0 else -1
        return IntPoly([sign * x // c for x in self.coeffs])


X = IntPoly([0, 1])


def from_vector(vector) -> IntPoly:
    """Monic polynomial X^n + sum a_i X^i from the vector [a_0, ..., a_{n-1}]."""
    return IntPoly(list(vector) + [1])


def to_vector(f: IntPoly) -> list[int]:
    if not f.is_monic:
        raise NotMonic(f"{f} is not monic")
    return list(f.coeffs[:-1])


# -- rational helpers (private): polynomials as Fraction lists -----------------

def _frac(f: IntPoly) -> list[Fraction]:
    return [Fraction(c) for c in f.coeffs]


def _ftrim(a: list[Fraction]) -> list[Fraction]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _frem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        q = a[-1] / lb
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[shift + i] -= q * c
        _ftrim(a)
        if not a:
            break
    return a


def gcd_over_q(f: IntPoly, g: IntPoly) -> IntPoly:
    """Monic gcd of f and g in Q[X], returned as a primitive integer polynomial."""
    a, b = _frac(f), _frac(g)
    if not a:
        a, b = b, a
    while b:
        a, b = b, _frem(a, b)
    if not a:
        return IntPoly(())
    den = reduce(lambda x, y: x * y.denominator // gcd(x, y.denominator), a, 1)
    return IntPoly([int(c * den) for c in a]).primitive_part()


def is_squarefree_poly(f: IntPoly) -> bool:
    if f.degree <= 1:
        return not f.is_zero
    return gcd_over_q(f, f.derivative()).degree == 0


def squarefree_part(f: IntPoly) -> IntPoly:
    """f divided by gcd(f, f'), primitive; the radical of f over Q."""
    if f.degree <= 1:
        return f
    g = gcd_over_q(f, f.derivative())
    if g.degree == 0:
        return f
    q, r = divmod_q(f, g)
    assert r.is_zero
    return q.primitive_part()


def divmod_q(f: IntPoly, g: IntPoly) -> tuple[IntPoly, IntPoly]:
    """Quotient and remainder of f by g over Q; both must be integral to return
    IntPoly, so this is meant for exact divisions and monic divisors."""
    a, b = _frac(f), _frac(g)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        c = a[-1] / lb
        shift = len(a) - 1 - db
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] -= c * bc
        _ftrim(a)
    def to_int(cs):
        if any(c.denominator != 1 for c in cs):
            raise ValueError("non-integral quotient/remainder")
        return IntPoly([int(c) for c in cs])
    return to_int(q), to_int(a)


# -- Sturm sequences ----------------------------------------------------------

def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations(signs) -> int:
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_sequence(f: IntPoly) -> list[list[Fraction]]:
    chain = [_frac(f), _frac(f.derivative())]
    while chain[-1]:
        r = [-c for c in _frem(chain[-2], chain[-1])]
        if not r:
            break
        chain.append(r)
    return chain


def count_real_roots(f: IntPoly) -> int:
    """Number of real roots of a squarefree f, by Sturm sign variations.

    Raises NotSquarefree when gcd(f, f') is nonconstant; callers must deflate
    first (squarefree_part) if they want root counts of arbitrary input.
    """
    if f.is_zero:
        raise NotSquarefree("zero polynomial")
    if f.degree == 0:
        return 0
    if not is_squarefree_poly(f):
        raise NotSquarefree(f"{f} has a repeated factor")
    chain = sturm_sequence(f)
    at_plus = [_sign(c[-1]) for c in chain]
    at_minus = [_sign(c[-1]) * (1 if (len(c) - 1) % 2 == 0 else -1) for c in chain]
    return _variations(at_minus) - _variations(at_plus)


def count_real_roots_in(f: IntPoly, a: Fraction, b: Fraction) -> int:
    """Real roots of squarefree f in the half-open interval (a, b]."""
    if not is_squarefree_poly(f):
        raise NotSquarefree(f"{f} has a repeated factor")
    chain = sturm_sequence(f)

    def ev(t):
        return [_sign(sum(c * t**i for i, c in enumerate(p))) for p in chain]

    return _variations(ev(Fraction(a))) - _variations(ev(Fraction(b)))


# -- resultant and discriminant (subresultant PRS) ------------------------------

def _pseudo_rem(a: IntPoly, b: IntPoly) -> IntPoly:
    """prem(a, b) = lc(b)^(deg a - deg b + 1) * a  mod b, integer arithmetic."""
    d = a.degree - b.degree
    lb = b.lc
    r = a * (lb ** (d + 1))
    cs = list(r.coeffs)
    while len(cs) - 1 >= b.degree and cs:
        q, rem = divmod(cs[-1], lb)
        assert rem == 0
        shift = len(cs) - 1 - b.degree
        for i, c in enumerate(b.coeffs):
            cs[shift + i] -= q * c
        while cs and cs[-1] == 0:
            cs.pop()
    return IntPoly(cs)


def resultant(f: IntPoly, g: IntPoly) -> int:
    """Res(f, g) over Z via the subresultant PRS (no fraction blowup)."""
    if f.is_zero or g.is_zero:
        return 0
    if f.degree == 0:
        return f.coeffs[0] ** g.degree
    if g.degree == 0:
        return g.coeffs[0] ** f.degree
    s = 1
    A, B = f, g
    if A.degree < B.degree:
        if (A.degree * B.degree) % 2 == 1:
            s = -s
        A, B = B, A
    ca, cb = A.content(), B.content()
    t = ca**B.degree * cb**A.degree
    A = IntPoly([c // ca for c in A.coeffs])
    B = IntPoly([c // cb for c in B.coeffs])
    g_, h = 1, 1
    while True:
        delta = A.degree - B.degree
        if (A.degree % 2 == 1) and (B.degree % 2 == 1):
            s = -s
        R = _pseudo_rem(A, B)
        A = B
        denom = g_ * h**delta
        B = IntPoly([c // denom for c in R.coeffs])
        if not R.is_zero:
            assert all(c % denom == 0 for c in R.coeffs)
        g_ = A.lc
        h = (g_**delta * h ** (1 - delta)) if delta <= 1 else (g_**delta // h ** (delta - 1))
        if B.is_zero:
            return 0
        if B.degree == 0:
            break
    h = B.coeffs[0] ** A.degree // h ** (A.degree - 1) if A.degree >= 1 else h
    return s * t * h


def poly_discriminant(f: IntPoly) -> int:
    """disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lc(f) for monic nonconstant f."""
    if not f.is_monic:
        raise NotMonic(f"{f} is not monic")
    n = f.degree
    if n < 1:
        raise NotMonic("constant polynomial has no discriminant")
    if n == 1:
        return 1
    res = resultant(f, f.derivative())
    return (-1) ** (n * (n - 1) // 2) * res

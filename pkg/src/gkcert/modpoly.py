"""Polynomial arithmetic and factorization over F_p.

Polynomials over F_p are plain tuples of ints in [0, p), constant term
first, trailing zeros stripped (the zero polynomial is ()).  On top of the
ring operations this module implements the full factorization pipeline --
squarefree decomposition, distinct-degree splitting and equal-degree
(Cantor-Zassenhaus) splitting -- with all randomness drawn from a generator
seeded deterministically from the input, so factorizations are reproducible
across runs and platforms.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass

from .errors import NotPrime, ZeroPolynomial
from .intpoly import IntPoly
from .numutil import is_prime

# Artifact-wide base seed for equal-degree splitting; mixed per input below.
ARTIFACT_SEED = 0x6B63672D



def _trim(a: list[int]) -> tuple[int, ...]:
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def reduce_intpoly(f: IntPoly, p: int) -> tuple[int, ...]:
    return _trim([c % p for c in f.coeffs])


def deg(a) -> int:
    return len(a) - 1


def add(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _trim(out)


def sub(a, b, p):
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _trim(out)


def mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trim([c % p for c in out])


def scale(a, c, p):
    c %= p
    return _trim([ai * c % p for ai in a])


def divmod_p(a, b, p):
    if not b:
        raise ZeroDivisionError
    inv_lb = pow(b[-1], p - 2, p)
    r = list(a)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(r) >= len(b) and r:
        c = r[-1] * inv_lb % p
        shift = len(r) - len(b)
        q[shift] = c
        for i, bc in enumerate(b):
            r[shift + i] = (r[shift + i] - c * bc) % p
        while r and r[-1] == 0:
            r.pop()
    return _trim(q), _trim(r)


def rem(a, b, p):
    return divmod_p(a, b, p)[1]


def gcd_p(a, b, p):
    while b:
        a, b = b, rem(a, b, p)
    if a:
        a = monic(a, p)
    return a


def monic(a, p):
    if not a or a[-1] == 1:
        return a
    return scale(a, pow(a[-1], p - 2, p), p)


def pow_mod(base, e: int, mod, p):
    """base^e mod (mod, p) by square and multiply."""
    result = (1,)
    base = rem(base, mod, p)
    while e:
        if e & 1:
            result = rem(mul(result, base, p), mod, p)
        base = rem(mul(base, base, p), mod, p)
        e >>= 1
    return result


def derivative(a, p):
    return _trim([i * c % p for i, c in enumerate(a)][1:])


X_P = (0, 1)


@dataclass(frozen=True)
class ModPFactorization:
    """Factorization of f mod p into monic irreducibles with multiplicity.

    ``unit`` is the leading coefficient of f mod p, so that
    unit * prod(factor^mult) == f mod p exactly.  Factors are sorted by
    (degree, coefficient tuple) for deterministic output.
    """

    p: int
    unit: int
    factors: tuple[tuple[tuple[int, ...], int], ...]

    def degrees(self) -> list[tuple[int, int]]:
        """Sorted (residue degree, multiplicity) pairs."""
        return sorted((deg(g), m) for g, m in self.factors)

    def product(self) -> tuple[int, ...]:
        out = (self.unit % self.p,)
        for g, m in self.factors:
            for _ in range(m):
                out = mul(out, g, self.p)
        return out

    @property
    def is_squarefree(self) -> bool:
        return all(m == 1 for _, m in self.factors)

    @property
    def is_irreducible(self) -> bool:
        return len(self.factors) == 1 and self.factors[0][1] == 1


def _seed_for(f: IntPoly, p: int, seed: int | None) -> int:
    base = ARTIFACT_SEED if seed is None else seed
    blob = f"{base}|{p}|{','.join(map(str, f.coeffs))}".encode()
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")


def _squarefree_decomposition(f, p):
    """[(g_i, m_i)] with f = prod g_i^m_i, each g_i monic squarefree, pairwise coprime."""
    out = []
    c = gcd_p(f, derivative(f, p), p)
    w = divmod_p(f, c, p)[0] if c != (1,) else f
    w = monic(w, p)
    i = 1
    while deg(w) > 0:
        y = gcd_p(w, c, p)
        z = divmod_p(w, y, p)[0]
        if deg(z) > 0:
            out.append((monic(z, p), i))
        w = y
        c = divmod_p(c, y, p)[0]
        i += 1
    if deg(c) > 0:
        # c is a polynomial in X^p: take the p-th root (Frobenius fixes F_p)
        root = _trim([c[j] for j in range(0, len(c), p)])
        for g, m in _squarefree_decomposition(monic(root, p), p):
            out.append((g, m * p))
    return out


def _distinct_degree(f, p):
    """[(product of irreducible factors of degree d, d)] for squarefree monic f."""
    out = []
    h = X_P
    g = f
    d = 0
    while deg(g) >= 2 * (d + 1):
        d += 1
        h = pow_mod(h, p, g, p)
        gd = gcd_p(sub(h, X_P, p), g, p)
        if deg(gd) > 0:
            out.append((gd, d))
            g = divmod_p(g, gd, p)[0]
            h = rem(h, g, p)
    if deg(g) > 0:
        out.append((g, deg(g)))
    return out


def _equal_degree(f, d, p, rng):
    """Split squarefree monic f, all of whose irreducible factors have degree d."""
    n = deg(f)
    if n == d:
        return [f]
    while True:
        a = _trim([rng.randrange(p) for _ in range(n)])
        if deg(a) < 1:
            continue
        if p == 2:
            # trace map over F_{2^d}
            t, acc = a, a
            for _ in range(d - 1):
                acc = rem(mul(acc, acc, p), f, p)
                t = add(t, acc, p)
            g = gcd_p(t, f, p)
        else:
            g = gcd_p(a, f, p)
            if 0 < deg(g) < n:
                pass
            else:
                b = pow_mod(a, (p**d - 1) // 2, f, p)
                g = gcd_p(sub(b, (1,), p), f, p)
        if 0 < deg(g) < n:
            left = _equal_degree(g, d, p, rng)
            right = _equal_degree(divmod_p(f, g, p)[0], d, p, rng)
            return left + right


def factor_mod_p(f: IntPoly, p: int, seed: int | None = None) -> ModPFactorization:
    """Full factorization of f mod p.

    Raises NotPrime for composite p and ZeroPolynomial when f vanishes mod p.
    The equal-degree stage is randomized but seeded from (seed, p, f), so the
    output is deterministic; factors come back sorted by degree then by
    coefficient tuple.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    fbar = reduce_intpoly(f, p)
    if not fbar:
        raise ZeroPolynomial(f"polynomial vanishes mod {p}")
    unit = fbar[-1]
    fbar = monic(fbar, p)
    if deg(fbar) == 0:
        return ModPFactorization(p=p, unit=unit, factors=())
    rng = random.Random(_seed_for(f, p, seed))
    found: list[tuple[tuple[int, ...], int]] = []
    for g, mult in _squarefree_decomposition(fbar, p):
        for part, d in _distinct_degree(g, p):
            for irr in _equal_degree(part, d, p, rng):
                found.append((irr, mult))
    found.sort(key=lambda t: (deg(t[0]), t[0]))
    return ModPFactorization(p=p, unit=unit, factors=tuple(found))


def is_irreducible_mod_p(a, p: int) -> bool:
    """Rabin irreducibility test for a monic polynomial over F_p."""
    n = deg(a)
    if n <= 0:
        return False
    if n == 1:
        return True
    xq = pow_mod(X_P, p**n, a, p)
    if sub(xq, X_P, p):
        return False
    from .numutil import factorint

    for q in factorint(n):
        xq = pow_mod(X_P, p ** (n // q), a, p)
        if deg(gcd_p(sub(xq, X_P, p), a, p)) != 0:
            return False
    return True

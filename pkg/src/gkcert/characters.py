"""Exact character tables and the character-theoretic operations built on them.

Character values live in Q(zeta_e), e = exponent(G), always (uniform equality
semantics; no conductor minimization).  Tables come from:

* the dual-group construction for abelian groups,
* closed-form families for dihedral groups and Q8,
* the Burnside-Dixon method for raw multiplication tables: simultaneous
  eigenvectors of the class-multiplication matrices over F_q for the
  smallest prime q = 1 (mod e) with q > 2*sqrt(|G|), lifted to exact
  cyclotomic values through the eigenvalue-multiplicity transform and then
  *verified* by exact orthogonality -- the modular step cannot silently
  corrupt a table.

Rows are ordered by (degree, lexicographic value key), so tables are
deterministic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .cyclotomic import CycNumber
from .errors import InternalCheckError, NonIntegralDimension, ScaleExceeded
from .groups import FiniteGroup
from .numutil import is_prime, primitive_root

SCALE_BOUND = 64


@dataclass(frozen=True)
class ClassFunction:
    group: FiniteGroup
    values: tuple[CycNumber, ...]  # one value per conjugacy class

    def value_at(self, g: int) -> CycNumber:
        return self.values[self.group.class_of[g]]


@dataclass(frozen=True)
class Character(ClassFunction):
    degree: int = 1
    # exponent of zeta_e per class for monomial-valued (degree-1) rows; fast path
    monomials: tuple[int, ...] | None = None

    def contragredient(self) -> "Character":
        return Character(
            group=self.group,
            values=tuple(v.conjugate() for v in self.values),
            degree=self.degree,
            monomials=None
            if self.monomials is None
            else tuple((-k) % self.group.exponent() for k in self.monomials),
        )

    def kernel(self) -> frozenset[int]:
        g = self.group
        deg = CycNumber.from_rational(self.degree)
        return frozenset(x for x in range(g.order) if self.value_at(x) == deg)

    def sort_key(self):
        e = self.group.exponent()
        return (self.degree, tuple(v.sort_key(e) for v in self.values))


class Parity(enum.Enum):
    ODD = "odd"
    EVEN = "even"


# -- inner products -----------------------------------------------------------


def inner_product(a: ClassFunction, b: ClassFunction) -> CycNumber:
    """<a, b> = (1/|G|) sum |C| a(C) conj(b(C)), exact."""
    G = a.group
    acc = CycNumber.from_rational(0)
    for cls, va, vb in zip(G.classes, a.values, b.values):
        acc = acc + len(cls) * (va * vb.conjugate())
    return acc / G.order


def _inner_product_int(a: Character, b: Character) -> Fraction:
    """Fast inner product for integral (den == 1) rows; returns the rational
    value and raises if the result is irrational (it never is for genuine
    character rows: <chi, psi> is a rational integer)."""
    G = a.group
    e = G.exponent()
    if a.monomials is not None and b.monomials is not None:
        counts: dict[int, int] = {}
        for cls, ka, kb in zip(G.classes, a.monomials, b.monomials):
            k = (ka - kb) % e
            counts[k] = counts.get(k, 0) + len(cls)
        total = CycNumber.from_exponents(e, counts)
        return total.as_fraction() / G.order
    va = [x.embed(e) for x in a.values]
    vb_conj = [x.embed(e).conjugate() for x in b.values]
    if any(x.den != 1 for x in va) or any(x.den != 1 for x in vb_conj):
        return inner_product(a, b).as_fraction() / 1
    phi = len(va[0].num) if va else 1
    acc = [0] * (2 * phi)
    for cls, x, y in zip(G.classes, va, vb_conj):
        w = len(cls)
        xn, yn = x.num, y.num
        for i, xi in enumerate(xn):
            if xi:
                wxi = w * xi
                for j, yj in enumerate(yn):
                    if yj:
                        acc[i + j] += wxi * yj
    total = CycNumber.from_exponents(e, {k: c for k, c in enumerate(acc) if c})
    return total.as_fraction() / G.order


def verify_character_table(table: list[Character]) -> None:
    """Exact first and second orthogonality plus the degree-sum identity;
    raises InternalCheckError on any failure."""
    if not table:
        raise InternalCheckError("empty character table")
    G = table[0].group
    n, r = G.order, len(G.classes)
    if len(table) != r:
        raise InternalCheckError(f"{len(table)} rows for {r} classes")
    if sum(ch.degree**2 for ch in table) != n:
        raise InternalCheckError("sum of squared degrees != |G|")
    for i, chi in enumerate(table):
        if not (chi.values[0].is_integer and chi.values[0].as_int() == chi.degree):
            raise InternalCheckError("value at identity != degree")
        for j in range(i + 1):
            got = _inner_product_int(chi, table[j])
            if got != (1 if i == j else 0):
                raise InternalCheckError(f"row orthogonality fails at ({i},{j}): {got}")
    # column orthogonality follows from row orthonormality, but check it anyway
    sizes = [len(c) for c in G.classes]
    for i in range(r):
        for j in range(i + 1):
            acc = CycNumber.from_rational(0)
            for ch in table:
                acc = acc + ch.values[i] * ch.values[j].conjugate()
            want = Fraction(n, sizes[i]) if i == j else Fraction(0)
            if not (acc.is_rational and acc.as_fraction() == want):
                raise InternalCheckError(f"column orthogonality fails at ({i},{j})")


# -- table construction -------------------------------------------------------


def character_table(G: FiniteGroup) -> list[Character]:
    """Complete irreducible character table, exact values, deterministic order."""
    if G.order > SCALE_BOUND:
        raise ScaleExceeded(f"|G| = {G.order} exceeds the supported bound {SCALE_BOUND}")
    kind = G.spec[0]
    if kind == "abelian":
        table = _abelian_table(G)
    elif kind == "dihedral":
        table = _dihedral_table(G)
    elif kind == "quaternion8":
        table = _q8_table(G)
    else:
        table = _dixon_table(G)
        verify_character_table(table)
    table.sort(key=Character.sort_key)
    return table


def _abelian_table(G: FiniteGroup) -> list[Character]:
    invs = G.spec[1]
    e = G.exponent()
    n = G.order

    def decode(i):
        out = []
        for d in invs:
            out.append(i % d)
            i //= d
        return out

    elements = [decode(g) for g in range(n)]
    table = []
    for a in range(n):
        av = decode(a)
        exps = []
        for gv in elements:
            k = sum(ai * gi * (e // d) for ai, gi, d in zip(av, gv, invs)) % e
            exps.append(k)
        # classes are singletons in element order
        values = tuple(CycNumber.from_exponents(e, {k: 1}) for k in exps)
        table.append(Character(group=G, values=values, degree=1, monomials=tuple(exps)))
    return table


def _dihedral_table(G: FiniteGroup) -> list[Character]:
    n = G.spec[1]
    e = G.exponent()  # lcm(n, 2)
    step = e // n

    def lin(sign_a: int, sign_b: int) -> Character:
        vals, exps = [], []
        for cls in G.classes:
            g = cls[0]
            i, refl = (g, 0) if g < n else (g - n, 1)
            v = (sign_a**i) * (sign_b**refl)
            vals.append(CycNumber.from_exponents(e, {0: v}))
            exps.append(0 if v == 1 else e // 2)
        return Character(group=G, values=tuple(vals), degree=1, monomials=tuple(exps))

    table = [lin(1, 1), lin(1, -1)]
    if n % 2 == 0:
        table += [lin(-1, 1), lin(-1, -1)]
    for h in range(1, (n - 1) // 2 + 1 if n % 2 else n // 2):
        vals = []
        for cls in G.classes:
            g = cls[0]
            if g < n:
                k = (h * g * step) % e
                mults: dict[int, int] = {}
                for kk in (k, (e - k) % e):
                    mults[kk] = mults.get(kk, 0) + 1
                vals.append(CycNumber.from_exponents(e, mults))
            else:
                vals.append(CycNumber.from_exponents(e, {}))
        table.append(Character(group=G, values=tuple(vals), degree=2))
    return table


def _q8_table(G: FiniteGroup) -> list[Character]:
    # classes: (0,), (1,), (2,3)=+-i, (4,5)=+-j, (6,7)=+-k
    e = 4
    table = []
    for s, t in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        per_class = [1, 1, s, t, s * t]
        vals = tuple(CycNumber.from_exponents(e, {0: v}) for v in per_class)
        exps = tuple(0 if v == 1 else 2 for v in per_class)
        table.append(Character(group=G, values=vals, degree=1, monomials=exps))
    two = [2, -2, 0, 0, 0]
    vals = tuple(CycNumber.from_exponents(e, {0: v}) for v in two)
    table.append(Character(group=G, values=vals, degree=2))
    return table


# -- Burnside-Dixon for raw tables --------------------------------------------


def _dixon_prime(e: int, n: int) -> int:
    q = max(3, 2 * isqrt(n) + 1)
    q += (1 - q) % e  # q = 1 mod e
    while not (is_prime(q) and q * q > 4 * n):
        q += e if e > 1 else 1
    return q


def _class_matrix(G: FiniteGroup, i: int, reps) -> list[list[int]]:
    r = len(G.classes)
    A = [[0] * r for _ in range(r)]
    for k, rep_k in enumerate(reps):
        for x in G.classes[i]:
            j = G.class_of[G.op(G.inv(x), rep_k)]
            A[j][k] += 1
    return A


def _rref(rows, q):
    rows = [list(r) for r in rows]
    pivots = []
    rank = 0
    cols = len(rows[0]) if rows else 0
    for c in range(cols):
        pr = next((i for i in range(rank, len(rows)) if rows[i][c] % q), None)
        if pr is None:
            continue
        rows[rank], rows[pr] = rows[pr], rows[rank]
        inv = pow(rows[rank][c], q - 2, q)
        rows[rank] = [x * inv % q for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % q for a, b in zip(rows[i], rows[rank])]
        pivots.append(c)
        rank += 1
        if rank == len(rows):
            break
    return rows[:rank], pivots


def _hessenberg_charpoly(M, q):
    """Characteristic polynomial of M mod q, constant term first (Hessenberg
    reduction by paired row/column operations, then a determinant recurrence)."""
    d = len(M)
    H = [[x % q for x in row] for row in M]
    for c in range(d - 2):
        pr = next((i for i in range(c + 1, d) if H[i][c]), None)
        if pr is None:
            continue
        if pr != c + 1:
            H[c + 1], H[pr] = H[pr], H[c + 1]
            for row in H:
                row[c + 1], row[pr] = row[pr], row[c + 1]
        inv = pow(H[c + 1][c], q - 2, q)
        for i in range(c + 2, d):
            f = H[i][c] * inv % q
            if f:
                H[i] = [(a - f * b) % q for a, b in zip(H[i], H[c + 1])]
                for row in H:
                    row[c + 1] = (row[c + 1] + f * row[i]) % q
    # p_k = charpoly of leading k x k block (lambda as the variable)
    polys = [[1]]
    for k in range(1, d + 1):
        # expand along the last column of the k x k block
        lead = polys[k - 1]
        term = [(-H[k - 1][k - 1]) % q * c % q for c in lead] + [0]
        for i in range(len(lead)):
            term[i + 1] = (term[i + 1] + lead[i]) % q
        beta = 1
        for i in range(k - 1, 0, -1):
            beta = beta * H[i][i - 1] % q
            coef = H[i - 1][k - 1] * beta % q
            if coef:
                sub = polys[i - 1]
                for t, c in enumerate(sub):
                    term[t] = (term[t] - coef * c) % q
        polys.append(term)
    return polys[d]


def _poly_roots_mod(poly, q):
    roots = []
    for x in range(q):
        acc = 0
        for c in reversed(poly):
            acc = (acc * x + c) % q
        if acc == 0:
            roots.append(x)
    return roots


def _split_space(basis, pivots, M, q):
    """Split an invariant subspace (RREF row basis) by eigenvalues of M."""
    d = len(basis)
    images = []
    for w in basis:
        img = [sum(Mj[k] * w[k] for k in range(len(w))) % q for Mj in M]
        images.append(img)
    # coordinates of each image in the basis (read off at pivot columns)
    C = []
    for img in images:
        coords = [img[p] for p in pivots]
        recon = [0] * len(basis[0])
        for c, row in zip(coords, basis):
            if c:
                for t, x in enumerate(row):
                    recon[t] = (recon[t] + c * x) % q
        if recon != [x % q for x in img]:
            raise InternalCheckError("class matrix does not preserve the subspace")
        C.append(coords)
    CT = [[C[t][s] for t in range(d)] for s in range(d)]
    spaces = []
    total = 0
    for lam in _poly_roots_mod(_hessenberg_charpoly(CT, q), q):
        A = [row[:] for row in CT]
        for i in range(d):
            A[i][i] = (A[i][i] - lam) % q
        # kernel of A = coordinate vectors of the lambda-eigenspace
        R, piv = _rref(A, q)
        vecs = []
        for fc in (c for c in range(d) if c not in piv):
            coord = [0] * d
            coord[fc] = 1
            for ri, pc in enumerate(piv):
                coord[pc] = (-R[ri][fc]) % q
            vec = [0] * len(basis[0])
            for c, row in zip(coord, basis):
                if c:
                    for t, x in enumerate(row):
                        vec[t] = (vec[t] + c * x) % q
            vecs.append(vec)
        total += len(vecs)
        if vecs:
            spaces.append(_rref(vecs, q))
    if total != d:
        raise InternalCheckError("eigenspace dimensions do not add up")
    return spaces


def _dixon_table(G: FiniteGroup) -> list[Character]:
    n = G.order
    r = len(G.classes)
    e = G.exponent()
    q = _dixon_prime(e, n)
    reps = [c[0] for c in G.classes]
    sizes = [len(c) for c in G.classes]
    inv_class = [G.class_of[G.inv(g)] for g in reps]

    spaces = [_rref([[1 if i == j else 0 for j in range(r)] for i in range(r)], q)]
    for i in range(1, r):
        if all(len(b) == 1 for b, _ in spaces):
            break
        M = _class_matrix(G, i, reps)
        nxt = []
        for basis, piv in spaces:
            if len(basis) == 1:
                nxt.append((basis, piv))
            else:
                nxt.extend(_split_space(basis, piv, M, q))
        spaces = nxt
    if not all(len(b) == 1 for b, _ in spaces) or len(spaces) != r:
        raise InternalCheckError("class matrices failed to split the center")

    zeta = pow(primitive_root(q), (q - 1) // e, q)
    inv_e = pow(e % q, q - 2, q)
    power_class = [[G.class_of[G.power(g, k)] for k in range(e)] for g in reps]

    table = []
    for basis, _ in spaces:
        v = basis[0]
        if v[0] == 0:
            raise InternalCheckError("eigenvector vanishes at the identity class")
        scale = pow(v[0], q - 2, q)
        v = [x * scale % q for x in v]
        csum = sum(v[j] * v[inv_class[j]] * pow(sizes[j], q - 2, q) for j in range(r)) % q
        target = n * pow(csum, q - 2, q) % q
        degree = next((d for d in range(1, isqrt(n) + 1) if d * d % q == target), None)
        if degree is None:
            raise InternalCheckError("no admissible degree for eigenvector")
        chi_q = [degree * v[j] * pow(sizes[j], q - 2, q) % q for j in range(r)]
        values = []
        for j in range(r):
            mults: dict[int, int] = {}
            for t in range(e):
                s = 0
                for k in range(e):
                    s += chi_q[power_class[j][k]] * pow(zeta, (-t * k) % e, q)
                m = s % q * inv_e % q
                if m > degree:
                    raise InternalCheckError("eigenvalue multiplicity out of range")
                if m:
                    mults[t] = m
            if sum(mults.values()) != degree:
                raise InternalCheckError("eigenvalue multiplicities do not sum to the degree")
            values.append(CycNumber.from_exponents(e, mults))
        table.append(Character(group=G, values=tuple(values), degree=degree))
    return table


# -- operations on characters ---------------------------------------------------


def parity(chi: Character, tau: int) -> Parity:
    """Odd iff chi(tau) = -chi(1), even iff chi(tau) = chi(1); tau must be a
    central involution (Schur: exactly one case holds for irreducible chi)."""
    G = chi.group
    G.require_central_involution(tau)
    v = chi.value_at(tau)
    if v == chi.degree:
        return Parity.EVEN
    if v == -chi.degree:
        return Parity.ODD
    raise InternalCheckError(f"chi(tau) = {v!r} is neither +-chi(1); chi not irreducible?")


def odd_characters(table: list[Character], tau: int) -> list[Character]:
    return [ch for ch in table if parity(ch, tau) is Parity.ODD]


def fixed_dim(chi: Character, subgroup) -> int:
    """dim of the subspace of V_chi fixed by H: (1/|H|) sum_{h in H} chi(h)."""
    G = chi.group
    H = G.require_subgroup(subgroup)
    total = CycNumber.from_rational(0)
    for h in H:
        total = total + chi.value_at(h)
    try:
        d = (total / len(H)).as_fraction()
    except ValueError:
        raise NonIntegralDimension(f"character sum over H is irrational: {total!r}")
    if d.denominator != 1 or d < 0:
        raise NonIntegralDimension(f"fixed-space dimension {d} is not a nonnegative integer")
    return int(d)


def induced_character(G: FiniteGroup, embedding, chi_h: ClassFunction) -> ClassFunction:
    """Induction to G of a class function on the subgroup H given by
    ``embedding`` (H-element index -> G-element, as from subgroup_embedding)."""
    h_order = len(embedding)
    position = {g: i for i, g in enumerate(embedding)}
    values = []
    for cls in G.classes:
        rep = cls[0]
        total = CycNumber.from_rational(0)
        for x in range(G.order):
            y = G.op(G.op(G.inv(x), rep), x)
            if y in position:
                total = total + chi_h.value_at(position[y])
        values.append(total / h_order)
    return ClassFunction(group=G, values=tuple(values))


@dataclass(frozen=True)
class Idempotent:
    """Central idempotent e_chi = chi(1)/|G| sum_sigma chi(sigma) sigma^(-1),
    stored as one coefficient per group element."""

    group: FiniteGroup
    coeffs: tuple[CycNumber, ...]

    def algebra_mul(self, other: "Idempotent") -> "Idempotent":
        G = self.group
        out = [CycNumber.from_rational(0) for _ in range(G.order)]
        for s, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for t, b in enumerate(other.coeffs):
                if not b.is_zero:
                    rho = G.op(s, t)
                    out[rho] = out[rho] + a * b
        return Idempotent(group=G, coeffs=tuple(out))

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coeffs)


def idempotent(chi: Character) -> Idempotent:
    G = chi.group
    w = Fraction(chi.degree, G.order)
    coeffs = tuple(w * chi.value_at(G.inv(s)) for s in range(G.order))
    return Idempotent(group=G, coeffs=coeffs)

"""Finite groups as explicit multiplication tables.

Elements are the indices 0..|G|-1 with the identity at index 0 for the
built-in families; ``table[a][b]`` is the product a*b.  Builders:

* ``abelian_group([d1, ..., dk])`` -- product of cyclic groups; element
  index is mixed-radix over the invariants, first coordinate fastest.
* ``dihedral_group(n)`` -- order 2n; indices 0..n-1 are the rotations a^i,
  indices n..2n-1 are the reflections b*a^(i-n).
* ``quaternion_group()`` -- Q8 with element order 1, -1, i, -i, j, -j, k, -k.
* ``group_from_table(rows)`` -- arbitrary table, fully validated
  (associativity included; |G| <= 64 keeps the cubic check cheap).

Conjugacy classes are computed eagerly and ordered by smallest member, so
the identity class is always class 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm

from .errors import InvalidTable, NotASubgroup, TauNotCentralInvolution


@dataclass(frozen=True)
class FiniteGroup:
    order: int
    table: tuple[tuple[int, ...], ...]
    identity: int
    inverse: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]
    class_of: tuple[int, ...]
    spec: tuple  # ("abelian", invariants) | ("dihedral", n) | ("quaternion8",) | ("table",)
    _orders: tuple[int, ...] = field(repr=False, default=())

    # -- basic operations --

    def op(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse[a], -k
        result = self.identity
        while k:
            if k & 1:
                result = self.table[result][a]
            a = self.table[a][a]
            k >>= 1
        return result

    def order_of(self, a: int) -> int:
        return self._orders[a]

    def exponent(self) -> int:
        return lcm(*self._orders) if self.order else 1

    def conjugate(self, g: int, x: int) -> int:
        """x g x^-1."""
        return self.table[self.table[x][g]][self.inverse[x]]

    def commutator(self, a: int, b: int) -> int:
        """a b a^-1 b^-1."""
        return self.table[self.table[self.table[a][b]][self.inverse[a]]][self.inverse[b]]

    @property
    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def center(self) -> frozenset[int]:
        t = self.table
        return frozenset(
            g for g in range(self.order) if all(t[g][x] == t[x][g] for x in range(self.order))
        )

    def is_central_involution(self, t: int) -> bool:
        if not 0 <= t < self.order:
            return False
        if t == self.identity or self.table[t][t] != self.identity:
            return False
        return all(self.table[t][x] == self.table[x][t] for x in range(self.order))

    def require_central_involution(self, t: int) -> int:
        if not self.is_central_involution(t):
            raise TauNotCentralInvolution(f"element {t} is not a central involution")
        return t

    def central_involutions(self) -> list[int]:
        return [t for t in range(self.order) if self.is_central_involution(t)]

    # -- subgroups --

    def is_subgroup(self, elements) -> bool:
        s = set(elements)
        if not s or self.identity not in s or not s <= set(range(self.order)):
            return False
        return all(self.table[a][self.inverse[b]] in s for a in s for b in s)

    def require_subgroup(self, elements) -> frozenset[int]:
        s = frozenset(elements)
        if not self.is_subgroup(s):
            raise NotASubgroup(f"{sorted(elements)} is not a subgroup")
        return s

    def subgroup_generated_by(self, gens) -> frozenset[int]:
        s = {self.identity}
        frontier = list(s)
        gens = [g for g in gens]
        while frontier:
            x = frontier.pop()
            for g in gens:
                for y in (self.table[x][g], self.table[x][self.inverse[g]]):
                    if y not in s:
                        s.add(y)
                        frontier.append(y)
        return frozenset(s)

    def all_subgroups(self) -> list[frozenset[int]]:
        """Every subgroup, found by closing known subgroups under extra
        generators; intended for the small (|G| <= 64) groups in scope."""
        found = {frozenset([self.identity])}
        frontier = [frozenset([self.identity])]
        while frontier:
            h = frontier.pop()
            for g in range(self.order):
                if g in h:
                    continue
                bigger = self.subgroup_generated_by(list(h) + [g])
                if bigger not in found:
                    found.add(bigger)
                    frontier.append(bigger)
        return sorted(found, key=lambda s: (len(s), sorted(s)))

    def normal_core(self, elements) -> frozenset[int]:
        """Intersection of all conjugates of the subgroup."""
        h = self.require_subgroup(elements)
        core = set(h)
        for x in range(self.order):
            core &= {self.conjugate(g, x) for g in h}
        return frozenset(core)

    def quotient_is_abelian(self, normal) -> bool:
        n = frozenset(normal)
        return all(
            self.commutator(a, b) in n for a in range(self.order) for b in range(a)
        )

    def conjugacy_class_of_element(self, g: int) -> tuple[int, ...]:
        return self.classes[self.class_of[g]]


def _validate_and_build(table, spec) -> FiniteGroup:
    n = len(table)
    if n == 0:
        raise InvalidTable("empty table")
    rows = tuple(tuple(r) for r in table)
    for r in rows:
        if len(r) != n or not all(isinstance(x, int) and 0 <= x < n for x in r):
            raise InvalidTable("table is not a square array over 0..n-1")
    # identity
    identity = None
    for e in range(n):
        if all(rows[e][x] == x and rows[x][e] == x for x in range(n)):
            identity = e
            break
    if identity is None:
        raise InvalidTable("no identity element")
    # inverses (also forces each row/column to be a permutation)
    inverse = [None] * n
    for a in range(n):
        for b in range(n):
            if rows[a][b] == identity and rows[b][a] == identity:
                inverse[a] = b
                break
        if inverse[a] is None:
            raise InvalidTable(f"element {a} has no inverse")
    # associativity
    for a in range(n):
        ra = rows[a]
        for b in range(n):
            ab = ra[b]
            rab = rows[ab]
            rb = rows[b]
            for c in range(n):
                if rab[c] != ra[rb[c]]:
                    raise InvalidTable(f"associativity fails at ({a},{b},{c})")
    # conjugacy classes
    seen = [False] * n
    classes = []
    for g in range(n):
        if seen[g]:
            continue
        orbit = sorted({rows[rows[x][g]][inverse[x]] for x in range(n)})
        for h in orbit:
            seen[h] = True
        classes.append(tuple(orbit))
    classes.sort(key=lambda c: c[0])
    class_of = [0] * n
    for i, c in enumerate(classes):
        for g in c:
            class_of[g] = i
    # element orders
    orders = []
    for g in range(n):
        k, x = 1, g
        while x != identity:
            x = rows[x][g]
            k += 1
        orders.append(k)
    return FiniteGroup(
        order=n,
        table=rows,
        identity=identity,
        inverse=tuple(inverse),
        classes=tuple(classes),
        class_of=tuple(class_of),
        spec=spec,
        _orders=tuple(orders),
    )


def abelian_group(invariants) -> FiniteGroup:
    invs = [int(d) for d in invariants]
    if any(d < 1 for d in invs):
        raise InvalidTable("cyclic orders must be >= 1")
    invs = [d for d in invs if d > 1] or [1]
    n = 1
    for d in invs:
        n *= d

    def decode(i):
        out = []
        for d in invs:
            out.append(i % d)
            i //= d
        return out

    def encode(v):
        i, mult = 0, 1
        for x, d in zip(v, invs):
            i += (x % d) * mult
            mult *= d
        return i

    table = [
        [encode([x + y for x, y in zip(decode(a), decode(b))]) for b in range(n)]
        for a in range(n)
    ]
    return _validate_and_build(table, ("abelian", tuple(invs)))


def dihedral_group(n: int) -> FiniteGroup:
    """D_n of order 2n: rotations a^i at 0..n-1, reflections b a^(i-n) at n..2n-1."""
    if n < 2:
        raise InvalidTable("dihedral parameter must be >= 2")

    def mul(x, y):
        rx, sx = x % n, x >= n
        ry, sy = y % n, y >= n
        # (b^sx a^rx)(b^sy a^ry) = b^(sx+sy) a^((-1)^sy rx + ry)
        r = (ry + (rx if not sy else -rx)) % n
        return r + (n if sx != sy else 0)

    table = [[mul(a, b) for b in range(2 * n)] for a in range(2 * n)]
    return _validate_and_build(table, ("dihedral", n))


_Q8_MUL = None


def quaternion_group() -> FiniteGroup:
    """Q8 with elements 1, -1, i, -i, j, -j, k, -k at indices 0..7."""
    # encode +-e as (unit index 0..3, sign); units 1, i, j, k
    def enc(u, s):
        return 2 * u + (0 if s == 1 else 1)

    def dec(x):
        return x // 2, 1 - 2 * (x % 2)

    qtab = {  # (u, v) -> (unit, sign) for units i, j, k
        (0, 0): (0, 1),
        (0, 1): (1, 1), (1, 0): (1, 1),
        (0, 2): (2, 1), (2, 0): (2, 1),
        (0, 3): (3, 1), (3, 0): (3, 1),
        (1, 1): (0, -1), (2, 2): (0, -1), (3, 3): (0, -1),
        (1, 2): (3, 1), (2, 1): (3, -1),
        (2, 3): (1, 1), (3, 2): (1, -1),
        (3, 1): (2, 1), (1, 3): (2, -1),
    }

    def mul(x, y):
        ux, sx = dec(x)
        uy, sy = dec(y)
        u, s = qtab[(ux, uy)]
        return enc(u, s * sx * sy)

    table = [[mul(a, b) for b in range(8)] for a in range(8)]
    return _validate_and_build(table, ("quaternion8",))


def group_from_table(rows) -> FiniteGroup:
    return _validate_and_build(rows, ("table",))


def build_group(spec) -> FiniteGroup:
    """Dispatch on a group spec: ("abelian", [d1..dk]) | ("dihedral", n) |
    ("quaternion8",) | ("table", rows)."""
    kind = spec[0]
    if kind == "abelian":
        return abelian_group(spec[1])
    if kind == "dihedral":
        return dihedral_group(spec[1])
    if kind == "quaternion8":
        return quaternion_group()
    if kind == "table":
        return group_from_table(spec[1])
    raise InvalidTable(f"unknown group spec kind {kind!r}")


def subgroup_embedding(G: FiniteGroup, elements) -> tuple[FiniteGroup, tuple[int, ...]]:
    """Materialize a subgroup as a FiniteGroup plus the element embedding.

    Returns (H, emb) with emb[i] the G-element of H's element i; H's identity
    is index 0.
    """
    s = G.require_subgroup(elements)
    emb = sorted(s, key=lambda g: (g != G.identity, g))
    index_of = {g: i for i, g in enumerate(emb)}
    table = [[index_of[G.op(a, b)] for b in emb] for a in emb]
    return group_from_table(table), tuple(emb)

"""Number fields presented by monic integral polynomials.

A field carries its defining polynomial, degree, signature (r1, r2) from an
exact Sturm count, and the polynomial discriminant.  Prime splitting goes
through Dedekind's theorem: factor the defining polynomial mod p and read
off (e, f) pairs -- but only after certifying that p does not divide the
index [O_F : Z[theta]] (p^2 does not divide disc(f), or Dedekind's index
criterion passes).  Unsafe primes raise UnsafePrime; splitting data for
them must be ingested, never guessed.

Irreducibility over Q is *certified*, never assumed: a prime p coprime to
disc(f) with f irreducible mod p, or a cross-prime factorization-pattern
argument (no proper degree is a subset sum of every observed pattern).
When neither certificate exists the constructor refuses with
IrreducibilityUndecided rather than risk an unsound field.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import modpoly
from .errors import IrreducibilityUndecided, NotMonic, Reducible, UnsafePrime
from .intpoly import IntPoly, count_real_roots, poly_discriminant
from .modpoly import factor_mod_p
from .numutil import is_prime, require_prime

_CERT_PRIME_COUNT = 25


@dataclass(frozen=True)
class SplittingType:
    """Decomposition type of p in a number field: multiset of (e, f) pairs.

    ``certified`` is True when the data came out of a Dedekind-safe
    factorization, False for ingested data taken on trust.
    """

    p: int
    entries: tuple[tuple[int, int], ...]  # sorted (ramification e, residue degree f)
    certified: bool

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sorted(self.entries)))

    @property
    def degree_sum(self) -> int:
        return sum(e * f for e, f in self.entries)

    @property
    def is_totally_split(self) -> bool:
        return all(ef == (1, 1) for ef in self.entries)

    @property
    def is_unramified(self) -> bool:
        return all(e == 1 for e, _ in self.entries)

    @property
    def residue_degrees(self) -> tuple[int, ...]:
        return tuple(sorted(f for _, f in self.entries))


@dataclass(frozen=True)
class NumberField:
    defining_poly: IntPoly
    degree: int
    r1: int
    r2: int
    poly_disc: int
    irreducibility: str = "certified"  # or "asserted" (construction-provided)

    @property
    def signature(self) -> tuple[int, int]:
        return (self.r1, self.r2)

    @property
    def is_totally_real(self) -> bool:
        return self.r2 == 0

    @property
    def is_totally_imaginary(self) -> bool:
        return self.r1 == 0

    def __str__(self):
        return f"Q[X]/({self.defining_poly})"


def _subset_sums(degrees: list[int]) -> set[int]:
    sums = {0}
    for d in degrees:
        sums |= {s + d for s in sums}
    return sums


def _certify_irreducible(f: IntPoly, disc: int) -> None:
    """Raise Reducible/IrreducibilityUndecided unless f is provably irreducible."""
    n = f.degree
    if n == 1:
        return
    # monic => rational roots are integers dividing the constant term
    a0 = f.coeffs[0]
    if a0 == 0:
        raise Reducible(f"{f} has root 0")
    divs = [d for d in range(1, abs(a0) + 1) if a0 % d == 0]
    for d in divs:
        for r in (d, -d):
            if f(r) == 0:
                raise Reducible(f"{f} has root {r}")
    # collect factorization patterns at the first 25 primes coprime to disc(f)
    candidate_degrees: set[int] | None = None
    p, used = 2, 0
    while used < _CERT_PRIME_COUNT:
        if is_prime(p) and disc % p != 0:
            used += 1
            fac = factor_mod_p(f, p)
            if fac.is_irreducible:
                return
            pattern = [modpoly.deg(g) for g, _ in fac.factors]
            proper = {s for s in _subset_sums(pattern) if 0 < s < n}
            candidate_degrees = proper if candidate_degrees is None else candidate_degrees & proper
            if not candidate_degrees:
                return
        p += 1
    raise IrreducibilityUndecided(
        f"cannot certify irreducibility of {f} from factorization patterns; "
        f"surviving factor degrees {sorted(candidate_degrees or set())}"
    )


def make_field(f: IntPoly) -> NumberField:
    """Validated number field from a monic integral polynomial.

    Raises NotMonic, Reducible, or IrreducibilityUndecided.
    """
    if f.is_zero or not f.is_monic:
        raise NotMonic(f"{f} is not monic")
    if f.degree < 1:
        raise NotMonic("constant polynomial")
    disc = poly_discriminant(f)
    if disc == 0:
        raise Reducible(f"{f} has a repeated factor (disc = 0)")
    _certify_irreducible(f, disc)
    r1 = count_real_roots(f)  # irreducible => squarefree
    return NumberField(
        defining_poly=f,
        degree=f.degree,
        r1=r1,
        r2=(f.degree - r1) // 2,
        poly_disc=disc,
    )


def make_field_with_assertion(f: IntPoly, note: str) -> NumberField:
    """Field whose irreducibility is supplied by construction, not certified.

    Only for callers that build f with a proof in hand (e.g. multiquadratic
    composita, whose Galois group admits no mod-p certificate).  Signature
    and discriminant are still computed exactly; ``note`` should say why
    irreducibility holds.
    """
    if f.is_zero or not f.is_monic:
        raise NotMonic(f"{f} is not monic")
    disc = poly_discriminant(f)
    if disc == 0:
        raise Reducible(f"{f} has a repeated factor (disc = 0)")
    r1 = count_real_roots(f)
    return NumberField(
        defining_poly=f,
        degree=f.degree,
        r1=r1,
        r2=(f.degree - r1) // 2,
        poly_disc=disc,
        irreducibility=f"asserted: {note}",
    )


def cyclotomic_field(m: int) -> NumberField:
    """Q(zeta_m).  Irreducibility of the cyclotomic polynomial is classical,
    so no mod-p certificate is attempted (for most m none exists: the Galois
    group (Z/m)^* is rarely cyclic)."""
    from .cyclotomic import cyclotomic_poly

    f = cyclotomic_poly(m)
    r1 = f.degree if m <= 2 else 0
    return NumberField(
        defining_poly=f,
        degree=f.degree,
        r1=r1,
        r2=(f.degree - r1) // 2,
        poly_disc=poly_discriminant(f),
        irreducibility="certified: cyclotomic polynomial",
    )


def _dedekind_safe(F: NumberField, p: int) -> bool:
    """True iff p does not divide [O_F : Z[theta]] (Dedekind's criterion)."""
    if F.poly_disc % (p * p) != 0:
        return True
    f = F.defining_poly
    fac = factor_mod_p(f, p)
    g_bar = (1,)
    h_bar = (1,)
    for g, m in fac.factors:
        g_bar = modpoly.mul(g_bar, g, p)
        for _ in range(m - 1):
            h_bar = modpoly.mul(h_bar, g, p)
    # monic lifts with coefficients in [0, p)
    g_lift = IntPoly(g_bar)
    h_lift = IntPoly(h_bar)
    t = g_lift * h_lift - f
    assert all(c % p == 0 for c in t.coeffs)
    t_bar = modpoly.reduce_intpoly(IntPoly([c // p for c in t.coeffs]), p)
    d = modpoly.gcd_p(modpoly.gcd_p(t_bar, g_bar, p), h_bar, p)
    return modpoly.deg(d) == 0


def splitting_type(F: NumberField, p: int) -> SplittingType:
    """Splitting of p in F via Dedekind's theorem.

    Raises UnsafePrime when p divides the index, in which case splitting
    data must come from ingestion.
    """
    require_prime(p)
    if not _dedekind_safe(F, p):
        raise UnsafePrime(f"{p} divides the index [O_F : Z[theta]] for {F}")
    fac = factor_mod_p(F.defining_poly, p)
    entries = tuple((m, modpoly.deg(g)) for g, m in fac.factors)
    st = SplittingType(p=p, entries=entries, certified=True)
    assert st.degree_sum == F.degree
    return st


def is_totally_split(F: NumberField, p: int) -> bool:
    st = splitting_type(F, p)
    return st.is_totally_split and len(st.entries) == F.degree

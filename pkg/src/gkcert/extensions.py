"""Descriptors for Galois CM-extensions K/R and the ways to obtain them.

A descriptor carries exactly the data the vanishing-order and certificate
machinery consumes: the totally real base field R, the Galois group
G = Gal(K/R) with its central complex conjugation tau, the working prime p,
and one PrimeRecord per prime v of R above p (local degrees e(v/p), f(v/p)
and the decomposition subgroup G_w of a prime w | v of K, stored as an
explicit subgroup up to conjugacy).  K itself is never represented by a
polynomial; every formula in scope consumes only (G, tau, G_w, e, f).

Two construction routes:

* ``build_compositum_over_Q`` -- composita of real quadratic fields with a
  single CM piece (imaginary quadratic, cyclotomic, or a quaternion/dihedral
  octic given by radical data over a real biquadratic field).  All
  decomposition data is computed exactly (Kronecker symbols, p mod m,
  Legendre tests on the radical's conjugates).
* ``ingest_extension`` -- JSON documents for extensions built by external
  systems (e.g. ray-class constructions); every group-theoretic invariant is
  re-validated, and the records are marked ingested.
"""

from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass, field
from math import gcd

from .errors import (
    AmbiguousDecomposition,
    InvariantViolation,
    NotLinearlyDisjoint,
    RamifiedPrime,
    SchemaViolation,
)
from .groups import (
    FiniteGroup,
    abelian_group,
    build_group,
    dihedral_group,
    quaternion_group,
)
from .intpoly import IntPoly, from_vector
from .numberfield import NumberField, make_field, make_field_with_assertion
from .numutil import (
    factorint,
    is_fundamental_discriminant,
    is_prime,
    kronecker,
    prime_support,
    require_prime,
    sqrt_mod_p,
)

Q_FIELD = make_field(IntPoly([0, 1]))  # Q presented by the polynomial X


# -- prime records and descriptors ---------------------------------------------


@dataclass(frozen=True)
class PrimeRecord:
    """Local data at one prime v of R above p."""

    label: str
    e_base: int  # e(v/p)
    f_base: int  # f(v/p)
    decomposition: frozenset[int]  # G_w, a subgroup of G (fixed representative)
    provenance: str  # "computed" | "ingested"

    @property
    def base_is_qp(self) -> bool:
        return self.e_base == 1 and self.f_base == 1


class Disjointness(enum.Enum):
    GUARANTEED = "guaranteed"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class CompositumProvenance:
    """How a compositum descriptor was built; consumed by the Leopoldt rules."""

    cm_kind: str  # "imaginary-quadratic" | "cyclotomic" | "quaternion8" | "dihedral4"
    cm_label: str
    real_discs: tuple[int, ...]
    cm_group: FiniteGroup = field(compare=False)
    cm_tau: int = 0
    cm_assertion: str = ""


@dataclass(frozen=True)
class ExtensionDescriptor:
    base: NumberField  # totally real R
    group: FiniteGroup  # G = Gal(K/R)
    tau: int  # central involution (complex conjugation)
    p: int
    primes: tuple[PrimeRecord, ...]
    assertions: tuple[str, ...] = ()
    label: str = ""
    construction: CompositumProvenance | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise InvariantViolation("p not prime", str(self.p))
        if not self.base.is_totally_real:
            raise InvariantViolation("base not totally real", str(self.base))
        if not self.group.is_central_involution(self.tau):
            raise InvariantViolation("tau not central")
        total = sum(rec.e_base * rec.f_base for rec in self.primes)
        if total != self.base.degree:
            raise InvariantViolation(
                "base degree", f"sum e(v/p)f(v/p) = {total} != [R:Q] = {self.base.degree}"
            )
        for rec in self.primes:
            if rec.e_base < 1 or rec.f_base < 1:
                raise InvariantViolation("local degrees", rec.label)
            if not self.group.is_subgroup(rec.decomposition):
                raise InvariantViolation("decomposition subgroup", rec.label)

    def tau_in(self, rec: PrimeRecord) -> bool:
        return self.tau in rec.decomposition

    def totally_split(self, rec: PrimeRecord) -> bool:
        return len(rec.decomposition) == 1

    def split_in_k_over_kplus(self, rec: PrimeRecord) -> bool:
        """Primes of K+ above v split in K iff tau is not in G_w (tau central)."""
        return self.tau not in rec.decomposition

    def digest(self) -> str:
        return hashlib.sha256(
            json.dumps(to_document(self), sort_keys=True, separators=(",", ":")).encode()
        ).hexdigest()[:16]


@dataclass(frozen=True)
class PrimeSummary:
    """Counting data for the rank/certificate rules."""

    t: int  # primes of R above p
    s: int  # |G|/2
    r: int  # primes of K+ above p that split in K
    split_qp_labels: tuple[str, ...]  # totally split records with R_v = Q_p
    tau_inert_labels: tuple[str, ...]  # records with tau in G_w


def classify_primes(ext: ExtensionDescriptor) -> PrimeSummary:
    n = ext.group.order
    r = 0
    split_qp = []
    tau_inert = []
    for rec in ext.primes:
        if ext.tau_in(rec):
            tau_inert.append(rec.label)
        else:
            # each of the [G:G_w]/2 primes of K+ below a split pair splits in K
            r += n // len(rec.decomposition) // 2
        if ext.totally_split(rec) and rec.base_is_qp:
            split_qp.append(rec.label)
    return PrimeSummary(
        t=len(ext.primes),
        s=n // 2,
        r=r,
        split_qp_labels=tuple(split_qp),
        tau_inert_labels=tuple(tau_inert),
    )


def check_tower_disjointness(ext: ExtensionDescriptor) -> Disjointness:
    """K and the cyclotomic Z_p-tower of R are linearly disjoint when
    p does not divide |G|; anything else needs a caller assertion."""
    return Disjointness.GUARANTEED if ext.group.order % ext.p != 0 else Disjointness.UNKNOWN


# -- compositum components -------------------------------------------------------


@dataclass(frozen=True)
class QuadraticComponent:
    """Quadratic field given by its fundamental discriminant."""

    disc: int

    def __post_init__(self):
        if not is_fundamental_discriminant(self.disc):
            raise SchemaViolation(f"{self.disc} is not a fundamental discriminant")

    @property
    def is_real(self) -> bool:
        return self.disc > 0

    @property
    def label(self) -> str:
        return f"quadratic({self.disc})"

    @property
    def support(self) -> frozenset[int]:
        return prime_support(self.disc)


@dataclass(frozen=True)
class CyclotomicComponent:
    """Q(zeta_m); CM for m >= 3.  m = 2 mod 4 is rejected (duplicate field)."""

    m: int

    def __post_init__(self):
        if self.m < 3 or self.m % 4 == 2:
            raise SchemaViolation(f"conductor {self.m} not admissible (need m >= 3, m != 2 mod 4)")

    @property
    def label(self) -> str:
        return f"cyclotomic({self.m})"

    @property
    def support(self) -> frozenset[int]:
        return prime_support(self.m)


@dataclass(frozen=True)
class RadicalCMPiece:
    """Galois CM octic M = Q(sqrt d1, sqrt d2, sqrt gamma), gamma totally
    negative in L = Q(sqrt d1, sqrt d2), with Gal(M/Q) one of Q8 / D4 and
    complex conjugation the central involution (Gal(M/L), L = M+).

    gamma = c0 + c1 sqrt(d1) + c2 sqrt(d2) + c3 sqrt(d1 d2).  The Galois-group
    identification is construction knowledge (recorded in ``assertion``); the
    splitting tests below are exact.
    """

    kind: str  # "quaternion8" | "dihedral4"
    d1: int
    d2: int
    gamma: tuple[int, int, int, int]
    ramified: frozenset[int]
    label: str
    assertion: str

    def group(self) -> FiniteGroup:
        return quaternion_group() if self.kind == "quaternion8" else dihedral_group(4)

    def tau(self) -> int:
        # Q8: -1 at index 1; D4: a^2 at index 2
        return 1 if self.kind == "quaternion8" else 2

    @property
    def support(self) -> frozenset[int]:
        return self.ramified

    def frobenius(self, p: int) -> int:
        """Frobenius at an unramified odd p as a group element; only the
        central cases are decidable from splitting data, so p must split in
        the real biquadratic base L (else AmbiguousDecomposition).
        """
        if p in self.ramified:
            raise RamifiedPrime(f"{p} ramifies in {self.label}")
        if p == 2:
            raise AmbiguousDecomposition("p = 2 not supported for radical pieces")
        if kronecker(self.d1, p) != 1 or kronecker(self.d2, p) != 1:
            raise AmbiguousDecomposition(
                f"{p} does not split in Q(sqrt {self.d1}, sqrt {self.d2}); "
                "Frobenius is not determined by splitting data"
            )
        s = sqrt_mod_p(self.d1 % p, p)
        t = sqrt_mod_p(self.d2 % p, p)
        c0, c1, c2, c3 = self.gamma
        symbols = set()
        for es in (1, -1):
            for et in (1, -1):
                val = (c0 + c1 * es * s + c2 * et * t + c3 * es * et * s * t) % p
                if val == 0:
                    raise RamifiedPrime(f"{p} divides a conjugate of gamma in {self.label}")
                symbols.add(pow(val, (p - 1) // 2, p))
        if symbols == {1}:
            return self.group().identity
        if symbols == {p - 1}:
            return self.tau()
        raise AmbiguousDecomposition(
            f"inconsistent residue symbols for {self.label} at {p}; "
            "piece data does not describe a Galois octic with central conjugation"
        )


# Witt's classical Q8 octic over Q(sqrt2, sqrt3), twisted totally negative:
# M = Q(sqrt2, sqrt3, sqrt(-(2+sqrt2)(3+sqrt3))).
Q8_PIECE = RadicalCMPiece(
    kind="quaternion8",
    d1=2,
    d2=3,
    gamma=(-6, -3, -2, -1),
    ramified=frozenset({2, 3}),
    label="q8-witt-cm",
    assertion=(
        "Gal(M/Q) = Q8 with central complex conjugation for "
        "M = Q(sqrt2, sqrt3, sqrt(-(2+sqrt2)(3+sqrt3))) (Witt construction)"
    ),
)

# D4 CM octic: Galois closure of Q(sqrt(-3-sqrt2)), i.e. L(sqrt gamma) for
# L = Q(sqrt2, sqrt7), gamma = -3-sqrt2 (norm 7 over Q(sqrt2)).
D4_PIECE = RadicalCMPiece(
    kind="dihedral4",
    d1=2,
    d2=7,
    gamma=(-3, -1, 0, 0),
    ramified=frozenset({2, 7}),
    label="d4-radical-cm",
    assertion=(
        "Gal(M/Q) = D4 with central complex conjugation for "
        "M = Q(sqrt2, sqrt7, sqrt(-3-sqrt2)) (closure of the non-normal quartic "
        "X^4 + 6X^2 + 7)"
    ),
)

BUILTIN_PIECES = {"q8": Q8_PIECE, "d4": D4_PIECE}


# -- unit groups (Z/m)^* for cyclotomic pieces ------------------------------------


def _local_unit_gens(q: int, p: int, k: int) -> list[tuple[int, int]]:
    """Generators (g, order) of (Z/q)^* for q = p^k."""
    if p == 2:
        if k == 1:
            return []
        if k == 2:
            return [(3, 2)]
        return [(q - 1, 2), (5, 2 ** (k - 2))]
    phi = (p - 1) * p ** (k - 1)
    g = 2
    while True:
        ok = all(pow(g, phi // r, q) != 1 for r in factorint(phi))
        if ok:
            return [(g, phi)]
        g += 1


@dataclass(frozen=True)
class UnitGroup:
    """(Z/m)^* as an explicit abelian group; gens[i] generates the i-th cyclic
    factor (CRT-lifted to a unit mod m)."""

    m: int
    invariants: tuple[int, ...]
    gens: tuple[int, ...]
    group: FiniteGroup = field(compare=False)


def unit_group(m: int) -> UnitGroup:
    gens: list[tuple[int, int]] = []
    factor_moduli = []
    for p, k in sorted(factorint(m).items()):
        q = p**k
        for g, d in _local_unit_gens(q, p, k):
            # CRT-lift: g mod q, 1 mod m/q
            rest = m // q
            lifted = _crt(g, q, 1, rest)
            gens.append((lifted, d))
            factor_moduli.append(q)
    if not gens:
        gens = [(1, 1)]
    invariants = tuple(d for _, d in gens)
    group = abelian_group(invariants)
    return UnitGroup(m=m, invariants=invariants, gens=tuple(g for g, _ in gens), group=group)


def _crt(a1: int, m1: int, a2: int, m2: int) -> int:
    if m2 == 1:
        return a1 % m1
    inv = pow(m1, -1, m2)
    return (a1 + m1 * ((a2 - a1) * inv % m2)) % (m1 * m2)


def unit_element(ug: UnitGroup, u: int) -> int:
    """Element index of the unit u mod m, by exhaustive digit search."""
    u %= ug.m
    if gcd(u, ug.m) != 1:
        raise ValueError(f"{u} is not a unit mod {ug.m}")
    digits = _unit_digits(ug, u)
    index, mult = 0, 1
    for x, d in zip(digits, ug.invariants):
        index += x * mult
        mult *= d
    return index


def _unit_digits(ug: UnitGroup, u: int) -> tuple[int, ...]:
    from itertools import product

    ranges = [range(d) for d in ug.invariants]
    for combo in product(*ranges):
        acc = 1
        for g, x in zip(ug.gens, combo):
            acc = acc * pow(g, x, ug.m) % ug.m
        if acc == u:
            return combo
    raise ValueError(f"no discrete log for {u} mod {ug.m}")


# -- compositum builder -----------------------------------------------------------


def _quadratic_poly(disc: int) -> IntPoly:
    d = disc if disc % 4 == 1 else disc // 4
    return IntPoly([-d, 0, 1])


def _twist_by_sqrt(P: IntPoly, d: int) -> IntPoly:
    """P(x - sqrt d) * P(x + sqrt d) expanded over Z (via y^2 = d)."""
    A, B = IntPoly([0]), IntPoly([0])  # value A + y*B with y = sqrt d
    xpoly = IntPoly([0, 1])
    for c in reversed(P.coeffs):
        # (A + yB)(x - y) = (A x - d B) + y (B x - A)
        A, B = A * xpoly - d * B, B * xpoly - A
        A = A + IntPoly([c])
    return A * A - d * (B * B)


def multiquadratic_field(discs: tuple[int, ...]) -> NumberField:
    """Totally real field Q(sqrt d1, ..., sqrt dk) for fundamental discs with
    pairwise coprime support (which forces degree 2^k)."""
    if not discs:
        return Q_FIELD
    if len(discs) == 1:
        return make_field(_quadratic_poly(discs[0]))
    P = IntPoly([0, 1])
    for disc in discs:
        d = disc if disc % 4 == 1 else disc // 4
        P = _twist_by_sqrt(P, d)
    return make_field_with_assertion(
        P, f"multiquadratic compositum of discriminants {list(discs)}"
    )


def build_compositum_over_Q(components, p: int, assertions=()) -> ExtensionDescriptor:
    """Descriptor for K/R with K the compositum of the components, R the
    compositum of the totally real ones, and exactly one CM piece among the
    components supplying tau.

    Raises RamifiedPrime if p ramifies in any component and
    NotLinearlyDisjoint on overlapping discriminant support not covered by a
    caller assertion ("disjoint:<label-a>:<label-b>").
    """
    require_prime(p)
    assertions = tuple(assertions)
    real_quads: list[QuadraticComponent] = []
    cm_pieces = []
    for comp in components:
        if isinstance(comp, QuadraticComponent):
            (real_quads if comp.is_real else cm_pieces).append(comp)
        elif isinstance(comp, (CyclotomicComponent, RadicalCMPiece)):
            cm_pieces.append(comp)
        else:
            raise SchemaViolation(f"unknown component {comp!r}")
    if len(cm_pieces) != 1:
        raise SchemaViolation(f"exactly one CM piece required, got {len(cm_pieces)}")
    cm = cm_pieces[0]

    # ramification of p in each component
    for quad in real_quads:
        if quad.disc % p == 0:
            raise RamifiedPrime(f"{p} ramifies in {quad.label}")
    if isinstance(cm, QuadraticComponent):
        if cm.disc % p == 0:
            raise RamifiedPrime(f"{p} ramifies in {cm.label}")
    elif isinstance(cm, CyclotomicComponent):
        if cm.m % p == 0:
            raise RamifiedPrime(f"{p} ramifies in {cm.label}")
    elif p in cm.ramified:
        raise RamifiedPrime(f"{p} ramifies in {cm.label}")

    # pairwise linear disjointness via coprime discriminant support
    labelled = [(q.label, q.support) for q in real_quads]
    cm_label = cm.label if not isinstance(cm, QuadraticComponent) else cm.label
    labelled.append((cm_label, cm.support))
    used_assertions = []
    for i in range(len(labelled)):
        for j in range(i):
            la, sa = labelled[i]
            lb, sb = labelled[j]
            if la == lb:
                raise NotLinearlyDisjoint(f"duplicate component {la}")
            if sa & sb:
                key1 = f"disjoint:{la}:{lb}"
                key2 = f"disjoint:{lb}:{la}"
                if key1 in assertions or key2 in assertions:
                    used_assertions.append(key1)
                else:
                    raise NotLinearlyDisjoint(
                        f"{la} and {lb} share discriminant support {sorted(sa & sb)}"
                    )

    real_discs = tuple(sorted(q.disc for q in real_quads))
    base = multiquadratic_field(real_discs)

    # CM piece group, tau, and Frobenius at p
    if isinstance(cm, QuadraticComponent):
        G = abelian_group([2])
        tau = 1
        frob = 0 if kronecker(cm.disc, p) == 1 else 1
        kind = "imaginary-quadratic"
        cm_assert = ""
    elif isinstance(cm, CyclotomicComponent):
        ug = unit_group(cm.m)
        G = ug.group
        tau = unit_element(ug, cm.m - 1)
        frob = unit_element(ug, p % cm.m)
        kind = "cyclotomic"
        cm_assert = ""
    else:
        G = cm.group()
        tau = cm.tau()
        frob = cm.frobenius(p)
        kind = cm.kind
        cm_assert = cm.assertion

    # Frobenius order in the real multiquadratic part
    ord_r = 1
    for quad in real_quads:
        if kronecker(quad.disc, p) != 1:
            ord_r = 2
            break
    g_w = G.subgroup_generated_by([G.power(frob, ord_r)])
    t = 2 ** len(real_quads) // ord_r

    records = tuple(
        PrimeRecord(
            label=f"v{i+1}",
            e_base=1,
            f_base=ord_r,
            decomposition=g_w,
            provenance="computed",
        )
        for i in range(t)
    )
    notes = list(used_assertions)
    if cm_assert:
        notes.append(f"asserted:{cm_assert}")
    if base.irreducibility.startswith("asserted"):
        notes.append(f"asserted:base polynomial irreducible ({base.irreducibility})")
    label = "K=" + "*".join([cm_label] + [q.label for q in real_quads]) + f"/R,p={p}"
    return ExtensionDescriptor(
        base=base,
        group=G,
        tau=tau,
        p=p,
        primes=records,
        assertions=tuple(notes),
        label=label,
        construction=CompositumProvenance(
            cm_kind=kind,
            cm_label=cm_label,
            real_discs=real_discs,
            cm_group=G,
            cm_tau=tau,
            cm_assertion=cm_assert,
        ),
    )


# -- ingestion ---------------------------------------------------------------------

SCHEMA_ID = "gkcert/extension-descriptor/v1"


def ingest_extension(document: dict) -> ExtensionDescriptor:
    """Validate and load an extension-descriptor document (see docs/formats.md).

    Raises SchemaViolation for shape errors and InvariantViolation (with the
    failed invariant named) for semantic ones.
    """
    if not isinstance(document, dict):
        raise SchemaViolation("document must be an object")
    for key in ("base_poly", "p", "group", "tau", "primes"):
        if key not in document:
            raise SchemaViolation(f"missing field {key!r}")
    if document.get("schema", SCHEMA_ID) != SCHEMA_ID:
        raise SchemaViolation(f"unknown schema {document.get('schema')!r}")
    base_vec = document["base_poly"]
    if not isinstance(base_vec, list) or not all(isinstance(c, int) for c in base_vec):
        raise SchemaViolation("base_poly must be a list of integers")
    gspec = document["group"]
    if not isinstance(gspec, dict) or "kind" not in gspec:
        raise SchemaViolation("group must be an object with a 'kind'")
    kind = gspec["kind"]
    try:
        if kind == "abelian":
            group = abelian_group(gspec["data"])
        elif kind == "dihedral":
            group = dihedral_group(int(gspec["data"]))
        elif kind == "quaternion8":
            group = quaternion_group()
        elif kind == "table":
            group = build_group(("table", gspec["data"]))
        else:
            raise SchemaViolation(f"unknown group kind {kind!r}")
    except KeyError as exc:
        raise SchemaViolation(f"group spec missing {exc}") from exc

    try:
        base = make_field(from_vector(base_vec))
    except Exception as exc:
        raise InvariantViolation("base field", str(exc)) from exc

    tau = document["tau"]
    if not isinstance(tau, int):
        raise SchemaViolation("tau must be an element index")

    primes_doc = document["primes"]
    if not isinstance(primes_doc, list) or not primes_doc:
        raise SchemaViolation("primes must be a nonempty list")
    records = []
    for i, entry in enumerate(primes_doc):
        if not isinstance(entry, dict):
            raise SchemaViolation(f"primes[{i}] must be an object")
        for key in ("e_base", "f_base", "decomposition_subgroup"):
            if key not in entry:
                raise SchemaViolation(f"primes[{i}] missing {key!r}")
        sub = frozenset(entry["decomposition_subgroup"])
        if any(k in entry for k in ("e", "f", "g")):
            # optional K-level cross-check data: all three or none
            if not all(k in entry for k in ("e", "f", "g")):
                raise SchemaViolation(f"primes[{i}]: e, f, g must be given together")
            e, f, g = entry["e"], entry["f"], entry["g"]
            if e * f * g != group.order:
                raise InvariantViolation(
                    "local-global degree", f"primes[{i}]: e*f*g = {e*f*g} != |G| = {group.order}"
                )
            if e * f != len(sub):
                raise InvariantViolation(
                    "local-global degree", f"primes[{i}]: e*f = {e*f} != |G_w| = {len(sub)}"
                )
        records.append(
            PrimeRecord(
                label=str(entry.get("label", f"v{i+1}")),
                e_base=int(entry["e_base"]),
                f_base=int(entry["f_base"]),
                decomposition=sub,
                provenance="ingested",
            )
        )
    try:
        return ExtensionDescriptor(
            base=base,
            group=group,
            tau=tau,
            p=int(document["p"]),
            primes=tuple(records),
            assertions=tuple(str(a) for a in document.get("assertions", [])),
            label=str(document.get("label", "")),
        )
    except InvariantViolation:
        raise


def to_document(ext: ExtensionDescriptor) -> dict:
    """Serialize back to the document schema (stable key content)."""
    kind = ext.group.spec[0]
    if kind == "abelian":
        gspec = {"kind": "abelian", "data": list(ext.group.spec[1])}
    elif kind == "dihedral":
        gspec = {"kind": "dihedral", "data": ext.group.spec[1]}
    elif kind == "quaternion8":
        gspec = {"kind": "quaternion8"}
    else:
        gspec = {"kind": "table", "data": [list(r) for r in ext.group.table]}
    return {
        "schema": SCHEMA_ID,
        "label": ext.label,
        "base_poly": list(ext.base.defining_poly.coeffs[:-1]),
        "p": ext.p,
        "group": gspec,
        "tau": ext.tau,
        "primes": [
            {
                "label": rec.label,
                "e_base": rec.e_base,
                "f_base": rec.f_base,
                "decomposition_subgroup": sorted(rec.decomposition),
            }
            for rec in ext.primes
        ],
        "assertions": list(ext.assertions),
    }

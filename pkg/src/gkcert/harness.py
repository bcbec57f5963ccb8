"""Batch orchestration: prime scans, the large-vanishing-order search, table
consistency checks, certificate evaluation, and report emission.

Pipelines are driven by a JSON RunConfig and are deterministic: identical
config (and seed) produces byte-identical CSV/JSON reports, and the
certificate store is content-addressed so reruns never duplicate entries.
Scanning results are merged in ascending prime order regardless of how the
per-prime work is scheduled.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
from dataclasses import dataclass, field

from .errors import (
    AmbiguousDecomposition,
    GkcertError,
    InvariantViolation,
    IrreducibilityUndecided,
    MalformedRow,
    NotLinearlyDisjoint,
    PoolExhausted,
    RamifiedPrime,
    Reducible,
    SchemaViolation,
    UnsafePrime,
)
from .certificates import CertificateStore
from .extensions import (
    BUILTIN_PIECES,
    QuadraticComponent,
    RadicalCMPiece,
    build_compositum_over_Q,
    ingest_extension,
)
from .intpoly import IntPoly, from_vector
from .numberfield import NumberField, make_field, splitting_type
from .numutil import is_prime, kronecker, primes_upto
from .rules import CertifyOutcome, certify
from .towers import load_tower

logger = logging.getLogger("gkcert.harness")

# The published large-vanishing-order example rows:
# (p, base polynomial vector, modulus label, [K:Q], lower bound for r_{S,chi}).
EXAMPLE_ROWS = (
    {"p": 2, "poly": [-12, -26, 0], "modulus": "p_79", "degree_k": 18, "r_bound": 3},
    {"p": 5, "poly": [-13, -20, -1], "modulus": "p_11", "degree_k": 30, "r_bound": 5},
    {"p": 11, "poly": [87, -39, -1], "modulus": "p_61", "degree_k": 60, "r_bound": 10},
    {"p": 7, "poly": [7, 5, -6, -2], "modulus": "p_37", "degree_k": 16, "r_bound": 2},
    {"p": 23, "poly": [4, 8, -9, -2], "modulus": "p_31", "degree_k": 24, "r_bound": 3},
)


# -- prime scanning ---------------------------------------------------------------


def scan_split_primes(fields, bound: int) -> list[int]:
    """Ascending odd primes p <= bound, unramified and totally split in every
    listed field.  A prime at which any field is Dedekind-unsafe is skipped
    with a logged diagnostic, never treated as split."""
    if bound < 3:
        raise ValueError("prime bound must be >= 3")
    out = []
    for p in primes_upto(bound):
        if p == 2:
            continue
        good = True
        for F in fields:
            try:
                st = splitting_type(F, p)
            except UnsafePrime:
                logger.warning(
                    "scan: skipping p = %d; Dedekind-unsafe for %s (splitting not certified)",
                    p,
                    F,
                )
                good = False
                break
            if not (st.is_totally_split and len(st.entries) == F.degree):
                good = False
                break
        if good:
            out.append(p)
    return out


# -- the Theorem-B style search ----------------------------------------------------


@dataclass(frozen=True)
class SearchHit:
    p: int
    discs: tuple[int, ...]
    descriptor: object
    outcome: CertifyOutcome

    @property
    def achieved_r(self) -> int:
        gvc = self.outcome.by_rule("gkc-gvc-equivalence")
        return max(c.payload_dict()["r_S"] for c in gvc) if gvc else 0


def _choose_pool_subset(pool, piece: RadicalCMPiece, target_r: int) -> tuple[int, ...]:
    """Smallest prefix-greedy set of pool discriminants, pairwise disjoint and
    disjoint from the CM piece, with 2^k >= target_r."""
    chosen: list[QuadraticComponent] = []
    needed = 0
    while (1 << needed) < target_r:
        needed += 1
    for d in sorted(pool):
        if len(chosen) == needed:
            break
        try:
            comp = QuadraticComponent(d)
        except SchemaViolation:
            logger.warning("search: %s is not a fundamental discriminant; skipped", d)
            continue
        if not comp.is_real:
            continue
        if comp.support & piece.support:
            logger.info(
                "search: skipping discriminant %d (shares support with %s)", d, piece.label
            )
            continue
        if any(comp.support & c.support for c in chosen):
            continue
        chosen.append(comp)
    if len(chosen) < needed:
        raise PoolExhausted(
            f"pool cannot reach [R:Q] >= {target_r} "
            f"(got {len(chosen)} usable discriminants, need {needed})"
        )
    return tuple(c.disc for c in chosen)


def search_theoremB(
    pool,
    target_r: int,
    prime_bound: int,
    cm_piece="q8",
    max_hits: int | None = None,
    assumptions=(),
) -> list[SearchHit]:
    """Search for certified examples with r_{S,chi} = 2|S_p(R)| >= 2*target_r.

    Builds R as a compositum of pool discriminants with [R:Q] >= target_r,
    scans odd primes totally split in the full compositum, and certifies each
    hit (Klingen bound -> compositum Leopoldt -> totally-split rule ->
    equivalence).  Hits come back in ascending prime order.
    """
    piece = BUILTIN_PIECES[cm_piece] if isinstance(cm_piece, str) else cm_piece
    discs = _choose_pool_subset(pool, piece, target_r)
    hits: list[SearchHit] = []
    for p in primes_upto(prime_bound):
        if p == 2 or p in piece.ramified:
            continue
        if any(d % p == 0 or kronecker(d, p) != 1 for d in discs):
            continue
        try:
            if piece.frobenius(p) != piece.group().identity:
                continue
        except (AmbiguousDecomposition, RamifiedPrime):
            continue
        components = [piece] + [QuadraticComponent(d) for d in discs]
        try:
            ext = build_compositum_over_Q(components, p, assertions=assumptions)
        except NotLinearlyDisjoint as exc:
            raise PoolExhausted(f"chosen pool subset is not usable: {exc}") from exc
        outcome = certify(ext, assumptions=assumptions)
        hit = SearchHit(p=p, discs=discs, descriptor=ext, outcome=outcome)
        if hit.achieved_r < 2 * target_r:
            logger.warning("search: p = %d certified only r_S = %d; skipped", p, hit.achieved_r)
            continue
        hits.append(hit)
        if max_hits is not None and len(hits) >= max_hits:
            break
    if not hits:
        raise PoolExhausted(f"no prime <= {prime_bound} qualifies")
    return hits


# -- published-table consistency checks ----------------------------------------------


@dataclass(frozen=True)
class RowVerdict:
    row: dict
    facts: tuple[tuple[str, str, str], ...]  # (fact, verified|failed|unverifiable, detail)

    @property
    def ok(self) -> bool:
        return all(status != "failed" for _, status, _ in self.facts)


def _parse_row(row) -> dict:
    if isinstance(row, (list, tuple)) and len(row) == 5:
        row = {
            "p": row[0],
            "poly": list(row[1]),
            "modulus": str(row[2]),
            "degree_k": row[3],
            "r_bound": row[4],
        }
    if not isinstance(row, dict):
        raise MalformedRow(f"row {row!r} is not a mapping or 5-tuple")
    for key in ("p", "poly", "modulus", "degree_k", "r_bound"):
        if key not in row:
            raise MalformedRow(f"row missing {key!r}")
    if not isinstance(row["poly"], list) or not all(isinstance(c, int) for c in row["poly"]):
        raise MalformedRow("polynomial vector must be a list of integers")
    if not is_prime(row["p"]):
        raise MalformedRow(f"{row['p']} is not prime")
    if row["degree_k"] % 2 != 0:
        raise MalformedRow(f"[K:Q] = {row['degree_k']} is odd; a CM field has even degree")
    if row["r_bound"] < 1:
        raise MalformedRow("r bound must be >= 1")
    return row


def check_example_table(rows) -> list[RowVerdict]:
    """Per-row structural verification of published example rows.

    Checks: the base polynomial is monic irreducible and totally real, the
    degree identity [K:Q] = 2 * [K+:R] * [R:Q] with [K+:R] the published r
    bound, and that the modulus prime has a degree-one prime in R.  Ray-class
    facts (the construction of K itself) are reported Unverifiable by design.
    """
    verdicts = []
    for raw in rows:
        row = _parse_row(raw)
        facts: list[tuple[str, str, str]] = []
        F: NumberField | None = None
        try:
            F = make_field(from_vector(row["poly"]))
            facts.append(("polynomial-monic-irreducible", "verified", f"degree {F.degree}"))
        except (Reducible, IrreducibilityUndecided, GkcertError) as exc:
            facts.append(("polynomial-monic-irreducible", "failed", str(exc)))
        if F is not None:
            if F.is_totally_real:
                facts.append(("base-totally-real", "verified", f"signature {F.signature}"))
            else:
                facts.append(("base-totally-real", "failed", f"signature {F.signature}"))
            want = 2 * row["r_bound"] * F.degree
            if want == row["degree_k"]:
                facts.append(
                    (
                        "degree-identity",
                        "verified",
                        f"2 * {row['r_bound']} * {F.degree} = {row['degree_k']}",
                    )
                )
            else:
                facts.append(
                    ("degree-identity", "failed", f"2*{row['r_bound']}*{F.degree} = {want} != {row['degree_k']}")
                )
            modulus = str(row["modulus"]).rsplit("_", 1)[-1]
            if modulus.isdigit() and is_prime(int(modulus)):
                q = int(modulus)
                try:
                    st = splitting_type(F, q)
                    if any(f == 1 for _, f in st.entries):
                        facts.append(
                            ("modulus-prime-degree-one", "verified", f"splitting {list(st.entries)}")
                        )
                    else:
                        # the rows claim no splitting for the modulus; a higher-degree
                        # prime ideal is still a valid ray-class modulus
                        facts.append(
                            (
                                "modulus-prime-degree-one",
                                "unverifiable",
                                f"no degree-one prime (splitting {list(st.entries)}); "
                                "the row claims no splitting for the modulus",
                            )
                        )
                except UnsafePrime as exc:
                    facts.append(("modulus-prime-degree-one", "unverifiable", str(exc)))
            else:
                facts.append(("modulus-prime-degree-one", "unverifiable", "modulus prime not given"))
        facts.append(
            (
                "ray-class-construction",
                "unverifiable",
                "K = R(m_inf * m_fin) requires external ray-class data; not in scope",
            )
        )
        facts.append(
            (
                "split-prime-hypotheses",
                "unverifiable",
                "splitting of p in K depends on the unpublished choice of prime ideal",
            )
        )
        verdicts.append(RowVerdict(row=row, facts=tuple(facts)))
    return verdicts


# -- run configuration ----------------------------------------------------------------


@dataclass
class RunConfig:
    pipelines: tuple[str, ...] = ()
    seed: int = 0
    prime_bound: int = 1000
    out_dir: str = "out"
    formats: tuple[str, ...] = ("csv", "json")
    store_path: str | None = None
    # scan
    polynomial_db: str | None = None
    field_vectors: tuple[tuple[int, ...], ...] = ()
    # certify
    descriptors: tuple[str, ...] = ()
    towers: tuple[str, ...] = ()
    assumptions: tuple[str, ...] = ()
    # search
    target_r: int = 2
    pool: tuple[int, ...] = (5, 13, 17, 21, 29)
    cm_piece: str = "q8"
    search_prime_bound: int | None = None
    max_hits: int | None = 1
    # check-table
    table_rows_path: str | None = None
    raw: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.prime_bound < 3:
            raise SchemaViolation("prime bound must be >= 3")
        for fmt in self.formats:
            if fmt not in ("csv", "json"):
                raise SchemaViolation(f"unknown report format {fmt!r}")

    def digest(self) -> str:
        blob = json.dumps(self.raw, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return config_from_dict(doc)


def config_from_dict(doc: dict) -> RunConfig:
    if not isinstance(doc, dict):
        raise SchemaViolation("config must be an object")
    search = doc.get("search_b", {})
    return RunConfig(
        pipelines=tuple(doc.get("pipelines", ())),
        seed=int(doc.get("seed", 0)),
        prime_bound=int(doc.get("prime_bound", 1000)),
        out_dir=str(doc.get("out_dir", "out")),
        formats=tuple(doc.get("formats", ("csv", "json"))),
        store_path=doc.get("store"),
        polynomial_db=doc.get("scan", {}).get("polynomial_db"),
        field_vectors=tuple(tuple(v) for v in doc.get("scan", {}).get("field_vectors", ())),
        descriptors=tuple(doc.get("certify", {}).get("descriptors", ())),
        towers=tuple(doc.get("certify", {}).get("towers", ())),
        assumptions=tuple(doc.get("certify", {}).get("assumptions", ())),
        target_r=int(search.get("target_r", 2)),
        pool=tuple(search.get("pool", (5, 13, 17, 21, 29))),
        cm_piece=str(search.get("cm_piece", "q8")),
        search_prime_bound=search.get("prime_bound"),
        max_hits=search.get("max_hits", 1),
        table_rows_path=doc.get("check_table", {}).get("rows"),
        raw=doc,
    )


def _load_polynomial_db(path) -> list[IntPoly]:
    """One monic polynomial per line, as the coefficient vector [a_0, ..., a_{n-1}]."""
    polys = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                vec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaViolation(f"{path}:{lineno}: not a JSON vector: {exc}") from exc
            if not isinstance(vec, list) or not all(isinstance(c, int) for c in vec):
                raise SchemaViolation(f"{path}:{lineno}: expected a list of integers")
            polys.append(from_vector(vec))
    return polys


# -- reports --------------------------------------------------------------------------


def _rows_to_csv(rows: list[dict]) -> str:
    columns: list[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _csv_cell(row.get(k, "")) for k in columns})
    return buf.getvalue()


def _csv_cell(value):
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    return value


@dataclass
class RunResult:
    rows: list[dict]
    certificates: list
    violations: list[str]
    outputs: list[str]
    diagnostics: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def run(config: RunConfig) -> RunResult:
    """Execute the configured pipelines; write reports and append certificates.

    The certificate store is append-only and content-addressed, so rerunning
    an identical config is a no-op for the store and reproduces the reports
    byte for byte.  InvariantViolations are collected, not raised; the CLI
    maps them to a nonzero exit code.
    """
    os.makedirs(config.out_dir, exist_ok=True)
    store = CertificateStore(config.store_path or os.path.join(config.out_dir, "certificates.jsonl"))
    rows: list[dict] = []
    certs = []
    violations: list[str] = []
    diagnostics: list[str] = []

    for pipeline in config.pipelines:
        if pipeline == "scan":
            fields = []
            if config.polynomial_db:
                fields.extend(_load_polynomial_db(config.polynomial_db))
            fields.extend(from_vector(v) for v in config.field_vectors)
            made = []
            for f in fields:
                try:
                    made.append(make_field(f))
                except GkcertError as exc:
                    diagnostics.append(f"scan: skipping {f}: {exc}")
            primes = scan_split_primes(made, config.prime_bound)
            for p in primes:
                rows.append(
                    {
                        "pipeline": "scan",
                        "prime": p,
                        "fields": [list(F.defining_poly.coeffs[:-1]) for F in made],
                        "totally_split": True,
                    }
                )
            if not primes:
                diagnostics.append("scan: no totally split prime within the bound")
        elif pipeline == "search-b":
            try:
                hits = search_theoremB(
                    pool=config.pool,
                    target_r=config.target_r,
                    prime_bound=config.search_prime_bound or config.prime_bound,
                    cm_piece=config.cm_piece,
                    max_hits=config.max_hits,
                    assumptions=config.assumptions,
                )
            except PoolExhausted as exc:
                violations.append(f"search-b: {exc}")
                hits = []
            for hit in hits:
                certs.extend(hit.outcome.certificates)
                rows.append(
                    {
                        "pipeline": "search-b",
                        "prime": hit.p,
                        "base_discriminants": list(hit.discs),
                        "descriptor": hit.descriptor.label,
                        "achieved_r_S": hit.achieved_r,
                        "rules": hit.outcome.rules_cited(),
                        "certificates": [c.digest() for c in hit.outcome.certificates],
                    }
                )
        elif pipeline == "certify":
            for path in config.descriptors:
                try:
                    with open(path, "r", encoding="utf-8") as fh:
                        ext = ingest_extension(json.load(fh))
                except (InvariantViolation, SchemaViolation) as exc:
                    violations.append(f"certify: {path}: {exc}")
                    continue
                towers = [load_tower(tp) for tp in config.towers]
                tower = next((t for t in towers if t.p == ext.p), None)
                if ext.p == 2:
                    violations.append(f"certify: {path}: p = 2 is never admitted")
                    continue
                outcome = certify(ext, assumptions=config.assumptions, tower=tower)
                certs.extend(outcome.certificates)
                diagnostics.extend(f"{ext.label or path}: {d}" for d in outcome.diagnostics)
                rows.append(
                    {
                        "pipeline": "certify",
                        "descriptor": ext.label or path,
                        "p": ext.p,
                        "group_order": ext.group.order,
                        "conclusions": [c.conclusion.value for c in outcome.certificates],
                        "rules": outcome.rules_cited(),
                        "conditional": [c.conditional for c in outcome.certificates],
                        "certificates": [c.digest() for c in outcome.certificates],
                    }
                )
        elif pipeline == "check-table":
            if config.table_rows_path:
                with open(config.table_rows_path, "r", encoding="utf-8") as fh:
                    raw_rows = json.load(fh)
            else:
                raw_rows = [dict(r) for r in EXAMPLE_ROWS]
            for verdict in check_example_table(raw_rows):
                rows.append(
                    {
                        "pipeline": "check-table",
                        "prime": verdict.row["p"],
                        "poly": verdict.row["poly"],
                        "modulus": verdict.row["modulus"],
                        "degree_k": verdict.row["degree_k"],
                        "r_bound": verdict.row["r_bound"],
                        "ok": verdict.ok,
                        "facts": [list(f) for f in verdict.facts],
                    }
                )
        elif pipeline == "report":
            for cert in store:
                rows.append(
                    {
                        "pipeline": "report",
                        "conclusion": cert.conclusion.value,
                        "subject": cert.subject,
                        "rule": cert.rule,
                        "conditional": cert.conditional,
                        "digest": cert.digest(),
                    }
                )
        else:
            violations.append(f"unknown pipeline {pipeline!r}")

    store.add_all(certs)

    outputs = []
    payload = {
        "config_digest": config.digest(),
        "seed": config.seed,
        "rows": rows,
    }
    if "json" in config.formats:
        path = os.path.join(config.out_dir, "report.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2)
            fh.write("\n")
        outputs.append(path)
    if "csv" in config.formats:
        path = os.path.join(config.out_dir, "report.csv")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(_rows_to_csv(rows))
        outputs.append(path)
    return RunResult(
        rows=rows,
        certificates=certs,
        violations=violations,
        outputs=outputs,
        diagnostics=diagnostics,
    )

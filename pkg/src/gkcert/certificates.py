"""Certificates: verified conclusions with an explicit hypothesis audit trail.

Every certificate names the rule that produced it (a fixed descriptive key),
lists each hypothesis as Verified (checked from descriptor data by this
package) or Asserted (supplied by the caller or by construction knowledge),
and carries a digest of its inputs.  A certificate with any Asserted
hypothesis is conditional.  The store is an append-only JSON-lines file
keyed by certificate digest, so re-running a pipeline never duplicates
entries and serialize -> parse -> serialize is the identity.
"""

from __future__ import annotations

import enum
import hashlib
import json
import os
from dataclasses import dataclass


class Status(enum.Enum):
    VERIFIED = "verified"
    ASSERTED = "asserted"


@dataclass(frozen=True)
class Hypothesis:
    statement: str
    status: Status
    detail: str = ""

    def to_json(self) -> dict:
        out = {"statement": self.statement, "status": self.status.value}
        if self.detail:
            out["detail"] = self.detail
        return out

    @staticmethod
    def from_json(obj: dict) -> "Hypothesis":
        return Hypothesis(
            statement=obj["statement"],
            status=Status(obj["status"]),
            detail=obj.get("detail", ""),
        )


def verified(statement: str, detail: str = "") -> Hypothesis:
    return Hypothesis(statement, Status.VERIFIED, detail)


def asserted(statement: str, detail: str = "") -> Hypothesis:
    return Hypothesis(statement, Status.ASSERTED, detail)


class Conclusion(enum.Enum):
    GKC_MINUS = "GKC-(K)"
    GKC_CHI = "GKC(K/R,chi)"
    GKC_CHI_EXISTS = "GKC(K/R,chi) for some odd chi"
    GVC_CHI = "GVC(K/R,chi)"
    RANK_BOUND = "rank bound"
    LEOPOLDT = "Leopoldt criterion"


@dataclass(frozen=True)
class Certificate:
    conclusion: Conclusion
    subject: str  # descriptor label (+ character id where relevant)
    rule: str  # rule-base citation key
    hypotheses: tuple[Hypothesis, ...]
    payload: tuple[tuple[str, object], ...]  # sorted key/value facts
    inputs_digest: str

    @property
    def conditional(self) -> bool:
        return any(h.status is Status.ASSERTED for h in self.hypotheses)

    def payload_dict(self) -> dict:
        return dict(self.payload)

    def to_json(self) -> dict:
        return {
            "conclusion": self.conclusion.value,
            "subject": self.subject,
            "rule": self.rule,
            "conditional": self.conditional,
            "hypotheses": [h.to_json() for h in self.hypotheses],
            "payload": {k: v for k, v in self.payload},
            "inputs_digest": self.inputs_digest,
            "digest": self.digest(),
        }

    @staticmethod
    def from_json(obj: dict) -> "Certificate":
        return Certificate(
            conclusion=Conclusion(obj["conclusion"]),
            subject=obj["subject"],
            rule=obj["rule"],
            hypotheses=tuple(Hypothesis.from_json(h) for h in obj["hypotheses"]),
            payload=tuple(sorted(obj["payload"].items())),
            inputs_digest=obj["inputs_digest"],
        )

    def digest(self) -> str:
        blob = json.dumps(
            {
                "conclusion": self.conclusion.value,
                "subject": self.subject,
                "rule": self.rule,
                "hypotheses": [h.to_json() for h in self.hypotheses],
                "payload": {k: v for k, v in self.payload},
                "inputs_digest": self.inputs_digest,
            },
            sort_keys=True,
            separators=(",", ":"),
        ).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def make_certificate(conclusion, subject, rule, hypotheses, payload, inputs_digest) -> Certificate:
    return Certificate(
        conclusion=conclusion,
        subject=subject,
        rule=rule,
        hypotheses=tuple(hypotheses),
        payload=tuple(sorted(payload.items())),
        inputs_digest=inputs_digest,
    )


class CertificateStore:
    """Append-only, content-addressed JSON-lines store."""

    def __init__(self, path):
        self.path = str(path)
        parent = os.path.dirname(self.path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        self._by_digest: dict[str, Certificate] = {}
        if os.path.exists(self.path):
            with open(self.path, "r", encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        cert = Certificate.from_json(json.loads(line))
                        self._by_digest[cert.digest()] = cert

    def __len__(self):
        return len(self._by_digest)

    def __iter__(self):
        # insertion order = file order, so serialize -> parse -> serialize
        # reproduces the file byte for byte
        return iter(self._by_digest.values())

    def __contains__(self, cert: Certificate):
        return cert.digest() in self._by_digest

    def add(self, cert: Certificate) -> bool:
        """Append if new; returns True when the store grew."""
        d = cert.digest()
        if d in self._by_digest:
            return False
        self._by_digest[d] = cert
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(cert.to_json(), sort_keys=True, separators=(",", ":")) + "\n")
        return True

    def add_all(self, certs) -> int:
        return sum(1 for c in certs if self.add(c))

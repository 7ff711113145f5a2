"""Structured check reports shared by the lemma checkers, towers, and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
HYPOTHESIS_FAILED = "hypothesis-failed"


@dataclass
class Assertion:
    name: str
    status: str
    witness: object = None

    def to_json(self):
        doc = {"name": self.name, "status": self.status}
        if self.witness is not None:
            doc["witness"] = self.witness
        return doc


@dataclass
class CheckReport:
    title: str
    assertions: list = field(default_factory=list)
    result: dict = field(default_factory=dict)

    def add(self, name, ok, witness=None):
        self.assertions.append(Assertion(name, PASS if ok else FAIL,
                                         None if ok else witness))

    def add_hypothesis_failure(self, name, witness=None):
        self.assertions.append(Assertion(name, HYPOTHESIS_FAILED, witness))

    @property
    def ok(self):
        return all(a.status == PASS for a in self.assertions)

    def to_json(self):
        return {
            "title": self.title,
            "result": self.result,
            "assertions": [a.to_json() for a in self.assertions],
        }

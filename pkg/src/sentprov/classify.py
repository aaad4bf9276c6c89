"""The curator decision-tree protocol for flagged sentences.

Four questions walk a sentence to one of five classifications:

* Q1 -- does the sentence occur in more than 100 entries over its
  lifetime? Then it is infeasible to analyse by hand: "too many results",
  and the walk stops. Q1 is answered from the corpus, never by the
  curator.
* Q2 -- does the historical context suggest the sentence was actually
  propagated between the entries? "no" means the match is coincidental
  and the secondary entry is independent: "accurate".
* Q3 -- is the update made to the origin entry relevant to the secondary
  entry? "no" again ends at "accurate".
* Q4 -- does that update affect the accuracy of the secondary entry?
  "yes" is "erroneous"; "no" (think grammar fixes) is "inconsistent".

Answering "insufficient evidence" at Q2-Q4 ends the walk at "possibly
erroneous". These judgments are subjective; records therefore carry the
analyst and are kept append-only so disagreement stays visible.
"""

from __future__ import annotations

from enum import Enum
from itertools import product
from typing import Mapping, Optional

CLUSTER_FEASIBILITY_LIMIT = 100


class Answer(str, Enum):
    YES = "yes"
    NO = "no"
    INSUFFICIENT = "insufficient evidence"

    @classmethod
    def parse(cls, value: str) -> "Answer":
        v = value.strip().lower()
        for a in cls:
            if v == a.value:
                return a
        if v in ("insufficient", "unknown"):
            return cls.INSUFFICIENT
        raise ValueError(f"not a protocol answer: {value!r}")


class Classification(str, Enum):
    ERRONEOUS = "erroneous"
    INCONSISTENT = "inconsistent"
    ACCURATE = "accurate"
    TOO_MANY_RESULTS = "too_many_results"
    POSSIBLY_ERRONEOUS = "possibly_erroneous"

    @classmethod
    def parse(cls, value: str) -> "Classification":
        v = value.strip().lower().replace(" ", "_")
        for c in cls:
            if v == c.value:
                return c
        raise ValueError(f"not a classification: {value!r}")


QUESTIONS = ("q1", "q2", "q3", "q4")


class PathError(ValueError):
    """The submitted decision path is not a root-to-leaf walk."""


def classify_full(q1: Answer, q2: Answer, q3: Answer, q4: Answer) -> Classification:
    """Map a complete answer assignment to its classification.

    Total: any combination lands on exactly one leaf, later answers being
    ignored once a leaf is reached.
    """
    if q1 is Answer.YES:
        return Classification.TOO_MANY_RESULTS
    if q2 is Answer.INSUFFICIENT:
        return Classification.POSSIBLY_ERRONEOUS
    if q2 is Answer.NO:
        return Classification.ACCURATE
    if q3 is Answer.INSUFFICIENT:
        return Classification.POSSIBLY_ERRONEOUS
    if q3 is Answer.NO:
        return Classification.ACCURATE
    if q4 is Answer.INSUFFICIENT:
        return Classification.POSSIBLY_ERRONEOUS
    if q4 is Answer.YES:
        return Classification.ERRONEOUS
    return Classification.INCONSISTENT


def evaluate_path(answers: Mapping[str, Answer]) -> tuple[Classification, dict]:
    """Walk the tree with exactly the answers a curator gave.

    Returns the leaf and the consumed path. Missing answers on the walk,
    or extra answers past the leaf, raise PathError: a stored path must be
    a faithful root-to-leaf record.
    """
    if "q1" not in answers:
        raise PathError("q1 answer missing")
    consumed: dict[str, str] = {}

    def take(q: str) -> Answer:
        if q not in answers:
            raise PathError(f"{q} answer missing")
        a = answers[q]
        consumed[q] = a.value
        return a

    q1 = take("q1")
    if q1 is Answer.INSUFFICIENT:
        raise PathError("q1 is answered from the corpus and is never inconclusive")
    if q1 is Answer.YES:
        leaf = Classification.TOO_MANY_RESULTS
    else:
        q2 = take("q2")
        if q2 is Answer.INSUFFICIENT:
            leaf = Classification.POSSIBLY_ERRONEOUS
        elif q2 is Answer.NO:
            leaf = Classification.ACCURATE
        else:
            q3 = take("q3")
            if q3 is Answer.INSUFFICIENT:
                leaf = Classification.POSSIBLY_ERRONEOUS
            elif q3 is Answer.NO:
                leaf = Classification.ACCURATE
            else:
                q4 = take("q4")
                if q4 is Answer.INSUFFICIENT:
                    leaf = Classification.POSSIBLY_ERRONEOUS
                elif q4 is Answer.YES:
                    leaf = Classification.ERRONEOUS
                else:
                    leaf = Classification.INCONSISTENT
    extras = set(answers) - set(consumed)
    if extras:
        raise PathError(f"answers past the leaf: {sorted(extras)}")
    return leaf, consumed


def decision_table() -> list[dict]:
    """Every complete answer combination and its classification.

    Q1 is yes/no (it is computed, not judged); Q2-Q4 admit "insufficient
    evidence". Used both by the totality test and as the fixture the
    browser wizard is checked against.
    """
    rows = []
    judged = (Answer.YES, Answer.NO, Answer.INSUFFICIENT)
    for q1, q2, q3, q4 in product((Answer.YES, Answer.NO), judged, judged, judged):
        rows.append({
            "q1": q1.value, "q2": q2.value, "q3": q3.value, "q4": q4.value,
            "classification": classify_full(q1, q2, q3, q4).value,
        })
    return rows


def answer_q1(lifetime_cluster_count: int) -> Answer:
    """Q1 is derived from the store: over 100 entries is infeasible."""
    return Answer.YES if lifetime_cluster_count > CLUSTER_FEASIBILITY_LIMIT else Answer.NO

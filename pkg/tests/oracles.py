"""Independent reference implementations the real code is tested against.

Deliberately written as plain scans with different mechanics from the
package implementations, so agreement between the two is evidence rather
than tautology.
"""

from __future__ import annotations

from collections import Counter


def segment_oracle(text: str, lexicon: frozenset[str]) -> list[str]:
    """Character-position boundary scanner for sentence segmentation."""
    boundaries = []
    lowered = text.lower()
    for i, ch in enumerate(text):
        if ch != ".":
            continue
        if i + 1 < len(text) and not text[i + 1].isspace():
            continue
        is_abbrev = False
        for entry in lexicon:
            if lowered.endswith(entry, 0, i + 1):
                before = i - len(entry)
                if before < 0 or not text[before].isalnum():
                    is_abbrev = True
                    break
        if not is_abbrev:
            boundaries.append(i)
    pieces = []
    start = 0
    for b in boundaries:
        pieces.append(text[start:b + 1])
        start = b + 1
    pieces.append(text[start:])
    return [p.strip() for p in pieces if p.strip()]


def connected_components(colistings: list[list[str]]) -> set[frozenset[str]]:
    """Partition accessions by breadth-first search over co-listing edges."""
    adjacency: dict[str, set[str]] = {}
    for group in colistings:
        for a in group:
            adjacency.setdefault(a, set()).update(x for x in group if x != a)
    seen: set[str] = set()
    components = set()
    for node in adjacency:
        if node in seen:
            continue
        frontier = [node]
        component = set()
        while frontier:
            current = frontier.pop()
            if current in component:
                continue
            component.add(current)
            frontier.extend(adjacency[current] - component)
        seen |= component
        components.add(frozenset(component))
    return components


def recount_release(raw_rows: list[tuple[int, int]]) -> dict:
    """Recount one release's stats from raw (sentence_id, entry_key) rows."""
    per_sentence = Counter(sid for sid, _ in raw_rows)
    total = len(raw_rows)
    unique = len(per_sentence)
    singleton = sum(1 for c in per_sentence.values() if c == 1)
    annotated = len({key for _, key in raw_rows})
    spectrum = Counter(per_sentence.values())
    return {
        "total": total,
        "unique": unique,
        "singleton": singleton,
        "annotated": annotated,
        "spectrum": dict(spectrum),
    }


def timeline_counts(rows: list[tuple[int, int]]) -> dict[int, int]:
    """Per-ordinal cluster counts by full scan of (cluster, ordinal) rows."""
    per_ordinal: dict[int, set[int]] = {}
    for cluster, ordinal in rows:
        per_ordinal.setdefault(ordinal, set()).add(cluster)
    return {o: len(cs) for o, cs in per_ordinal.items()}

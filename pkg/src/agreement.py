"""Collocations shared between two corpora, and those whose senses disagree.

A collocation is in contradiction when its majority sense differs between
the corpora. Majority ties break toward the lowest sense label, on both sides
alike, and are counted separately so they stay visible.
"""

from __future__ import annotations
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple
import logging

from corpus import Corpus, Example, extract_examples
from collocations import LOCAL_CONTENT, FeatureKind, kinds_label
from decision_list import count
from evaluation import ProtocolError

log = logging.getLogger(__name__)

AGREEMENT_HEADER = ("word", "#coll_a", "#coll_b", "%shared", "%contradiction")
CONTRADICTION_HEADER = ("feature", "sense", "count_a", "count_b")


class ProfileMismatchError(ProtocolError):
    pass


@dataclass(frozen=True)
class CollocationProfile:
    target_key: str
    kinds: FrozenSet[FeatureKind] = LOCAL_CONTENT
    entries: Mapping[str, Mapping[str, int]] = field(default_factory=dict)
    source: str = ""

    def __post_init__(self):
        for feature, senses in self.entries.items():
            if any(c < 0 for c in senses.values()):
                raise ValueError(f"negative count for {feature!r}")

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class AgreementStats:
    count_a: int
    count_b: int
    shared: int
    shared_pct: float
    contradictions: int
    contradiction_pct: float
    ties_a: int = 0
    ties_b: int = 0


@dataclass(frozen=True)
class Contradiction:
    feature: str
    sense_a: str
    counts_a: Mapping[str, int]
    sense_b: str
    counts_b: Mapping[str, int]


def collect_examples(examples: Sequence[Example], target_key: str,
                     kinds: FrozenSet[FeatureKind] = LOCAL_CONTENT, source: str = "") -> CollocationProfile:
    """Profile of `target_key` from already extracted examples (others ignored)."""
    own = [ex for ex in examples if ex.target_key == target_key]
    counts = count(own, frozenset(kinds))
    return CollocationProfile(target_key, frozenset(kinds), counts.by_string(), source)


def collect(corpus: Corpus, target_key: str, kinds: FrozenSet[FeatureKind] = LOCAL_CONTENT) -> CollocationProfile:
    return collect_examples(extract_examples(corpus, target_key), target_key, kinds, corpus.name)


def majority_sense(entry: Mapping[str, int]) -> Tuple[str, bool]:
    """(sense with the highest count, whether that maximum is shared)."""
    if not entry:
        raise ValueError("majority of an empty sense-count entry")
    top = max(entry.values())
    winners = sorted(s for s, c in entry.items() if c == top)
    return winners[0], len(winners) > 1


def compare(a: CollocationProfile, b: CollocationProfile) -> Tuple[AgreementStats, List[Contradiction]]:
    if a.target_key != b.target_key:
        raise ProfileMismatchError(f"profiles for different words: {a.target_key} vs {b.target_key}")
    if a.kinds != b.kinds:
        raise ProfileMismatchError(
            f"profiles over different kinds: {kinds_label(a.kinds)} vs {kinds_label(b.kinds)}")
    shared = sorted(set(a.entries) & set(b.entries))
    contradictions: List[Contradiction] = []
    ties_a = ties_b = 0
    for feature in shared:
        sense_a, tie_a = majority_sense(a.entries[feature])
        sense_b, tie_b = majority_sense(b.entries[feature])
        ties_a += tie_a
        ties_b += tie_b
        if sense_a != sense_b:
            contradictions.append(Contradiction(
                feature, sense_a, dict(a.entries[feature]), sense_b, dict(b.entries[feature])))
    mean = (len(a) + len(b)) / 2
    stats = AgreementStats(
        count_a=len(a),
        count_b=len(b),
        shared=len(shared),
        shared_pct=100.0 * len(shared) / mean if mean else 0.0,
        contradictions=len(contradictions),
        contradiction_pct=100.0 * len(contradictions) / len(shared) if shared else 0.0,
        ties_a=ties_a,
        ties_b=ties_b,
    )
    log.debug("profiles_compared word=%s shared=%d contradictions=%d ties_a=%d ties_b=%d",
              a.target_key, stats.shared, stats.contradictions, ties_a, ties_b)
    return stats, contradictions


def compare_corpora(a: Corpus, b: Corpus, target_keys: Optional[Iterable[str]] = None,
                    kinds: FrozenSet[FeatureKind] = LOCAL_CONTENT
                    ) -> List[Tuple[str, AgreementStats, List[Contradiction]]]:
    """compare() for every word of either corpus (or the given ones), sorted by word."""
    ex_a, ex_b = extract_examples(a), extract_examples(b)
    if target_keys is None:
        keys = sorted({ex.target_key for ex in ex_a} | {ex.target_key for ex in ex_b})
    else:
        keys = sorted(set(target_keys))
    results = []
    for key in keys:
        stats, contra = compare(collect_examples(ex_a, key, kinds, a.name),
                                collect_examples(ex_b, key, kinds, b.name))
        log.info("agreement_word_done word=%s coll_a=%d coll_b=%d shared=%d contradictions=%d",
                 key, stats.count_a, stats.count_b, stats.shared, stats.contradictions)
        results.append((key, stats, contra))
    return results


def format_agreement(rows: Iterable[Tuple[str, AgreementStats]]) -> str:
    lines = ["\t".join(AGREEMENT_HEADER)]
    for word, s in rows:
        lines.append(f"{word}\t{s.count_a}\t{s.count_b}\t{s.shared_pct:.1f}\t{s.contradiction_pct:.1f}")
    return "\n".join(lines) + "\n"


def format_contradictions(contradictions: Iterable[Contradiction]) -> str:
    """One row per sense of each contradicting collocation, senses ascending."""
    lines = ["\t".join(CONTRADICTION_HEADER)]
    for c in contradictions:
        for sense in sorted(set(c.counts_a) | set(c.counts_b)):
            lines.append(f"{c.feature}\t{sense}\t{c.counts_a.get(sense, 0)}\t{c.counts_b.get(sense, 0)}")
    return "\n".join(lines) + "\n"


__all__ = [
    "CollocationProfile", "AgreementStats", "Contradiction", "ProfileMismatchError",
    "AGREEMENT_HEADER", "CONTRADICTION_HEADER",
    "collect", "collect_examples", "majority_sense", "compare", "compare_corpora",
    "format_agreement", "format_contradictions",
]

"""N-way decision lists over collocation features.

Each observed (feature, sense) pair becomes a rule weighted by

    weight = ln( count(sense, feature) / sum of count(other sense, feature) )

with the denominator replaced by the smoothing constant when no competing
sense was seen. Weights can be negative. The list is sorted by descending
weight; the first rule whose feature is present in a test context decides.
"""

from __future__ import annotations
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union
import logging
import math

from corpus import Example
from collocations import (
    ALL_KINDS, Feature, FeatureKind, extract_features, kinds_label, parse_feature, parse_kinds,
    render_feature,
)

log = logging.getLogger(__name__)

DEFAULT_SMOOTHING = 0.1


class MixedTargetError(ValueError):
    pass


class SenseCounts:
    """feature -> sense -> count, counting each example once per feature.

    Zero counts are never stored.
    """

    def __init__(self, target_key: Optional[str] = None):
        self.target_key = target_key
        self._counts: Dict[Feature, Dict[str, int]] = {}

    def add(self, feature: Feature, sense: str, n: int = 1) -> None:
        if n <= 0:
            return
        senses = self._counts.setdefault(feature, {})
        senses[sense] = senses.get(sense, 0) + n

    def get(self, feature: Feature) -> Mapping[str, int]:
        return self._counts.get(feature, {})

    def total(self, feature: Feature) -> int:
        return sum(self._counts.get(feature, {}).values())

    def features(self) -> List[Feature]:
        return list(self._counts)

    def items(self) -> Iterator[Tuple[Feature, Mapping[str, int]]]:
        return iter(self._counts.items())

    def senses(self) -> List[str]:
        return sorted({s for senses in self._counts.values() for s in senses})

    def by_string(self) -> Dict[str, Dict[str, int]]:
        """Canonical feature string -> sense -> count (sorted keys)."""
        rendered = {render_feature(f): dict(sorted(s.items())) for f, s in self._counts.items()}
        return {k: rendered[k] for k in sorted(rendered)}

    def __contains__(self, feature: Feature) -> bool:
        return feature in self._counts

    def __len__(self) -> int:
        return len(self._counts)

    def __repr__(self) -> str:
        return f"SenseCounts(target_key={self.target_key!r}, features={len(self)})"


@dataclass(frozen=True)
class Rule:
    feature: Feature
    sense: str
    weight: float
    count: int   # examples of `sense` with the feature
    others: int  # examples of any other sense with the feature

    def sort_key(self) -> Tuple[float, int, str, str]:
        return (-self.weight, self.feature.kind.ordinal, render_feature(self.feature), self.sense)


@dataclass(frozen=True)
class DecisionList:
    target_key: str
    rules: Tuple[Rule, ...] = ()
    smoothing: float = DEFAULT_SMOOTHING
    kinds: FrozenSet[FeatureKind] = field(default=ALL_KINDS)

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)


@dataclass(frozen=True)
class Answer:
    sense: str
    rule: Rule

    @property
    def answered(self) -> bool:
        return True


@dataclass(frozen=True)
class Abstain:
    @property
    def answered(self) -> bool:
        return False

    @property
    def sense(self) -> None:
        return None


ABSTAIN = Abstain()
Decision = Union[Answer, Abstain]


def weight(count_i: int, others_sum: int, smoothing: float = DEFAULT_SMOOTHING) -> float:
    """Natural-log ratio of a sense's count to its competitors' summed count."""
    if smoothing <= 0:
        raise ValueError(f"smoothing must be positive, got {smoothing}")
    if count_i < 0 or others_sum < 0:
        raise ValueError("counts must be non-negative")
    if count_i == 0:
        return -math.inf
    return math.log(count_i / (others_sum if others_sum > 0 else smoothing))


def _single_key(target_keys: Iterable[str]) -> Optional[str]:
    keys = set(target_keys)
    if len(keys) > 1:
        raise MixedTargetError(f"examples mix target keys: {', '.join(sorted(keys))}")
    return next(iter(keys), None)


def count_feature_sets(target_key: Optional[str],
                       labelled: Iterable[Tuple[str, Iterable[Feature]]],
                       kinds: FrozenSet[FeatureKind] = ALL_KINDS) -> SenseCounts:
    """Counts from (sense, feature set) pairs already extracted for one target key."""
    counts = SenseCounts(target_key)
    for sense, features in labelled:
        for f in set(features):
            if f.kind in kinds:
                counts.add(f, sense)
    return counts


def count(examples: Sequence[Example], kinds: FrozenSet[FeatureKind] = ALL_KINDS) -> SenseCounts:
    key = _single_key(ex.target_key for ex in examples)
    return count_feature_sets(key, ((ex.sense, extract_features(ex)) for ex in examples), kinds)


def train_from_counts(target_key: str, counts: SenseCounts,
                      kinds: FrozenSet[FeatureKind] = ALL_KINDS,
                      smoothing: float = DEFAULT_SMOOTHING) -> DecisionList:
    if smoothing <= 0:
        raise ValueError(f"smoothing must be positive, got {smoothing}")
    rules: List[Rule] = []
    for feature, senses in counts.items():
        if feature.kind not in kinds:
            continue
        total = sum(senses.values())
        for sense, c in senses.items():
            others = total - c
            rules.append(Rule(feature, sense, weight(c, others, smoothing), c, others))
    rules.sort(key=Rule.sort_key)
    return DecisionList(target_key, tuple(rules), smoothing, frozenset(kinds))


def train(examples: Sequence[Example], kinds: FrozenSet[FeatureKind] = ALL_KINDS,
          smoothing: float = DEFAULT_SMOOTHING) -> DecisionList:
    if not examples:
        raise ValueError("cannot train a decision list from zero examples")
    counts = count(examples, kinds)
    dl = train_from_counts(counts.target_key, counts, kinds, smoothing)
    log.debug("decision_list_trained word=%s examples=%d rules=%d", dl.target_key, len(examples), len(dl))
    return dl


def predict(dl: DecisionList, features: Iterable[Feature]) -> Decision:
    present = features if isinstance(features, (set, frozenset)) else frozenset(features)
    if not present:
        return ABSTAIN
    for rule in dl.rules:
        if rule.feature in present:
            return Answer(rule.sense, rule)
    return ABSTAIN


def restrict(dl: DecisionList, kinds: Iterable[FeatureKind]) -> DecisionList:
    kinds = frozenset(kinds)
    rules = tuple(r for r in dl.rules if r.feature.kind in kinds)
    return DecisionList(dl.target_key, rules, dl.smoothing, dl.kinds & kinds)


# ---------------------------------------------------------------------------
# persistence and display


def dump_rules(dl: DecisionList) -> str:
    """`weight\\tsense\\tfeature\\tcount_i\\tothers_sum`, one rule per line in list order."""
    return "".join(
        f"{r.weight:.6f}\t{r.sense}\t{render_feature(r.feature)}\t{r.count}\t{r.others}\n"
        for r in dl.rules
    )


def load_rules(text: str) -> Dict[str, DecisionList]:
    """Decision lists back from rule dumps, keyed by target key, file order kept."""
    smoothing = DEFAULT_SMOOTHING
    kinds = ALL_KINDS
    by_key: Dict[str, List[Rule]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if line.startswith("##"):
            key, sep, value = line[2:].strip().partition("=")
            if sep and key == "smoothing":
                smoothing = float(value)
            elif sep and key == "kinds":
                kinds = parse_kinds(value)
            continue
        cols = line.split("\t")
        if len(cols) != 5:
            raise ValueError(f"line {lineno}: rule line needs 5 columns, got {len(cols)}")
        try:
            feature = parse_feature(cols[2])
            rule = Rule(feature, cols[1], float(cols[0]), int(cols[3]), int(cols[4]))
        except ValueError as e:
            raise ValueError(f"line {lineno}: {e}") from None
        by_key.setdefault(feature.target_key, []).append(rule)
    return {
        key: DecisionList(key, tuple(rules), smoothing, kinds)
        for key, rules in sorted(by_key.items())
    }


def sense_table(dl: DecisionList, counts: SenseCounts, senses: Optional[Sequence[str]] = None) -> str:
    """Learned collocations with per-sense counts, strongest first.

    One line per feature (placed by its best rule): feature, weight, then a
    count column per sense with `-` for zero.
    """
    senses = list(senses) if senses is not None else counts.senses()
    lines = ["feature\tweight\t" + "\t".join(f"#{s}" for s in senses) + "\n"]
    seen = set()
    for rule in dl.rules:
        if rule.feature in seen:
            continue
        seen.add(rule.feature)
        per_sense = counts.get(rule.feature)
        cells = [str(per_sense[s]) if per_sense.get(s) else "-" for s in senses]
        lines.append(f"{render_feature(rule.feature)}\t{rule.weight:.2f}\t" + "\t".join(cells) + "\n")
    return "".join(lines)


__all__ = [
    "SenseCounts", "Rule", "DecisionList", "Answer", "Abstain", "ABSTAIN", "Decision",
    "MixedTargetError", "DEFAULT_SMOOTHING",
    "weight", "count", "count_feature_sets", "train", "train_from_counts",
    "predict", "restrict", "dump_rules", "load_rules", "sense_table",
]

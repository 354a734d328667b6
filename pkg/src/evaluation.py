"""Scoring and the experimental protocols.

Protocols:
  run_xval        k-fold cross-validation inside one corpus, folds over
                  examples or over whole document groups (files/directories)
  run_cross       train on one corpus, tag another
  run_categories  tag each category of a categorized corpus with lists trained
                  on another corpus and on the remaining categories
  run_summary     overall precision of the three settings side by side

Scores are micro-averaged: counts are pooled over folds and words.
"""

from __future__ import annotations
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import (
    Callable, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional,
    Sequence, Tuple, TypeVar,
)
import logging

from corpus import BROWN_CATEGORIES, Corpus, Example, extract_examples, group_by_key, pos_class
from collocations import ALL_KINDS, KIND_GROUPS, Feature, FeatureKind, extract_features, kinds_label
from decision_list import (
    ABSTAIN, DEFAULT_SMOOTHING, Decision, DecisionList, count_feature_sets, predict, restrict,
    train_from_counts,
)
from rng import SplitMix64, sample_indices, shuffle

log = logging.getLogger(__name__)
fold_log = logging.getLogger("wsd.folds")

T = TypeVar("T")
R = TypeVar("R")

OVERALL = "OVERALL"
ALL_SCOPE = "ALL"
REPORT_HEADER = ("scope", "label", "precision", "coverage", "answered", "correct", "total")


class FoldError(ValueError):
    pass


class ProtocolError(ValueError):
    pass


class FoldUnit(str, Enum):
    EXAMPLE = "example"
    DOCUMENT_GROUP = "document"


# ---------------------------------------------------------------------------
# scores


@dataclass(frozen=True)
class Score:
    total: int = 0
    answered: int = 0
    correct: int = 0

    def __post_init__(self):
        if not 0 <= self.correct <= self.answered <= self.total:
            raise ValueError(f"inconsistent score correct={self.correct} answered={self.answered} total={self.total}")

    @property
    def precision_fraction(self) -> Fraction:
        return Fraction(self.correct, self.answered) if self.answered else Fraction(0)

    @property
    def coverage_fraction(self) -> Fraction:
        return Fraction(self.answered, self.total) if self.total else Fraction(0)

    @property
    def precision(self) -> float:
        return float(self.precision_fraction)

    @property
    def coverage(self) -> float:
        return float(self.coverage_fraction)

    @property
    def empty(self) -> bool:
        return self.total == 0

    def __add__(self, other: "Score") -> "Score":
        return Score(self.total + other.total, self.answered + other.answered, self.correct + other.correct)


def score(decisions: Sequence[Decision], gold: Sequence[str]) -> Score:
    if len(decisions) != len(gold):
        raise ValueError(f"{len(decisions)} decisions for {len(gold)} gold labels")
    answered = correct = 0
    for decision, sense in zip(decisions, gold):
        if decision.answered:
            answered += 1
            if decision.sense == sense:
                correct += 1
    return Score(len(gold), answered, correct)


def format_fraction(value: Fraction) -> str:
    """Three decimals, for report columns."""
    # Fraction rounding is exact and rounds half to even
    return f"{float(round(value, 3)):.3f}"


# ---------------------------------------------------------------------------
# folds


@dataclass(frozen=True)
class FoldSpec:
    k: int
    unit: FoldUnit
    seed: int
    assignment: Mapping[str, int] = field(default_factory=dict)

    def fold_of(self, unit_id: str) -> int:
        return self.assignment[unit_id]

    def folds(self) -> List[List[str]]:
        """Unit ids per fold, each fold in shuffled order."""
        out: List[List[str]] = [[] for _ in range(self.k)]
        for unit_id, fold in self.assignment.items():
            out[fold].append(unit_id)
        return out

    def sizes(self) -> List[int]:
        return [len(f) for f in self.folds()]

    def unit_of(self, example: Example) -> str:
        return example.uid if self.unit is FoldUnit.EXAMPLE else example.grouping_key


def _assign_folds(unit_ids: Sequence[str], k: int, seed: int, unit: FoldUnit) -> FoldSpec:
    if k < 2:
        raise FoldError(f"k must be at least 2, got {k}")
    if len(set(unit_ids)) != len(unit_ids):
        raise FoldError("fold units must be distinct")
    if len(unit_ids) < k:
        raise FoldError(f"{len(unit_ids)} {unit.value} units cannot fill {k} folds")
    order = shuffle(list(unit_ids), SplitMix64(seed))
    # round-robin over the shuffled order: fold sizes differ by at most one
    assignment = {unit_id: pos % k for pos, unit_id in enumerate(order)}
    spec = FoldSpec(k, unit, seed, assignment)
    fold_log.debug("folds_assigned unit=%s units=%d k=%d seed=%d sizes=%s",
                   unit.value, len(order), k, seed, spec.sizes())
    return spec


def kfold_by_example(examples: Sequence[Example], k: int, seed: int) -> FoldSpec:
    return _assign_folds([ex.uid for ex in examples], k, seed, FoldUnit.EXAMPLE)


def kfold_by_document(corpus: Corpus, k: int, seed: int) -> FoldSpec:
    """Folds over grouping keys (files or directories) of the whole corpus."""
    return _assign_folds(corpus.grouping_keys(), k, seed, FoldUnit.DOCUMENT_GROUP)


def split_folds(examples: Sequence[Example], spec: FoldSpec) -> Iterator[Tuple[int, List[Example], List[Example]]]:
    """(fold, train, test) for every fold, examples kept in input order."""
    folds = [spec.fold_of(spec.unit_of(ex)) for ex in examples]
    for fold in range(spec.k):
        train = [ex for ex, f in zip(examples, folds) if f != fold]
        test = [ex for ex, f in zip(examples, folds) if f == fold]
        yield fold, train, test


def equalize_per_word(a: Sequence[Example], b: Sequence[Example], seed: int) -> Tuple[List[Example], List[Example]]:
    """Same number of examples per target key on both sides.

    Keys missing on one side are dropped; the larger side is subsampled
    without replacement. Kept examples stay in their input order.
    """
    rng = SplitMix64(seed)
    pos_a: Dict[str, List[int]] = {}
    pos_b: Dict[str, List[int]] = {}
    for i, ex in enumerate(a):
        pos_a.setdefault(ex.target_key, []).append(i)
    for i, ex in enumerate(b):
        pos_b.setdefault(ex.target_key, []).append(i)
    keep_a: List[int] = []
    keep_b: List[int] = []
    for key in sorted(set(pos_a) & set(pos_b)):
        pa, pb = pos_a[key], pos_b[key]
        m = min(len(pa), len(pb))
        keep_a.extend(pa[i] for i in sample_indices(len(pa), m, rng))
        keep_b.extend(pb[i] for i in sample_indices(len(pb), m, rng))
        if len(pa) != len(pb):
            log.debug("equalized word=%s a=%d b=%d kept=%d", key, len(pa), len(pb), m)
    dropped = sorted(set(pos_a) ^ set(pos_b))
    if dropped:
        log.info("equalize_dropped words=%s", ",".join(dropped))
    return [a[i] for i in sorted(keep_a)], [b[i] for i in sorted(keep_b)]


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class ReportRow:
    scope: str
    label: str
    score: Score

    def tsv(self) -> str:
        s = self.score
        if s.empty:
            prec = cov = "EMPTY"
        else:
            prec, cov = format_fraction(s.precision_fraction), format_fraction(s.coverage_fraction)
        return "\t".join((self.scope, self.label, prec, cov, str(s.answered), str(s.correct), str(s.total)))


@dataclass
class Report:
    rows: List[ReportRow] = field(default_factory=list)
    metadata: List[Tuple[str, str]] = field(default_factory=list)

    def row(self, scope: str, label: str) -> ReportRow:
        for r in self.rows:
            if r.scope == scope and r.label == label:
                return r
        raise KeyError((scope, label))

    def scopes(self) -> List[str]:
        return list(dict.fromkeys(r.scope for r in self.rows))

    def meta(self, key: str) -> Optional[str]:
        for k, v in self.metadata:
            if k == key:
                return v
        return None

    def to_tsv(self, header: Sequence[Tuple[str, str]] = ()) -> str:
        """`##` metadata (given header pairs first), column header, rows."""
        lines = [f"## {k}={v}" for k, v in header]
        seen = {k for k, _ in header}
        lines.extend(f"## {k}={v}" for k, v in self.metadata if k not in seen)
        lines.append("\t".join(REPORT_HEADER))
        lines.extend(r.tsv() for r in self.rows)
        return "\n".join(lines) + "\n"


Labels = List[Tuple[str, FrozenSet[FeatureKind]]]


def report_labels(kinds: FrozenSet[FeatureKind], per_kind: bool = True) -> Labels:
    """Row labels in report order: each group's kinds, the group, then OVERALL."""
    labels: Labels = []
    for group, members in KIND_GROUPS:
        present = members & kinds
        if not present:
            continue
        if per_kind:
            labels.extend((k.value, frozenset({k})) for k in sorted(present, key=lambda k: k.ordinal))
        labels.append((group, frozenset(present)))
    labels.append((OVERALL, frozenset(kinds)))
    return labels


LabelledFeatures = List[Tuple[Example, FrozenSet[Feature]]]


def _train_or_none(target_key: str, train: LabelledFeatures, kinds: FrozenSet[FeatureKind],
                   smoothing: float) -> Optional[DecisionList]:
    if not train:
        return None
    counts = count_feature_sets(target_key, ((ex.sense, feats) for ex, feats in train), kinds)
    return train_from_counts(target_key, counts, kinds, smoothing)


def _evaluate(dl: Optional[DecisionList], test: LabelledFeatures, labels: Labels) -> Dict[str, Score]:
    gold = [ex.sense for ex, _ in test]
    scores: Dict[str, Score] = {}
    for label, kinds in labels:
        sub = restrict(dl, kinds) if dl is not None else None
        decisions = [predict(sub, feats) if sub is not None else ABSTAIN for _, feats in test]
        scores[label] = score(decisions, gold)
    return scores


def _merge(into: Dict[str, Score], scores: Mapping[str, Score]) -> None:
    for label, s in scores.items():
        into[label] = into.get(label, Score()) + s


def _with_features(examples: Iterable[Example]) -> LabelledFeatures:
    return [(ex, extract_features(ex)) for ex in examples]


def _map_words(fn: Callable[[str, R], T], items: Sequence[Tuple[str, R]], workers: int) -> List[T]:
    """fn over (word, payload) items; results come back in item order."""
    if workers <= 1 or len(items) <= 1:
        return [fn(key, payload) for key, payload in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda item: fn(*item), items))


def _rows_by_pos(word_scores: Sequence[Tuple[str, Dict[str, Score]]], labels: Labels) -> List[ReportRow]:
    """Pool per-word label scores into one scope per PoS class plus ALL."""
    scopes: Dict[str, Dict[str, Score]] = {}
    for key, scores in word_scores:
        _merge(scopes.setdefault(pos_class(key), {}), scores)
        _merge(scopes.setdefault(ALL_SCOPE, {}), scores)
    order = sorted(s for s in scopes if s != ALL_SCOPE) + ([ALL_SCOPE] if ALL_SCOPE in scopes else [])
    return [
        ReportRow(scope, label, scopes[scope].get(label, Score()))
        for scope in order for label, _ in labels
    ]


def _select_keys(available: Iterable[str], target_keys: Optional[Iterable[str]]) -> Tuple[List[str], List[str]]:
    """(keys to run, requested keys that are missing)."""
    available = set(available)
    if target_keys is None:
        return sorted(available), []
    wanted = list(dict.fromkeys(target_keys))
    return sorted(k for k in wanted if k in available), [k for k in wanted if k not in available]


def _common_metadata(kinds: FrozenSet[FeatureKind], smoothing: float, seed: int) -> List[Tuple[str, str]]:
    return [("kinds", kinds_label(kinds)), ("smoothing", repr(smoothing)), ("seed", str(seed))]


# ---------------------------------------------------------------------------
# protocols


def run_xval(corpus: Corpus,
             target_keys: Optional[Iterable[str]] = None,
             kinds: FrozenSet[FeatureKind] = ALL_KINDS,
             k: int = 10,
             seed: int = 0,
             fold_unit: FoldUnit = FoldUnit.EXAMPLE,
             smoothing: float = DEFAULT_SMOOTHING,
             workers: int = 1) -> Report:
    """Cross-validation inside one corpus."""
    fold_unit = FoldUnit(fold_unit)
    kinds = frozenset(kinds)
    by_key = group_by_key(extract_examples(corpus))
    keys, missing = _select_keys(by_key, target_keys)
    skipped = list(missing)
    for key in missing:
        log.warning("xval_skip word=%s reason=no_examples", key)
    doc_spec = kfold_by_document(corpus, k, seed) if fold_unit is FoldUnit.DOCUMENT_GROUP else None

    runnable = []
    for key in keys:
        if doc_spec is None and len(by_key[key]) < k:
            log.warning("xval_skip word=%s reason=too_few_examples examples=%d k=%d", key, len(by_key[key]), k)
            skipped.append(key)
            continue
        runnable.append((key, by_key[key]))
    labels = report_labels(kinds)

    def run_word(key: str, examples: List[Example]) -> Tuple[str, Dict[str, Score]]:
        spec = doc_spec or kfold_by_example(examples, k, seed)
        feats = {ex.uid: extract_features(ex) for ex in examples}
        totals: Dict[str, Score] = {}
        for fold, train, test in split_folds(examples, spec):
            dl = _train_or_none(key, [(ex, feats[ex.uid]) for ex in train], kinds, smoothing)
            _merge(totals, _evaluate(dl, [(ex, feats[ex.uid]) for ex in test], labels))
        overall = totals[OVERALL]
        log.info("xval_word_done word=%s examples=%d answered=%d correct=%d",
                 key, overall.total, overall.answered, overall.correct)
        return key, totals

    word_scores = _map_words(run_word, runnable, workers)
    metadata = [
        ("protocol", "xval"),
        ("corpus_name", corpus.name),
        ("fold_unit", fold_unit.value),
        ("k", str(k)),
        *_common_metadata(kinds, smoothing, seed),
        ("evaluated", ",".join(key for key, _ in word_scores) or "none"),
    ]
    if skipped:
        metadata.append(("skipped", ",".join(skipped)))
    return Report(_rows_by_pos(word_scores, labels), metadata)


def _cross_scores(train_by_key: Mapping[str, List[Example]], test_by_key: Mapping[str, List[Example]],
                  keys: Sequence[str], kinds: FrozenSet[FeatureKind], labels: Labels,
                  smoothing: float, workers: int) -> List[Tuple[str, Dict[str, Score]]]:
    def run_word(key: str, _payload: None) -> Tuple[str, Dict[str, Score]]:
        dl = _train_or_none(key, _with_features(train_by_key.get(key, [])), kinds, smoothing)
        return key, _evaluate(dl, _with_features(test_by_key.get(key, [])), labels)

    return _map_words(run_word, [(key, None) for key in keys], workers)


def run_cross(train_corpus: Corpus,
              test_corpus: Corpus,
              target_keys: Optional[Iterable[str]] = None,
              kinds: FrozenSet[FeatureKind] = ALL_KINDS,
              seed: int = 0,
              equalize: bool = False,
              smoothing: float = DEFAULT_SMOOTHING,
              workers: int = 1) -> Report:
    """Train on one corpus, tag the other."""
    kinds = frozenset(kinds)
    train_ex = extract_examples(train_corpus)
    test_ex = extract_examples(test_corpus)
    shared = {ex.target_key for ex in train_ex} & {ex.target_key for ex in test_ex}
    keys, missing = _select_keys(shared, target_keys)
    if not keys:
        raise ProtocolError(f"no shared target keys between {train_corpus.name} and {test_corpus.name}")
    for key in missing:
        log.warning("cross_skip word=%s reason=not_shared", key)
    wanted = set(keys)
    train_ex = [ex for ex in train_ex if ex.target_key in wanted]
    test_ex = [ex for ex in test_ex if ex.target_key in wanted]
    if equalize:
        train_ex, test_ex = equalize_per_word(train_ex, test_ex, seed)

    labels = report_labels(kinds)
    word_scores = _cross_scores(group_by_key(train_ex), group_by_key(test_ex), keys, kinds, labels, smoothing, workers)
    for key, scores in word_scores:
        overall = scores[OVERALL]
        log.info("cross_word_done word=%s examples=%d answered=%d correct=%d",
                 key, overall.total, overall.answered, overall.correct)
    metadata = [
        ("protocol", "cross"),
        ("train_corpus", train_corpus.name),
        ("test_corpus", test_corpus.name),
        ("equalize", "true" if equalize else "false"),
        *_common_metadata(kinds, smoothing, seed),
        ("evaluated", ",".join(keys)),
    ]
    if missing:
        metadata.append(("skipped", ",".join(missing)))
    return Report(_rows_by_pos(word_scores, labels), metadata)


def run_categories(bc: Corpus,
                   wsj: Corpus,
                   target_keys: Optional[Iterable[str]] = None,
                   kinds: FrozenSet[FeatureKind] = ALL_KINDS,
                   seed: int = 0,
                   equalize: bool = False,
                   smoothing: float = DEFAULT_SMOOTHING,
                   workers: int = 1) -> Report:
    """Tag each category of `bc` with lists trained on `wsj` and on the rest of `bc`.

    Scope is the category code; labels are `cross:<group>` (trained on the
    other corpus) and `rest:<group>` (trained on the other categories).
    """
    kinds = frozenset(kinds)
    uncategorized = [doc.id for doc in bc.documents if doc.category is None]
    if uncategorized:
        raise ProtocolError(f"documents without category in {bc.name}: {', '.join(uncategorized)}")
    bc_ex = extract_examples(bc)
    other_ex = extract_examples(wsj)
    shared = {ex.target_key for ex in bc_ex} & {ex.target_key for ex in other_ex}
    keys, missing = _select_keys(shared, target_keys)
    if not keys:
        raise ProtocolError(f"no shared target keys between {bc.name} and {wsj.name}")
    wanted = set(keys)
    bc_ex = [ex for ex in bc_ex if ex.target_key in wanted]
    other_ex = [ex for ex in other_ex if ex.target_key in wanted]
    categories = sorted({doc.category for doc in bc.documents})
    labels = report_labels(kinds, per_kind=False)

    rows: List[ReportRow] = []
    for cat in categories:
        test = [ex for ex in bc_ex if ex.category == cat]
        rest = [ex for ex in bc_ex if ex.category != cat]
        cross_train = list(other_ex)
        if equalize:
            cross_train, rest = equalize_per_word(cross_train, rest, seed)
        test_by_key = group_by_key(test)
        for prefix, train in (("cross", cross_train), ("rest", rest)):
            pooled: Dict[str, Score] = {}
            for _, scores in _cross_scores(group_by_key(train), test_by_key, keys, kinds, labels, smoothing, workers):
                _merge(pooled, scores)
            rows.extend(ReportRow(cat, f"{prefix}:{label}", pooled.get(label, Score())) for label, _ in labels)
        overall = pooled.get(OVERALL, Score())
        if overall.empty:
            log.warning("category_empty category=%s", cat)
        log.info("category_done category=%s examples=%d", cat, overall.total)

    metadata = [
        ("protocol", "categories"),
        ("categorized_corpus", bc.name),
        ("cross_corpus", wsj.name),
        ("equalize", "true" if equalize else "false"),
        *_common_metadata(kinds, smoothing, seed),
        ("evaluated", ",".join(keys)),
    ]
    if missing:
        metadata.append(("skipped", ",".join(missing)))
    metadata.extend((f"category.{c}", BROWN_CATEGORIES[c]) for c in categories if c in BROWN_CATEGORIES)
    return Report(rows, metadata)


def run_summary(a: Corpus,
                b: Corpus,
                target_keys: Optional[Iterable[str]] = None,
                kinds: FrozenSet[FeatureKind] = ALL_KINDS,
                k: int = 10,
                seed: int = 0,
                equalize: bool = False,
                smoothing: float = DEFAULT_SMOOTHING,
                workers: int = 1) -> Report:
    """Overall results per corpus: in-corpus by examples, by documents, and cross-corpus."""
    kinds = frozenset(kinds)
    keys = list(target_keys) if target_keys is not None else None
    rows: List[ReportRow] = []
    for this, other in ((a, b), (b, a)):
        settings = (
            ("in-corpus-examples", lambda: run_xval(this, keys, kinds, k, seed, FoldUnit.EXAMPLE, smoothing, workers)),
            ("in-corpus-documents", lambda: run_xval(this, keys, kinds, k, seed, FoldUnit.DOCUMENT_GROUP, smoothing, workers)),
            ("cross-corpus", lambda: run_cross(other, this, keys, kinds, seed, equalize, smoothing, workers)),
        )
        for label, runner in settings:
            try:
                report = runner()
                overall = next((r.score for r in report.rows if r.scope == ALL_SCOPE and r.label == OVERALL), Score())
            except (FoldError, ProtocolError) as e:
                log.warning("summary_setting_failed corpus=%s setting=%s error=%s", this.name, label, e)
                overall = Score()
            rows.append(ReportRow(this.name, label, overall))
    metadata = [
        ("protocol", "summary"),
        ("corpora", f"{a.name},{b.name}"),
        ("k", str(k)),
        ("equalize", "true" if equalize else "false"),
        *_common_metadata(kinds, smoothing, seed),
    ]
    return Report(rows, metadata)


__all__ = [
    "Score", "FoldSpec", "FoldUnit", "Report", "ReportRow", "FoldError", "ProtocolError",
    "OVERALL", "ALL_SCOPE", "REPORT_HEADER",
    "score", "format_fraction", "kfold_by_example", "kfold_by_document", "split_folds", "equalize_per_word",
    "report_labels", "run_xval", "run_cross", "run_categories", "run_summary",
]

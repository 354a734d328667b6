"""Collocation features of a target occurrence.

Three families, fifteen kinds:
  local content-word collocations  CW_*   (at least one content word)
  local PoS and function-word      FW_*, POS_*
  global content-word              WIN4_WORD (+-4 tokens), SENT_WORD (whole sentence)

Features never cross the sentence boundary and never include the target token.
Surface forms are used as-is, and the target's own form is part of every
feature, so "governing body" and "governing bodies" stay distinct.
"""

from __future__ import annotations
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Set, Tuple, Union
import logging

from corpus import Example, Sentence, is_content_tag

log = logging.getLogger(__name__)

WINDOW = 4


class FeatureKind(str, Enum):
    """Collocation kinds; declaration order is the canonical ordinal."""
    CW_LEFT = "CW_LEFT"
    CW_RIGHT = "CW_RIGHT"
    CW_2LEFT = "CW_2LEFT"
    CW_2RIGHT = "CW_2RIGHT"
    CW_BOTH = "CW_BOTH"
    FW_LEFT = "FW_LEFT"
    FW_RIGHT = "FW_RIGHT"
    FW_BOTH = "FW_BOTH"
    POS_LEFT = "POS_LEFT"
    POS_RIGHT = "POS_RIGHT"
    POS_2LEFT = "POS_2LEFT"
    POS_2RIGHT = "POS_2RIGHT"
    POS_BOTH = "POS_BOTH"
    WIN4_WORD = "WIN4_WORD"
    SENT_WORD = "SENT_WORD"

    @property
    def ordinal(self) -> int:
        return _ORDINALS[self]


_ORDINALS: Dict[FeatureKind, int] = {kind: i for i, kind in enumerate(FeatureKind)}

ALL_KINDS: FrozenSet[FeatureKind] = frozenset(FeatureKind)
LOCAL_CONTENT: FrozenSet[FeatureKind] = frozenset({
    FeatureKind.CW_LEFT, FeatureKind.CW_RIGHT, FeatureKind.CW_2LEFT,
    FeatureKind.CW_2RIGHT, FeatureKind.CW_BOTH,
})
LOCAL_POSFUN: FrozenSet[FeatureKind] = frozenset({
    FeatureKind.FW_LEFT, FeatureKind.FW_RIGHT, FeatureKind.FW_BOTH,
    FeatureKind.POS_LEFT, FeatureKind.POS_RIGHT, FeatureKind.POS_2LEFT,
    FeatureKind.POS_2RIGHT, FeatureKind.POS_BOTH,
})
GLOBAL: FrozenSet[FeatureKind] = frozenset({FeatureKind.WIN4_WORD, FeatureKind.SENT_WORD})

# report order: group label -> member kinds
KIND_GROUPS: Tuple[Tuple[str, FrozenSet[FeatureKind]], ...] = (
    ("local-content", LOCAL_CONTENT),
    ("local-posfun", LOCAL_POSFUN),
    ("global", GLOBAL),
)
KIND_ALIASES: Dict[str, FrozenSet[FeatureKind]] = dict(KIND_GROUPS, all=ALL_KINDS)

KIND_LABELS: Dict[FeatureKind, str] = {
    FeatureKind.CW_LEFT: "Word-to-left (content)",
    FeatureKind.CW_RIGHT: "Word-to-right (content)",
    FeatureKind.CW_2LEFT: "Two-words-to-left (content)",
    FeatureKind.CW_2RIGHT: "Two-words-to-right (content)",
    FeatureKind.CW_BOTH: "Word-to-right-and-left (content)",
    FeatureKind.FW_LEFT: "Word-to-left (function)",
    FeatureKind.FW_RIGHT: "Word-to-right (function)",
    FeatureKind.FW_BOTH: "Word-to-right-and-left (both function)",
    FeatureKind.POS_LEFT: "PoS-to-left",
    FeatureKind.POS_RIGHT: "PoS-to-right",
    FeatureKind.POS_2LEFT: "Two-PoS-to-left",
    FeatureKind.POS_2RIGHT: "Two-PoS-to-right",
    FeatureKind.POS_BOTH: "PoS-to-right-and-left",
    FeatureKind.WIN4_WORD: "Word in window of 4",
    FeatureKind.SENT_WORD: "Word in sentence",
}

_TWO_PART = frozenset({
    FeatureKind.CW_2LEFT, FeatureKind.CW_2RIGHT, FeatureKind.CW_BOTH,
    FeatureKind.FW_BOTH, FeatureKind.POS_2LEFT, FeatureKind.POS_2RIGHT,
    FeatureKind.POS_BOTH,
})


class UnknownKindError(ValueError):
    pass


@dataclass(frozen=True)
class Feature:
    kind: FeatureKind
    target_key: str
    target_form: str
    parts: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        expected = 2 if self.kind in _TWO_PART else 1
        if len(self.parts) != expected:
            raise ValueError(f"{self.kind.value} takes {expected} part(s), got {len(self.parts)}")

    def __str__(self) -> str:
        return render_feature(self)


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace("|", "\\|")


def render_feature(feature: Feature) -> str:
    """`<kind>|<target_key>|<target_form>|<part1>[|<part2>]`, injective over features."""
    fields = [feature.kind.value, feature.target_key, feature.target_form, *feature.parts]
    return "|".join(_escape(f) for f in fields)


def parse_feature(text: str) -> Feature:
    fields: List[str] = []
    buf: List[str] = []
    chars = iter(text)
    for ch in chars:
        if ch == "\\":
            nxt = next(chars, None)
            if nxt is None:
                raise ValueError(f"dangling escape in feature {text!r}")
            buf.append(nxt)
        elif ch == "|":
            fields.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
    fields.append("".join(buf))
    if len(fields) < 4:
        raise ValueError(f"malformed feature string {text!r}")
    try:
        kind = FeatureKind(fields[0])
    except ValueError:
        raise UnknownKindError(f"unknown feature kind {fields[0]!r}") from None
    return Feature(kind, fields[1], fields[2], tuple(fields[3:]))


def parse_kinds(spec: Union[str, Iterable[str]]) -> FrozenSet[FeatureKind]:
    """Kind names and/or group aliases, comma separated or as a list."""
    names = spec.split(",") if isinstance(spec, str) else list(spec)
    kinds: Set[FeatureKind] = set()
    for raw in names:
        name = raw.strip()
        if not name:
            continue
        if name in KIND_ALIASES:
            kinds |= KIND_ALIASES[name]
            continue
        try:
            kinds.add(FeatureKind(name.upper()))
        except ValueError:
            raise UnknownKindError(f"unknown feature kind {name!r}") from None
    return frozenset(kinds)


def kinds_label(kinds: Iterable[FeatureKind]) -> str:
    """Compact, order-stable spelling of a kind set (aliases where they fit exactly)."""
    kinds = frozenset(kinds)
    if kinds == ALL_KINDS:
        return "all"
    for alias, members in KIND_GROUPS:
        if kinds == members:
            return alias
    return ",".join(k.value for k in sorted(kinds, key=lambda k: k.ordinal))


def extract_features(example: Example) -> FrozenSet[Feature]:
    return features_at(example.context, example.token_index, example.target_key)


def features_at(sentence: Sentence, t: int, target_key: str) -> FrozenSet[Feature]:
    """All collocation features licensed around token `t` of `sentence`."""
    tokens = sentence.tokens
    n = len(tokens)
    if not 0 <= t < n:
        raise IndexError(f"target index {t} outside sentence of length {n}")
    form = tokens[t].form
    feats: Set[Feature] = set()

    def add(kind: FeatureKind, *parts: str) -> None:
        feats.add(Feature(kind, target_key, form, parts))

    left = tokens[t - 1] if t >= 1 else None
    left2 = tokens[t - 2] if t >= 2 else None
    right = tokens[t + 1] if t + 1 < n else None
    right2 = tokens[t + 2] if t + 2 < n else None
    content = lambda tok: is_content_tag(tok.pos)  # noqa: E731

    if left is not None:
        add(FeatureKind.CW_LEFT if content(left) else FeatureKind.FW_LEFT, left.form)
        add(FeatureKind.POS_LEFT, left.pos)
    if right is not None:
        add(FeatureKind.CW_RIGHT if content(right) else FeatureKind.FW_RIGHT, right.form)
        add(FeatureKind.POS_RIGHT, right.pos)
    if left2 is not None:
        if content(left2) or content(left):
            add(FeatureKind.CW_2LEFT, left2.form, left.form)
        add(FeatureKind.POS_2LEFT, left2.pos, left.pos)
    if right2 is not None:
        if content(right) or content(right2):
            add(FeatureKind.CW_2RIGHT, right.form, right2.form)
        add(FeatureKind.POS_2RIGHT, right.pos, right2.pos)
    if left is not None and right is not None:
        if content(left) or content(right):
            add(FeatureKind.CW_BOTH, left.form, right.form)
        else:
            add(FeatureKind.FW_BOTH, left.form, right.form)
        add(FeatureKind.POS_BOTH, left.pos, right.pos)

    for i, tok in enumerate(tokens):
        if i == t or not content(tok):
            continue
        add(FeatureKind.SENT_WORD, tok.form)
        if abs(i - t) <= WINDOW:
            add(FeatureKind.WIN4_WORD, tok.form)
    return frozenset(feats)


def restrict_features(features: Iterable[Feature], kinds: FrozenSet[FeatureKind]) -> FrozenSet[Feature]:
    return frozenset(f for f in features if f.kind in kinds)


__all__ = [
    "FeatureKind", "Feature", "UnknownKindError",
    "ALL_KINDS", "LOCAL_CONTENT", "LOCAL_POSFUN", "GLOBAL", "KIND_GROUPS",
    "KIND_ALIASES", "KIND_LABELS", "WINDOW",
    "extract_features", "features_at", "render_feature", "parse_feature",
    "parse_kinds", "kinds_label", "restrict_features",
]

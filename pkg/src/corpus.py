"""Sense-tagged corpus model and the vertical corpus file format.

A corpus file is UTF-8 text, one token per line::

    ## comment lines start with two hashes
    #DOC id=a01 corpus=bc group=a01 category=A
    The	DT
    State	NNP	state.n=5
    government	NN

Blank lines close sentences; a ``#DOC`` header closes the current sentence and
document. Surface forms are kept exactly as written (no case folding, no
lemmatization).
"""

from __future__ import annotations
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, NewType, Optional, Tuple
import logging

log = logging.getLogger(__name__)

PosTag = NewType("PosTag", str)

# Penn coarse classes of content words: nouns, verbs, adjectives, adverbs
CONTENT_TAG_INITIALS = frozenset("NVJR")

# Brown Corpus text categories (informative prose A-J, imaginative prose K-R)
BROWN_CATEGORIES: Dict[str, str] = {
    "A": "Press: Reportage",
    "B": "Press: Editorial",
    "C": "Press: Reviews",
    "D": "Religion",
    "E": "Skills and Hobbies",
    "F": "Popular Lore",
    "G": "Belles Lettres, Biography, Memoirs",
    "H": "Miscellaneous",
    "J": "Learned",
    "K": "General Fiction",
    "L": "Mystery and Detective Fiction",
    "M": "Science Fiction",
    "N": "Adventure and Western Fiction",
    "P": "Romance and Love Story",
    "R": "Humor",
}

HEADER_PREFIX = "#DOC"
COMMENT_PREFIX = "##"
_HEADER_KEYS = ("id", "corpus", "group", "category")
_REQUIRED_HEADER_KEYS = ("id", "corpus", "group")


class CorpusParseError(ValueError):
    """Malformed corpus input; `line` is 1-based."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


def is_content_tag(pos: str) -> bool:
    """True for nouns, verbs, adjectives and adverbs; everything else is a function word."""
    return pos[:1] in CONTENT_TAG_INITIALS


def pos_class(target_key: str) -> str:
    """Coarse class of a target key used as a report scope (`state.n` -> `N`)."""
    if "." not in target_key:
        return "?"
    suffix = target_key.rsplit(".", 1)[1]
    return suffix.upper() if suffix else "?"


def _check_field(value: str, what: str) -> None:
    if not value or any(ch.isspace() for ch in value):
        raise ValueError(f"{what} must be non-empty and contain no whitespace: {value!r}")


@dataclass(frozen=True)
class Token:
    form: str
    pos: str

    def __post_init__(self):
        if not self.form or any(ch in self.form for ch in "\t\n\r"):
            raise ValueError(f"invalid token form {self.form!r}")
        # these would read back as a comment or a document header
        if self.form.startswith((COMMENT_PREFIX, HEADER_PREFIX + " ")):
            raise ValueError(f"token form {self.form!r} collides with a comment or #DOC line")
        _check_field(self.pos, "PoS tag")


@dataclass(frozen=True)
class Sentence:
    """Tokens plus the sense annotations carried by some of them.

    `annotations` maps token index -> (target_key, sense).
    """
    tokens: Tuple[Token, ...]
    annotations: Mapping[int, Tuple[str, str]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "annotations", dict(self.annotations))
        for idx, (key, sense) in self.annotations.items():
            if not 0 <= idx < len(self.tokens):
                raise ValueError(f"annotation on nonexistent token {idx} (sentence has {len(self.tokens)})")
            _check_field(key, "target key")
            if "=" in key:
                raise ValueError(f"target key may not contain '=': {key!r}")
            _check_field(sense, "sense label")

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Document:
    id: str
    corpus_name: str
    grouping_key: str
    sentences: Tuple[Sentence, ...] = ()
    category: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))
        _check_field(self.id, "document id")
        _check_field(self.corpus_name, "corpus name")
        _check_field(self.grouping_key, "grouping key")
        if self.category is not None:
            _check_field(self.category, "category")


@dataclass(frozen=True)
class Corpus:
    name: str
    documents: Tuple[Document, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "documents", tuple(self.documents))
        seen = set()
        for doc in self.documents:
            if doc.id in seen:
                raise ValueError(f"duplicate document id {doc.id!r}")
            seen.add(doc.id)

    def document(self, doc_id: str) -> Document:
        for doc in self.documents:
            if doc.id == doc_id:
                return doc
        raise KeyError(doc_id)

    def target_keys(self) -> List[str]:
        keys = {key for doc in self.documents for s in doc.sentences for key, _ in s.annotations.values()}
        return sorted(keys)

    def grouping_keys(self) -> List[str]:
        """Distinct grouping keys in order of first appearance."""
        return list(dict.fromkeys(doc.grouping_key for doc in self.documents))

    def token_count(self) -> int:
        return sum(len(s) for doc in self.documents for s in doc.sentences)


@dataclass(frozen=True)
class Example:
    """One sense-annotated occurrence of a target word."""
    target_key: str
    sense: str
    doc_id: str
    sentence_index: int
    token_index: int
    target_form: str
    context: Sentence = field(compare=False, repr=False)
    grouping_key: str = ""
    category: Optional[str] = None

    def __post_init__(self):
        if not 0 <= self.token_index < len(self.context.tokens):
            raise ValueError(f"token index {self.token_index} outside its sentence")
        if self.context.tokens[self.token_index].form != self.target_form:
            raise ValueError("target_form does not match the context token")

    @property
    def uid(self) -> str:
        return f"{self.doc_id}:{self.sentence_index}:{self.token_index}"


# ---------------------------------------------------------------------------
# parsing / serialization


def _parse_header(line: str, lineno: int) -> Dict[str, str]:
    fields: Dict[str, str] = {}
    for item in line[len(HEADER_PREFIX):].split():
        key, sep, value = item.partition("=")
        if not sep or not key or not value:
            raise CorpusParseError(lineno, f"malformed header field {item!r} (expected key=value)")
        if key not in _HEADER_KEYS:
            raise CorpusParseError(lineno, f"unknown header key {key!r}")
        if key in fields:
            raise CorpusParseError(lineno, f"repeated header key {key!r}")
        fields[key] = value
    missing = [k for k in _REQUIRED_HEADER_KEYS if k not in fields]
    if missing:
        raise CorpusParseError(lineno, f"header missing {', '.join(missing)}")
    return fields


def _parse_token(line: str, lineno: int) -> Tuple[Token, Optional[Tuple[str, str]]]:
    cols = line.split("\t")
    if len(cols) not in (2, 3):
        raise CorpusParseError(lineno, f"token line needs 2 or 3 tab-separated columns, got {len(cols)}")
    try:
        token = Token(cols[0], cols[1])
    except ValueError as e:
        raise CorpusParseError(lineno, str(e)) from None
    if len(cols) == 2:
        return token, None
    key, sep, sense = cols[2].partition("=")
    if not sep or not key or not sense or any(ch.isspace() for ch in cols[2]):
        raise CorpusParseError(lineno, f"malformed annotation {cols[2]!r} (expected target_key=sense)")
    return token, (key, sense)


class _DocumentBuilder:
    def __init__(self, fields: Dict[str, str], lineno: int):
        self.fields = fields
        self.lineno = lineno
        self.sentences: List[Sentence] = []
        self.tokens: List[Token] = []
        self.annotations: Dict[int, Tuple[str, str]] = {}

    def add(self, token: Token, annotation: Optional[Tuple[str, str]]) -> None:
        if annotation is not None:
            self.annotations[len(self.tokens)] = annotation
        self.tokens.append(token)

    def close_sentence(self) -> None:
        if self.tokens:
            self.sentences.append(Sentence(tuple(self.tokens), self.annotations))
        self.tokens, self.annotations = [], {}

    def build(self) -> Document:
        self.close_sentence()
        try:
            return Document(
                id=self.fields["id"],
                corpus_name=self.fields["corpus"],
                grouping_key=self.fields["group"],
                category=self.fields.get("category"),
                sentences=tuple(self.sentences),
            )
        except ValueError as e:
            raise CorpusParseError(self.lineno, str(e)) from None


def parse_corpus(text: str | Iterable[str], corpus_name: str) -> Corpus:
    """Parse the vertical format from a string or an iterable of lines."""
    lines = text.split("\n") if isinstance(text, str) else (l.rstrip("\n") for l in text)
    documents: List[Document] = []
    header_lines: Dict[str, int] = {}
    current: Optional[_DocumentBuilder] = None

    for lineno, raw in enumerate(lines, start=1):
        line = raw[:-1] if raw.endswith("\r") else raw
        if line.startswith(COMMENT_PREFIX):
            continue
        if line == HEADER_PREFIX or line.startswith(HEADER_PREFIX + " "):
            if current is not None:
                documents.append(current.build())
            fields = _parse_header(line, lineno)
            if fields["id"] in header_lines:
                raise CorpusParseError(
                    lineno, f"duplicate document id {fields['id']!r} (first defined on line {header_lines[fields['id']]})")
            header_lines[fields["id"]] = lineno
            current = _DocumentBuilder(fields, lineno)
            continue
        if not line.strip():
            if current is not None:
                current.close_sentence()
            continue
        if current is None:
            raise CorpusParseError(lineno, "token line before the first #DOC header")
        current.add(*_parse_token(line, lineno))

    if current is not None:
        documents.append(current.build())
    corpus = Corpus(corpus_name, tuple(documents))
    log.debug("corpus_parsed name=%s documents=%d tokens=%d", corpus_name, len(documents), corpus.token_count())
    return corpus


def serialize_corpus(corpus: Corpus) -> str:
    """Canonical vertical form; `parse_corpus` of the result gives back an equal corpus."""
    out: List[str] = []
    for doc in corpus.documents:
        header = f"{HEADER_PREFIX} id={doc.id} corpus={doc.corpus_name} group={doc.grouping_key}"
        if doc.category is not None:
            header += f" category={doc.category}"
        out.append(header + "\n")
        for sent in doc.sentences:
            for idx, tok in enumerate(sent.tokens):
                ann = sent.annotations.get(idx)
                if ann is None:
                    out.append(f"{tok.form}\t{tok.pos}\n")
                else:
                    out.append(f"{tok.form}\t{tok.pos}\t{ann[0]}={ann[1]}\n")
            out.append("\n")
    return "".join(out)


def load_corpus(path: str | Path, corpus_name: Optional[str] = None) -> Corpus:
    path = Path(path)
    # only \n ends a line; a lone \r stays in the line so the parser can report it
    with open(path, "r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    corpus = parse_corpus(text, corpus_name or path.stem)
    log.info("corpus_loaded path=%s name=%s documents=%d", path, corpus.name, len(corpus.documents))
    return corpus


# ---------------------------------------------------------------------------
# examples


def extract_examples(corpus: Corpus, target_key: Optional[str] = None) -> List[Example]:
    """All annotated occurrences (optionally of one target key) in document order."""
    examples: List[Example] = []
    for doc in corpus.documents:
        for s_idx, sent in enumerate(doc.sentences):
            for t_idx in sorted(sent.annotations):
                key, sense = sent.annotations[t_idx]
                if target_key is not None and key != target_key:
                    continue
                examples.append(Example(
                    target_key=key,
                    sense=sense,
                    doc_id=doc.id,
                    sentence_index=s_idx,
                    token_index=t_idx,
                    target_form=sent.tokens[t_idx].form,
                    context=sent,
                    grouping_key=doc.grouping_key,
                    category=doc.category,
                ))
    return examples


def group_by_key(examples: Iterable[Example]) -> Dict[str, List[Example]]:
    """Examples bucketed by target key, keys sorted, order within a key preserved."""
    buckets: Dict[str, List[Example]] = {}
    for ex in examples:
        buckets.setdefault(ex.target_key, []).append(ex)
    return {k: buckets[k] for k in sorted(buckets)}


def sense_inventory(corpus: Corpus) -> Dict[str, Counter]:
    """target_key -> Counter of sense labels."""
    inventory: Dict[str, Counter] = {}
    for ex in extract_examples(corpus):
        inventory.setdefault(ex.target_key, Counter())[ex.sense] += 1
    return {k: inventory[k] for k in sorted(inventory)}


__all__ = [
    "PosTag", "Token", "Sentence", "Document", "Corpus", "Example",
    "CorpusParseError", "BROWN_CATEGORIES",
    "parse_corpus", "serialize_corpus", "load_corpus",
    "extract_examples", "group_by_key", "sense_inventory",
    "is_content_tag", "pos_class",
]

"""Seeded synthetic sense-tagged corpora.

Every sentence has the shape

    the/DT <slot>/JJ <target> <verb>/VBZ <object>/NN ./.

where <slot> is a signature word of the chosen sense (probability 1 - noise)
or a confounder shared by all senses, and <object> is the document's marker
word with probability `document_marker_rate`. Output depends on the SynthSpec only.
"""

from __future__ import annotations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple
import logging

from config import SynthSpec, WordSpec
from corpus import Corpus, Document, Sentence, Token, serialize_corpus
from rng import SplitMix64

log = logging.getLogger(__name__)


def signature_words(word: WordSpec, sense: str, category: Optional[str] = None) -> List[str]:
    """Signature collocates of `sense`, category-specific ones first if declared."""
    if category is not None:
        by_sense = word.category_signatures.get(category, {})
        if by_sense.get(sense):
            return list(by_sense[sense])
    if word.signatures.get(sense):
        return list(word.signatures[sense])
    return [f"{word.stem}-{sense}-{j}" for j in range(word.signatures_per_sense)]


def document_id(spec: SynthSpec, index: int) -> str:
    return f"{spec.corpus_name}-{index:03d}"


def group_key(spec: SynthSpec, index: int) -> str:
    if spec.documents_per_group == 1:
        return document_id(spec, index)
    return f"{spec.corpus_name}/dir{index // spec.documents_per_group:03d}"


def _draw_sense(word: WordSpec, rng: SplitMix64) -> str:
    if word.sense_weights is None:
        return rng.choice(word.senses)
    return word.senses[rng.weighted_index(word.sense_weights)]


def _sentence(spec: SynthSpec, word: WordSpec, sense: str, marker: str,
              category: Optional[str], rng: SplitMix64) -> Sentence:
    if rng.random() < 1.0 - word.noise:
        slot = rng.choice(signature_words(word, sense, category))
    else:
        slot = rng.choice(spec.confounders)
    verb = rng.choice(spec.verbs)
    if spec.document_marker_rate > 0 and rng.random() < spec.document_marker_rate:
        obj = marker
    else:
        obj = rng.choice(spec.objects)
    tokens = (
        Token("the", "DT"),
        Token(slot, "JJ"),
        Token(word.surface_form(), word.target_pos()),
        Token(verb, "VBZ"),
        Token(obj, "NN"),
        Token(".", "."),
    )
    return Sentence(tokens, {2: (word.target_key, sense)})


def synth(spec: SynthSpec) -> Corpus:
    """Generate the corpus described by `spec` from one SplitMix64 stream."""
    rng = SplitMix64(spec.seed)
    documents: List[Document] = []
    for i in range(spec.documents):
        doc_id = document_id(spec, i)
        category = spec.categories[i % len(spec.categories)] if spec.categories else None
        dominant: Dict[str, str] = {}
        if spec.discourse_bias > 0:
            for word in spec.words:
                dominant[word.target_key] = _draw_sense(word, rng)
        sentences = []
        for j in range(spec.examples_per_document):
            word = spec.words[j % len(spec.words)]
            if dominant and rng.random() < spec.discourse_bias:
                sense = dominant[word.target_key]
            else:
                sense = _draw_sense(word, rng)
            sentences.append(_sentence(spec, word, sense, f"{doc_id}-marker", category, rng))
        documents.append(Document(doc_id, spec.corpus_name, group_key(spec, i), tuple(sentences), category))
    corpus = Corpus(spec.corpus_name, tuple(documents))
    log.info("synth_done corpus=%s seed=%d documents=%d examples=%d",
             spec.corpus_name, spec.seed, len(documents), spec.documents * spec.examples_per_document)
    return corpus


def synth_text(spec: SynthSpec, header: Sequence[Tuple[str, str]] = ()) -> str:
    """Serialized corpus preceded by `##` lines, the last one the full spec as JSON."""
    lines = [f"## {k}={v}\n" for k, v in header]
    lines.append(f"## spec_json={spec.model_dump_json()}\n")
    return "".join(lines) + serialize_corpus(synth(spec))


__all__ = ["synth", "synth_text", "signature_words", "document_id", "group_key"]

import sys
import pathlib

import pytest

# Ensure src directory is on path for tests
SRC = pathlib.Path(__file__).resolve().parent.parent / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from corpus import extract_examples, parse_corpus  # noqa: E402

TESTS_DIR = pathlib.Path(__file__).resolve().parent


def sent(tokens: str, target: int = None, key: str = None, sense: str = None) -> str:
    """Vertical lines for "form/POS form/POS ..." with an optional annotated token."""
    lines = []
    for i, item in enumerate(tokens.split()):
        form, pos = item.rsplit("/", 1)
        line = f"{form}\t{pos}"
        if i == target:
            line += f"\t{key}={sense}"
        lines.append(line)
    return "\n".join(lines) + "\n\n"


def doc(doc_id: str, *sentences: str, corpus: str = "bc", group: str = None, category: str = None) -> str:
    header = f"#DOC id={doc_id} corpus={corpus} group={group or doc_id}"
    if category:
        header += f" category={category}"
    return header + "\n" + "".join(sentences)


def state_corpus_text() -> str:
    """Sense counts of three collocations of the noun `state`.

    "State government"  -> {5: 4}
    "state court"       -> {3: 12, 5: 3}
    "State and local"   -> {3: 1, 4: 1, 5: 15}
    """
    government = sent("The/DT State/NNP government/NN acted/VBD ./.", 1, "state.n", "5")
    court = "a/DT state/NN court/NN ruled/VBD ./."
    local = "State/NNP and/CC local/JJ taxes/NNS ./."
    return "".join([
        doc("g1", *[government] * 4),
        doc("c1", *[sent(court, 1, "state.n", "3")] * 12, *[sent(court, 1, "state.n", "5")] * 3),
        doc("l1", sent(local, 0, "state.n", "3"), sent(local, 0, "state.n", "4"),
            *[sent(local, 0, "state.n", "5")] * 15),
    ])


@pytest.fixture
def state_corpus():
    return parse_corpus(state_corpus_text(), "bc")


@pytest.fixture
def state_examples(state_corpus):
    return extract_examples(state_corpus, "state.n")


@pytest.fixture
def small_corpus():
    """Three annotations of state.n and two of age.n over two documents."""
    text = (
        doc("d1",
            sent("the/DT state/NN grew/VBD", 1, "state.n", "1"),
            sent("old/JJ age/NN came/VBD", 1, "age.n", "2"),
            sent("a/DT state/NN of/IN mind/NN", 1, "state.n", "2"),
            category="A")
        + doc("d2",
              sent("the/DT age/NN of/IN reason/NN", 1, "age.n", "1"),
              sent("state/NN law/NN", 0, "state.n", "1"),
              category="J")
    )
    return parse_corpus(text, "small")


@pytest.fixture
def data_dir():
    return TESTS_DIR / "data"


@pytest.fixture
def golden_dir():
    return TESTS_DIR / "golden"

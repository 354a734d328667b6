"""
Tests for the corpus model and the vertical file format.
"""

import pytest

from corpus import (
    BROWN_CATEGORIES, Corpus, CorpusParseError, Document, Example, Sentence, Token,
    extract_examples, group_by_key, is_content_tag, load_corpus, parse_corpus, pos_class,
    sense_inventory, serialize_corpus,
)
from conftest import doc, sent


class TestParseCorpus:
    def test_empty_stream(self):
        corpus = parse_corpus("", "empty")
        assert corpus.documents == ()
        assert extract_examples(corpus) == []

    def test_single_annotated_token(self):
        text = "#DOC id=d1 corpus=bc group=d1\nthe\tDT\nstate\tNN\tstate.n=1\ngrew\tVBD\n"
        corpus = parse_corpus(text, "bc")
        tokens = (Token("the", "DT"), Token("state", "NN"), Token("grew", "VBD"))
        expected = Corpus("bc", (Document("d1", "bc", "d1", (Sentence(tokens, {1: ("state.n", "1")}),)),))
        assert corpus == expected
        [ex] = extract_examples(corpus)
        assert (ex.target_key, ex.sense, ex.doc_id, ex.sentence_index, ex.token_index, ex.target_form) == \
            ("state.n", "1", "d1", 0, 1, "state")
        assert ex.grouping_key == "d1"
        assert ex.category is None

    def test_duplicate_document_id_names_second_header(self):
        text = "#DOC id=d1 corpus=bc group=g\na\tDT\n\n#DOC id=d1 corpus=bc group=g\nb\tDT\n"
        with pytest.raises(CorpusParseError) as err:
            parse_corpus(text, "bc")
        assert err.value.line == 4
        assert str(err.value).startswith("line 4:")

    def test_comments_and_crlf(self):
        text = "## made by hand\r\n#DOC id=d1 corpus=bc group=g\r\nState\tNNP\tstate.n=5\r\n"
        [ex] = extract_examples(parse_corpus(text, "bc"))
        assert ex.target_form == "State"
        assert ex.sense == "5"

    def test_case_is_preserved(self):
        text = doc("d1", sent("State/NNP government/NN", 0, "state.n", "5"))
        corpus = parse_corpus(text, "bc")
        assert corpus.documents[0].sentences[0].tokens[0].form == "State"

    def test_blank_lines_split_sentences(self):
        text = doc("d1", sent("a/DT b/NN"), sent("c/NN"))
        corpus = parse_corpus(text + "\n\n\n", "bc")
        assert len(corpus.documents[0].sentences) == 2

    @pytest.mark.parametrize("text, line", [
        ("state\tNN\n", 1),
        ("#DOC id=d1 corpus=bc\nx\tNN\n", 1),
        ("#DOC id=d1 corpus=bc group=g colour=red\n", 1),
        ("#DOC id=d1 corpus=bc group=g\nstate\n", 2),
        ("#DOC id=d1 corpus=bc group=g\nstate\tNN\tstate.n\n", 2),
        ("#DOC id=d1 corpus=bc group=g\nstate\tNN\tstate.n=\n", 2),
        ("#DOC id=d1 corpus=bc group=g\n\nstate\tN N\n", 3),
    ])
    def test_malformed_lines(self, text, line):
        with pytest.raises(CorpusParseError) as err:
            parse_corpus(text, "bc")
        assert err.value.line == line

    def test_category_header(self, small_corpus):
        assert [d.category for d in small_corpus.documents] == ["A", "J"]

    def test_grouping_keys_first_appearance(self):
        text = doc("d2", sent("a/NN"), group="g2") + doc("d1", sent("b/NN"), group="g1") \
            + doc("d3", sent("c/NN"), group="g2")
        assert parse_corpus(text, "bc").grouping_keys() == ["g2", "g1"]


class TestRoundTrip:
    def test_serialize_then_parse(self, small_corpus, state_corpus):
        for corpus in (small_corpus, state_corpus):
            assert parse_corpus(serialize_corpus(corpus), corpus.name) == corpus

    def test_serialize_is_canonical(self, small_corpus):
        text = serialize_corpus(small_corpus)
        assert serialize_corpus(parse_corpus(text, "small")) == text
        assert text.startswith("#DOC id=d1 corpus=bc group=d1 category=A\nthe\tDT\nstate\tNN\tstate.n=1\n")

    def test_load_corpus_uses_file_stem(self, tmp_path, small_corpus):
        path = tmp_path / "brown.txt"
        path.write_text(serialize_corpus(small_corpus), encoding="utf-8")
        corpus = load_corpus(path)
        assert corpus.name == "brown"
        assert extract_examples(corpus) == extract_examples(small_corpus)

    def test_unusual_forms_survive_the_file(self, tmp_path):
        forms = ["#DOC", "#DOCK", "#x", "a b", " ", "x y", "x\x0cy", "x\x85y", "=", "state"]
        tokens = [Token(f, "SYM") for f in forms]
        sentence = Sentence(tokens, {len(tokens) - 1: ("state.n", "1")})
        corpus = Corpus("odd", (Document("d1", "odd", "g1", (sentence,)),))
        path = tmp_path / "odd.txt"
        path.write_bytes(serialize_corpus(corpus).encode("utf-8"))
        assert load_corpus(path) == corpus

    def test_load_corpus_with_crlf_line_ends(self, tmp_path, small_corpus):
        path = tmp_path / "small.txt"
        path.write_bytes(serialize_corpus(small_corpus).replace("\n", "\r\n").encode("utf-8"))
        assert load_corpus(path, "small") == small_corpus

    def test_lone_carriage_return_is_reported(self, tmp_path):
        path = tmp_path / "cr.txt"
        path.write_bytes(b"#DOC id=d corpus=c group=d\na\rb\tNN\n")
        with pytest.raises(CorpusParseError, match="line 2"):
            load_corpus(path)


class TestToken:
    @pytest.mark.parametrize("form", ["", "a\tb", "a\nb", "a\rb", "b\r", "##", "##x", "#DOC ", "#DOC x"])
    def test_unwritable_forms_rejected(self, form):
        with pytest.raises(ValueError):
            Token(form, "NN")

    @pytest.mark.parametrize("pos", ["", "N N", "NN\r"])
    def test_bad_tags_rejected(self, pos):
        with pytest.raises(ValueError):
            Token("state", pos)

    def test_comment_line_inside_sentence_is_skipped(self):
        corpus = parse_corpus(doc("d1", "##x\tNN\nstate\tNN\tstate.n=1\n\n"), "c")
        assert [t.form for t in corpus.documents[0].sentences[0].tokens] == ["state"]


class TestExamples:
    def test_zero_annotations(self):
        corpus = parse_corpus(doc("d1", sent("a/DT b/NN")), "bc")
        assert extract_examples(corpus) == []

    def test_filter_keeps_document_order(self, small_corpus):
        examples = extract_examples(small_corpus, "state.n")
        assert len(examples) == 3
        assert [(e.doc_id, e.sentence_index) for e in examples] == [("d1", 0), ("d1", 2), ("d2", 1)]
        assert [e.sense for e in examples] == ["1", "2", "1"]

    def test_no_filter(self, small_corpus):
        assert len(extract_examples(small_corpus)) == 5

    def test_examples_carry_document_metadata(self, small_corpus):
        examples = extract_examples(small_corpus, "age.n")
        assert [e.category for e in examples] == ["A", "J"]
        assert [e.grouping_key for e in examples] == ["d1", "d2"]

    def test_uid_unique(self, state_corpus):
        examples = extract_examples(state_corpus)
        assert len({e.uid for e in examples}) == len(examples) == 36

    def test_example_validates_target_form(self):
        s = Sentence((Token("a", "DT"), Token("state", "NN")), {1: ("state.n", "1")})
        with pytest.raises(ValueError):
            Example("state.n", "1", "d1", 0, 1, "State", s)

    def test_group_by_key_sorted(self, small_corpus):
        groups = group_by_key(extract_examples(small_corpus))
        assert list(groups) == ["age.n", "state.n"]
        assert len(groups["state.n"]) == 3

    def test_sense_inventory(self, state_corpus):
        inv = sense_inventory(state_corpus)
        assert inv["state.n"] == {"3": 13, "4": 1, "5": 22}


class TestTags:
    @pytest.mark.parametrize("tag, expected", [
        ("NN", True), ("IN", False), ("RBR", True), ("VBZ", True), ("JJ", True),
        ("DT", False), (".", False), ("PRP$", False),
    ])
    def test_is_content_tag(self, tag, expected):
        assert is_content_tag(tag) is expected

    @pytest.mark.parametrize("key, cls", [("state.n", "N"), ("fall.v", "V"), ("bank", "?"), ("a.b.j", "J")])
    def test_pos_class(self, key, cls):
        assert pos_class(key) == cls

    def test_brown_categories(self):
        assert len(BROWN_CATEGORIES) == 15
        assert BROWN_CATEGORIES["A"] == "Press: Reportage"
        assert "I" not in BROWN_CATEGORIES and "O" not in BROWN_CATEGORIES

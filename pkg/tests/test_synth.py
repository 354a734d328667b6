import pytest
from pydantic import ValidationError

from config import SynthSpec, WordSpec, load_config
from corpus import extract_examples, parse_corpus, sense_inventory
from conftest import TESTS_DIR
from synth import document_id, group_key, signature_words, synth, synth_text


def spec(**overrides):
    base = dict(
        corpus_name="t",
        seed=1,
        documents=6,
        examples_per_document=4,
        words=[WordSpec(target_key="bank.n", senses=["1", "2"],
                        signatures={"1": ["river"], "2": ["savings"]}, noise=0.0)],
    )
    base.update(overrides)
    return SynthSpec(**base)


class TestSignatures:
    def test_declared(self):
        word = WordSpec(target_key="bank.n", senses=["1"], signatures={"1": ["river", "muddy"]})
        assert signature_words(word, "1") == ["river", "muddy"]

    def test_generated(self):
        word = WordSpec(target_key="state.n", senses=["1", "2"], signatures_per_sense=2)
        assert signature_words(word, "2") == ["state-2-0", "state-2-1"]

    def test_category_override(self):
        word = WordSpec(target_key="bank.n", senses=["1"], signatures={"1": ["river"]},
                        category_signatures={"J": {"1": ["alluvial"]}})
        assert signature_words(word, "1", "J") == ["alluvial"]
        assert signature_words(word, "1", "A") == ["river"]


class TestLayout:
    def test_ids_and_groups(self):
        s = spec(documents=5, documents_per_group=2)
        assert document_id(s, 3) == "t-003"
        assert [group_key(s, i) for i in range(5)] == ["t/dir000", "t/dir000", "t/dir001", "t/dir001", "t/dir002"]
        assert group_key(spec(), 4) == "t-004"

    def test_sentence_shape(self):
        corpus = synth(spec())
        assert len(corpus.documents) == 6
        for d in corpus.documents:
            assert len(d.sentences) == 4
            for s in d.sentences:
                assert [t.pos for t in s.tokens] == ["DT", "JJ", "NN", "VBZ", "NN", "."]
                [(idx, (key, sense))] = s.annotations.items()
                assert (idx, key) == (2, "bank.n")
                assert s.tokens[1].form == {"1": "river", "2": "savings"}[sense]

    def test_categories_round_robin(self):
        corpus = synth(spec(categories=["A", "J"]))
        assert [d.category for d in corpus.documents] == ["A", "J"] * 3
        assert all(d.category is None for d in synth(spec()).documents)

    def test_words_cycle_within_documents(self):
        words = [WordSpec(target_key="bank.n", senses=["1"]), WordSpec(target_key="fall.v", senses=["3"])]
        corpus = synth(spec(words=words))
        keys = [ex.target_key for ex in extract_examples(corpus)]
        assert keys[:4] == ["bank.n", "fall.v", "bank.n", "fall.v"]
        ex = next(e for e in extract_examples(corpus) if e.target_key == "fall.v")
        assert ex.context.tokens[2].pos == "VB"


class TestDeterminism:
    def test_same_spec_same_text(self):
        assert synth_text(spec()) == synth_text(spec())

    def test_seed_changes_output(self):
        assert synth_text(spec(seed=1)) != synth_text(spec(seed=2))

    def test_text_parses_back(self):
        s = spec(categories=["A"])
        assert parse_corpus(synth_text(s), "t") == synth(s)

    def test_spec_line_round_trips(self):
        s = spec(discourse_bias=0.5)
        line = next(l for l in synth_text(s, [("command", "synth")]).splitlines() if l.startswith("## spec_json="))
        assert SynthSpec.model_validate_json(line[len("## spec_json="):]) == s

    def test_header_first(self):
        lines = synth_text(spec(), [("command", "synth"), ("seed", "1")]).splitlines()
        assert lines[:2] == ["## command=synth", "## seed=1"]
        assert lines[2].startswith("## spec_json=")
        assert lines[3].startswith("#DOC id=t-000 ")


class TestSenseDistribution:
    def test_weights_are_followed(self):
        word = WordSpec(target_key="bank.n", senses=["1", "2"], sense_weights=[1.0, 0.0])
        assert dict(sense_inventory(synth(spec(words=[word])))["bank.n"]) == {"1": 24}

    def test_full_discourse_bias(self):
        word = WordSpec(target_key="bank.n", senses=["1", "2", "3"])
        corpus = synth(spec(words=[word], discourse_bias=1.0))
        for d in corpus.documents:
            assert len({sense for s in d.sentences for _, sense in s.annotations.values()}) == 1

    def test_markers(self):
        corpus = synth(spec(document_marker_rate=1.0))
        for d in corpus.documents:
            assert {s.tokens[4].form for s in d.sentences} == {f"{d.id}-marker"}

    def test_full_noise_uses_confounders(self):
        word = WordSpec(target_key="bank.n", senses=["1", "2"], signatures={"1": ["river"]}, noise=1.0)
        corpus = synth(spec(words=[word], confounders=["other"]))
        assert {s.tokens[1].form for d in corpus.documents for s in d.sentences} == {"other"}


class TestSpecValidation:
    def test_config_section(self):
        s = load_config(TESTS_DIR / "test.yaml").synth
        corpus = synth(s)
        assert corpus.name == "tiny"
        assert [d.category for d in corpus.documents] == ["A", "J", "A", "J"]

    @pytest.mark.parametrize("bad", [
        dict(documents=0),
        dict(seed=-1),
        dict(verbs=[]),
        dict(objects=["two words"]),
        dict(categories=["A B"]),
        dict(discourse_bias=1.5),
        dict(words=[]),
    ])
    def test_rejects(self, bad):
        with pytest.raises(ValidationError):
            spec(**bad)

    def test_word_weights_must_match(self):
        with pytest.raises(ValidationError):
            WordSpec(target_key="bank.n", senses=["1", "2"], sense_weights=[1.0])
        with pytest.raises(ValidationError):
            WordSpec(target_key="bank.n", senses=["1", "1"])

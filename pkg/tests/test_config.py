import pytest
from pydantic import ValidationError

from collocations import LOCAL_CONTENT, FeatureKind
from config import ConfigFileError, RootConfig, RunConfig, WordSpec, load_config, load_synth_spec
from conftest import TESTS_DIR


def test_load_config():
    cfg = load_config(TESTS_DIR / "test.yaml")
    assert isinstance(cfg, RootConfig)
    assert cfg.logging.level == "WARNING"
    assert cfg.training.smoothing == 0.5
    assert cfg.training.kinds == ["local-content", "POS_LEFT"]
    assert cfg.evaluation.k == 5
    assert cfg.evaluation.seed == 7
    assert cfg.evaluation.fold_unit == "document"
    assert cfg.evaluation.equalize is True
    assert cfg.agreement.kinds == ["CW_LEFT", "CW_RIGHT"]
    assert cfg.synth.corpus_name == "tiny"
    assert cfg.synth.words[0].signatures == {"1": ["river"], "2": ["savings"]}


def test_repo_config_matches_defaults():
    assert load_config(TESTS_DIR.parent / "config.yaml") == RootConfig()


def test_load_synth_spec():
    spec = load_synth_spec(TESTS_DIR / "data" / "synth_golden.yaml")
    assert (spec.corpus_name, spec.seed, spec.documents) == ("g", 5, 2)
    assert spec.words[0].target_pos() == "NN"


def test_unknown_kind_rejected(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("training:\n  kinds: [CW_MIDDLE]\n", encoding="utf-8")
    with pytest.raises(ValidationError):
        load_config(str(path))


@pytest.mark.parametrize("field, value", [
    ("k", 1),
    ("seed", -1),
    ("seed", 1 << 64),
    ("smoothing", 0.0),
    ("fold_unit", "sentence"),
    ("workers", 0),
    ("command", "bootstrap"),
])
def test_run_config_validation(field, value):
    with pytest.raises(ValidationError):
        RunConfig(**{"command": "xval", field: value})


def test_echo_order():
    cfg = RunConfig(command="cross", corpus_paths=["a.txt", "b.txt"], kinds=["local-content"], seed=3)
    assert cfg.kind_set() == LOCAL_CONTENT
    assert cfg.echo() == [
        ("command", "cross"), ("corpus", "a.txt"), ("corpus", "b.txt"), ("words", "all"),
        ("kinds", "local-content"), ("k", "10"), ("seed", "3"), ("smoothing", "0.1"),
        ("fold_unit", "example"), ("equalize", "false"),
    ]


def test_word_spec_defaults():
    word = WordSpec(target_key="fall.v", senses=["1"])
    assert word.surface_form() == "fall"
    assert word.target_pos() == "VB"
    assert WordSpec(target_key="falls", senses=["1"], pos="VBZ").target_pos() == "VBZ"
    assert FeatureKind.CW_LEFT.value == "CW_LEFT"


@pytest.mark.parametrize("text", ["logging: [unclosed\n", "training:\n  k: 3\n bad: 1\n", "a: b: c\n"])
def test_malformed_yaml_is_a_value_error(tmp_path, text):
    path = tmp_path / "bad.yaml"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ConfigFileError, match="invalid YAML"):
        load_config(path)
    with pytest.raises(ValueError):
        load_synth_spec(path)


@pytest.mark.parametrize("text, kind", [("- a\n", "list"), ("plain\n", "str"), ("12\n", "int")])
def test_top_level_must_be_a_mapping(tmp_path, text, kind):
    path = tmp_path / "scalar.yaml"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ConfigFileError, match=f"got {kind}"):
        load_config(path)


def test_empty_file_means_defaults(tmp_path):
    path = tmp_path / "empty.yaml"
    path.write_text("", encoding="utf-8")
    assert load_config(path) == RootConfig()

from __future__ import annotations
from pydantic import BaseModel, Field, field_validator, model_validator
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union
import yaml

from collocations import ALL_KINDS, parse_kinds, kinds_label

SEED_MAX = (1 << 64) - 1


def _check_kinds(v: List[str]) -> List[str]:
    # raises UnknownKindError (a ValueError) so pydantic reports it
    parse_kinds(v)
    return v


class LoggingConfig(BaseModel):
    level: str = Field("INFO", pattern=r"^(DEBUG|INFO|WARNING|ERROR|CRITICAL)$")


class TrainingConfig(BaseModel):
    """Decision-list training parameters."""
    smoothing: float = Field(0.1, gt=0.0)  # replaces an empty competing-sense count
    kinds: List[str] = Field(default_factory=lambda: ["all"])

    @field_validator("kinds")
    @classmethod
    def known_kinds(cls, v):
        return _check_kinds(v)


class EvaluationConfig(BaseModel):
    k: int = Field(10, ge=2)
    seed: int = Field(0, ge=0, le=SEED_MAX)
    fold_unit: str = Field("example", pattern=r"^(example|document)$")
    equalize: bool = False
    workers: int = Field(1, ge=1)


class AgreementConfig(BaseModel):
    kinds: List[str] = Field(default_factory=lambda: ["local-content"])

    @field_validator("kinds")
    @classmethod
    def known_kinds(cls, v):
        return _check_kinds(v)


class WordSpec(BaseModel):
    """One target word of a synthetic corpus."""
    target_key: str = Field(..., pattern=r"^[^\s=]+$")
    form: Optional[str] = None  # surface form, defaults to the key stem
    pos: Optional[str] = None   # PoS of the target, defaults from the key suffix
    senses: List[str]
    sense_weights: Optional[List[float]] = None
    signatures: Dict[str, List[str]] = Field(default_factory=dict)
    signatures_per_sense: int = Field(1, ge=1)
    category_signatures: Dict[str, Dict[str, List[str]]] = Field(default_factory=dict)
    noise: float = Field(0.1, ge=0.0, le=1.0)

    @field_validator("senses")
    @classmethod
    def non_empty_senses(cls, v):
        if not v:
            raise ValueError("a word needs at least one sense")
        if len(set(v)) != len(v):
            raise ValueError("sense labels must be distinct")
        return v

    @model_validator(mode="after")
    def weights_match_senses(self):
        if self.sense_weights is not None:
            if len(self.sense_weights) != len(self.senses):
                raise ValueError("sense_weights must have one entry per sense")
            if any(w < 0 for w in self.sense_weights) or sum(self.sense_weights) <= 0:
                raise ValueError("sense_weights must be non-negative with a positive sum")
        return self

    @property
    def stem(self) -> str:
        return self.target_key.rsplit(".", 1)[0] if "." in self.target_key else self.target_key

    def surface_form(self) -> str:
        return self.form or self.stem

    def target_pos(self) -> str:
        if self.pos:
            return self.pos
        suffix = self.target_key.rsplit(".", 1)[-1].lower() if "." in self.target_key else ""
        return {"n": "NN", "v": "VB", "a": "JJ", "j": "JJ", "r": "RB"}.get(suffix, "NN")


def _default_words() -> List[WordSpec]:
    return [
        WordSpec(target_key="state.n", senses=["1", "2", "3", "4", "5", "6"],
                 signatures_per_sense=3, noise=0.2),
        WordSpec(target_key="point.n", senses=["2", "4", "9"],
                 sense_weights=[0.5, 0.3, 0.2], signatures_per_sense=2, noise=0.2),
        WordSpec(target_key="fall.v", senses=["1", "3"], form="falls", pos="VBZ",
                 signatures_per_sense=2, noise=0.3),
    ]


class SynthSpec(BaseModel):
    """Everything a synthetic corpus is a pure function of."""
    corpus_name: str = Field("synth", pattern=r"^\S+$")
    seed: int = Field(0, ge=0, le=SEED_MAX)
    documents: int = Field(20, ge=1)
    documents_per_group: int = Field(1, ge=1)  # 1: files as units, >1: directories
    categories: List[str] = Field(default_factory=list)
    examples_per_document: int = Field(5, ge=1)
    words: List[WordSpec] = Field(default_factory=_default_words)
    confounders: List[str] = Field(default_factory=lambda: ["other", "new", "whole", "same", "certain", "main"])
    verbs: List[str] = Field(default_factory=lambda: ["seems", "remains", "looks", "stays"])
    objects: List[str] = Field(default_factory=lambda: ["today", "again", "now", "anyway"])
    document_marker_rate: float = Field(0.0, ge=0.0, le=1.0)
    discourse_bias: float = Field(0.0, ge=0.0, le=1.0)

    @field_validator("words")
    @classmethod
    def non_empty_words(cls, v):
        if not v:
            raise ValueError("at least one word must be defined")
        return v

    @field_validator("confounders", "verbs", "objects")
    @classmethod
    def non_empty_pool(cls, v):
        if not v:
            raise ValueError("word pools must not be empty")
        if any(not w or any(ch.isspace() for ch in w) for w in v):
            raise ValueError("pool words must be non-empty and contain no whitespace")
        return v

    @field_validator("categories")
    @classmethod
    def spaceless_categories(cls, v):
        if any(not c or any(ch.isspace() for ch in c) for c in v):
            raise ValueError("category labels must be non-empty and contain no whitespace")
        return v


class RootConfig(BaseModel):
    logging: LoggingConfig = LoggingConfig()
    training: TrainingConfig = TrainingConfig()
    evaluation: EvaluationConfig = EvaluationConfig()
    agreement: AgreementConfig = AgreementConfig()
    synth: SynthSpec = Field(default_factory=SynthSpec)


COMMANDS = ("train", "tag", "xval", "cross", "categories", "agree", "synth", "inventory", "summary")


class RunConfig(BaseModel):
    """One fully resolved CLI invocation."""
    command: str
    corpus_paths: List[str] = Field(default_factory=list)
    words: List[str] = Field(default_factory=list)  # empty: every target key
    kinds: List[str] = Field(default_factory=lambda: ["all"])
    k: int = Field(10, ge=2)
    seed: int = Field(0, ge=0, le=SEED_MAX)
    smoothing: float = Field(0.1, gt=0.0)
    fold_unit: str = Field("example", pattern=r"^(example|document)$")
    equalize: bool = False
    workers: int = Field(1, ge=1)
    out: Optional[str] = None
    rules_path: Optional[str] = None
    spec_path: Optional[str] = None
    details_path: Optional[str] = None
    output_format: str = Field("rules", pattern=r"^(rules|table)$")
    seed_from_flag: bool = False  # synth: --seed replaces the SynthSpec seed

    @field_validator("command")
    @classmethod
    def known_command(cls, v):
        if v not in COMMANDS:
            raise ValueError(f"unknown command {v!r}")
        return v

    @field_validator("kinds")
    @classmethod
    def known_kinds(cls, v):
        return _check_kinds(v)

    def kind_set(self):
        return parse_kinds(self.kinds)

    def echo(self) -> List[Tuple[str, str]]:
        """Resolved settings as (key, value) pairs for `##` artifact headers."""
        pairs: List[Tuple[str, str]] = [("command", self.command)]
        pairs.extend(("corpus", p) for p in self.corpus_paths)
        if self.rules_path:
            pairs.append(("rules", self.rules_path))
        if self.spec_path:
            pairs.append(("spec", self.spec_path))
        pairs.append(("words", ",".join(self.words) if self.words else "all"))
        pairs.append(("kinds", kinds_label(self.kind_set())))
        pairs.append(("k", str(self.k)))
        pairs.append(("seed", str(self.seed)))
        pairs.append(("smoothing", repr(self.smoothing)))
        pairs.append(("fold_unit", self.fold_unit))
        pairs.append(("equalize", "true" if self.equalize else "false"))
        return pairs


class ConfigFileError(ValueError):
    """Unreadable YAML or a document that is not a mapping."""


def _read_mapping(path: Union[str, Path]) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = yaml.safe_load(fh)
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            where = f"line {mark.line + 1}: " if mark is not None else ""
            raise ConfigFileError(f"{where}invalid YAML ({getattr(e, 'problem', None) or e})") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigFileError(f"top level must be a mapping, got {type(data).__name__}")
    return data


def load_config(path: Union[str, Path]) -> RootConfig:
    return RootConfig(**_read_mapping(path))


def load_synth_spec(path: Union[str, Path]) -> SynthSpec:
    return SynthSpec(**_read_mapping(path))


__all__ = [
    "LoggingConfig", "TrainingConfig", "EvaluationConfig", "AgreementConfig",
    "WordSpec", "SynthSpec", "RootConfig", "RunConfig", "COMMANDS",
    "ConfigFileError", "load_config", "load_synth_spec", "ALL_KINDS",
]

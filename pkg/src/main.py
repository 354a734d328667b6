"""Command-line entry point: one subcommand per protocol, TSV artifacts out.

Every artifact starts with `##` lines echoing the resolved settings, so the
file alone is enough to re-run the command. Exit codes: 0 ok, 1 usage,
2 data error.
"""

from __future__ import annotations
import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from config import COMMANDS, RootConfig, RunConfig, load_config, load_synth_spec
from corpus import Corpus, CorpusParseError, extract_examples, group_by_key, load_corpus, pos_class, sense_inventory
from collocations import UnknownKindError, extract_features, parse_kinds
from decision_list import (
    ABSTAIN, DecisionList, count, dump_rules, load_rules, predict, restrict, sense_table, train_from_counts,
)
from evaluation import (
    FoldUnit, format_fraction, run_categories, run_cross, run_summary, run_xval, score,
)
from agreement import compare_corpora, format_agreement, format_contradictions
from synth import synth_text
from logging_utils import configure_logging

log = logging.getLogger("wsd")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

TAG_HEADER = ("doc_id", "sentence", "token", "word", "gold", "predicted", "weight", "feature")

# how many --corpus paths each command takes: (min, max)
CORPUS_ARITY: Dict[str, Tuple[int, Optional[int]]] = {
    "train": (1, 1),
    "tag": (1, 2),
    "xval": (1, 1),
    "cross": (2, 2),
    "categories": (2, 2),
    "agree": (2, 2),
    "synth": (0, 0),
    "inventory": (1, None),
    "summary": (2, 2),
}


class CliError(Exception):
    """A one-line diagnostic plus the exit code to leave with."""

    def __init__(self, message: str, exit_code: int = EXIT_DATA):
        super().__init__(message)
        self.exit_code = exit_code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message, EXIT_USAGE)


def _one_line(e: Exception) -> str:
    if isinstance(e, ValidationError):
        err = e.errors()[0]
        loc = ".".join(str(p) for p in err.get("loc", ()))
        return f"{loc}: {err.get('msg', 'invalid value')}" if loc else err.get("msg", str(e))
    text = str(e).strip()
    return text.splitlines()[0] if text else type(e).__name__


# ---------------------------------------------------------------------------
# parser


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="Path to config YAML (built-in defaults when omitted)")
    common.add_argument("--log-level", default=None, help="Override log level (DEBUG/INFO/...)")
    common.add_argument("--corpus", action="append", default=[], metavar="PATH",
                        help="Corpus file; repeat where a command needs two")
    common.add_argument("--words", default=None, help="Comma-separated target keys (default: all)")
    common.add_argument("--kinds", default=None,
                        help="CW_LEFT,...|local-content|local-posfun|global|all")
    common.add_argument("--k", type=int, default=None, help="Number of folds (default 10)")
    common.add_argument("--seed", type=int, default=None, help="64-bit seed (default 0)")
    common.add_argument("--smoothing", type=float, default=None,
                        help="Replaces a zero competing-sense count (default 0.1)")
    common.add_argument("--fold-unit", choices=[u.value for u in FoldUnit], default=None)
    common.add_argument("--equalize", action="store_true", default=None,
                        help="Same number of examples per word on both sides")
    common.add_argument("--workers", type=int, default=None, help="Parallel words (default 1)")
    common.add_argument("--out", default=None, metavar="PATH", help="Output file (default: stdout)")
    common.add_argument("--rules", default=None, metavar="PATH", help="Rule dump to tag with")
    common.add_argument("--spec", default=None, metavar="PATH", help="Synthetic corpus spec (YAML)")
    common.add_argument("--details", default=None, metavar="PATH", help="Contradiction listing (agree)")
    common.add_argument("--format", dest="output_format", choices=["rules", "table"], default="rules",
                        help="train output: rule dump or sense-count table")

    parser = _Parser(
        description="Collocation Sense Lab: decision-list word sense disambiguation experiments",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s train --corpus bc.txt --words state.n --format table
  %(prog)s xval --corpus bc.txt --k 10 --fold-unit document
  %(prog)s cross --corpus bc.txt --corpus wsj.txt --equalize
  %(prog)s categories --corpus bc.txt --corpus wsj.txt
  %(prog)s agree --corpus bc.txt --corpus wsj.txt --details contra.tsv
  %(prog)s synth --spec synth.yaml --out synth.txt
        """,
    )
    subparsers = parser.add_subparsers(dest="command", metavar="command")
    helps = {
        "train": "Train decision lists and dump their rules",
        "tag": "Tag a corpus with saved or freshly trained lists",
        "xval": "k-fold cross-validation inside one corpus",
        "cross": "Train on the first corpus, tag the second",
        "categories": "Tag each category of the first corpus (second corpus vs rest)",
        "agree": "Shared and contradictory collocations between two corpora",
        "synth": "Write a seeded synthetic corpus",
        "inventory": "Senses and example counts per word",
        "summary": "Overall in-corpus and cross-corpus results",
    }
    for name in COMMANDS:
        subparsers.add_parser(name, parents=[common], help=helps[name])
    return parser


def resolve_run_config(args: argparse.Namespace, root: RootConfig) -> RunConfig:
    """Flags over config file over built-in defaults."""
    if args.kinds is not None:
        try:
            parse_kinds(args.kinds)
        except UnknownKindError as e:
            raise CliError(f"--kinds {args.kinds}: {e}", EXIT_USAGE) from None
        kinds = [k for k in args.kinds.split(",") if k.strip()]
    elif args.command == "agree":
        kinds = list(root.agreement.kinds)
    else:
        kinds = list(root.training.kinds)

    lo, hi = CORPUS_ARITY[args.command]
    n = len(args.corpus)
    if n < lo or (hi is not None and n > hi):
        wanted = str(lo) if lo == hi else (f"{lo} to {hi}" if hi is not None else f"at least {lo}")
        raise CliError(f"--corpus: {args.command} takes {wanted} corpus path(s), got {n}", EXIT_USAGE)
    if args.command == "tag" and (n == 1) != (args.rules is not None):
        raise CliError("--rules: tag takes either --rules RULES --corpus TEST or --corpus TRAIN --corpus TEST",
                       EXIT_USAGE)

    ev = root.evaluation
    try:
        return RunConfig(
            command=args.command,
            corpus_paths=list(args.corpus),
            words=[w.strip() for w in args.words.split(",") if w.strip()] if args.words else [],
            kinds=kinds,
            k=args.k if args.k is not None else ev.k,
            seed=args.seed if args.seed is not None else ev.seed,
            smoothing=args.smoothing if args.smoothing is not None else root.training.smoothing,
            fold_unit=args.fold_unit or ev.fold_unit,
            equalize=args.equalize if args.equalize is not None else ev.equalize,
            workers=args.workers if args.workers is not None else ev.workers,
            out=args.out,
            rules_path=args.rules,
            spec_path=args.spec,
            details_path=args.details,
            output_format=args.output_format,
            seed_from_flag=args.seed is not None,
        )
    except ValidationError as e:
        err = e.errors()[0]
        flag = "--" + str(err["loc"][0]).replace("_", "-") if err.get("loc") else "argument"
        raise CliError(f"{flag}: {err.get('msg', 'invalid value')}", EXIT_USAGE) from None


# ---------------------------------------------------------------------------
# helpers


def _load(path: str) -> Corpus:
    try:
        return load_corpus(path)
    except OSError as e:
        raise CliError(f"--corpus {path}: {e.strerror or e}") from None
    except (CorpusParseError, ValueError) as e:
        raise CliError(f"--corpus {path}: {_one_line(e)}") from None


def _write(text: str, path: Optional[str], flag: str = "--out") -> None:
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as e:
        raise CliError(f"{flag} {path}: {e.strerror or e}") from None
    log.info("artifact_written path=%s bytes=%d", path, len(text.encode("utf-8")))


def _header(pairs: Sequence[Tuple[str, str]]) -> str:
    return "".join(f"## {k}={v}\n" for k, v in pairs)


def _keys(cfg: RunConfig) -> Optional[List[str]]:
    return list(cfg.words) if cfg.words else None


# ---------------------------------------------------------------------------
# commands


def cmd_train(cfg: RunConfig, root: RootConfig) -> None:
    """Train one decision list per word; rule dump or sense-count table."""
    corpus = _load(cfg.corpus_paths[0])
    kinds = cfg.kind_set()
    by_key = group_by_key(extract_examples(corpus))
    keys = cfg.words or list(by_key)
    parts: List[str] = [_header(cfg.echo())]
    trained = 0
    for key in keys:
        examples = by_key.get(key)
        if not examples:
            log.warning("train_skip word=%s reason=no_examples", key)
            continue
        counts = count(examples, kinds)
        dl = train_from_counts(key, counts, kinds, cfg.smoothing)
        log.info("train_word_done word=%s examples=%d rules=%d", key, len(examples), len(dl))
        trained += 1
        if cfg.output_format == "table":
            senses = sorted({ex.sense for ex in examples})
            parts.append(f"## word={key}\n" + sense_table(dl, counts, senses))
        else:
            parts.append(dump_rules(dl))
    if not trained:
        raise CliError(f"--words: no examples of {','.join(keys) or 'any word'} in {corpus.name}")
    _write("".join(parts), cfg.out)


def cmd_tag(cfg: RunConfig, root: RootConfig) -> None:
    """Tag every annotated occurrence of the test corpus; score against gold."""
    kinds = cfg.kind_set()
    if cfg.rules_path:
        try:
            with open(cfg.rules_path, "r", encoding="utf-8") as fh:
                lists = load_rules(fh.read())
        except OSError as e:
            raise CliError(f"--rules {cfg.rules_path}: {e.strerror or e}") from None
        except ValueError as e:
            raise CliError(f"--rules {cfg.rules_path}: {_one_line(e)}") from None
        test = _load(cfg.corpus_paths[0])
    else:
        train_corpus = _load(cfg.corpus_paths[0])
        test = _load(cfg.corpus_paths[1])
        lists = {}
        for key, examples in group_by_key(extract_examples(train_corpus)).items():
            lists[key] = train_from_counts(key, count(examples, kinds), kinds, cfg.smoothing)

    restricted: Dict[str, DecisionList] = {key: restrict(dl, kinds) for key, dl in lists.items()}
    wanted = set(cfg.words) if cfg.words else None
    examples = [ex for ex in extract_examples(test) if wanted is None or ex.target_key in wanted]
    rows, decisions = [], []
    for ex in examples:
        dl = restricted.get(ex.target_key)
        decision = predict(dl, extract_features(ex)) if dl is not None else ABSTAIN
        decisions.append(decision)
        if decision.answered:
            predicted, weight, feature = decision.sense, f"{decision.rule.weight:.6f}", str(decision.rule.feature)
        else:
            predicted = weight = feature = "-"
        rows.append("\t".join((ex.doc_id, str(ex.sentence_index), str(ex.token_index), ex.target_key,
                               ex.sense, predicted, weight, feature)))
    total = score(decisions, [ex.sense for ex in examples])
    log.info("tag_done corpus=%s examples=%d answered=%d correct=%d",
             test.name, total.total, total.answered, total.correct)
    if total.empty:
        precision = coverage = "EMPTY"
    else:
        precision, coverage = format_fraction(total.precision_fraction), format_fraction(total.coverage_fraction)
    metadata = cfg.echo() + [("precision", precision), ("coverage", coverage)]
    body = "\t".join(TAG_HEADER) + "\n" + "".join(r + "\n" for r in rows)
    _write(_header(metadata) + body, cfg.out)


def cmd_xval(cfg: RunConfig, root: RootConfig) -> None:
    corpus = _load(cfg.corpus_paths[0])
    report = run_xval(corpus, _keys(cfg), cfg.kind_set(), cfg.k, cfg.seed, FoldUnit(cfg.fold_unit),
                      cfg.smoothing, cfg.workers)
    _write(report.to_tsv(cfg.echo()), cfg.out)


def cmd_cross(cfg: RunConfig, root: RootConfig) -> None:
    train_corpus, test_corpus = (_load(p) for p in cfg.corpus_paths)
    report = run_cross(train_corpus, test_corpus, _keys(cfg), cfg.kind_set(), cfg.seed, cfg.equalize,
                       cfg.smoothing, cfg.workers)
    _write(report.to_tsv(cfg.echo()), cfg.out)


def cmd_categories(cfg: RunConfig, root: RootConfig) -> None:
    categorized, other = (_load(p) for p in cfg.corpus_paths)
    report = run_categories(categorized, other, _keys(cfg), cfg.kind_set(), cfg.seed, cfg.equalize,
                            cfg.smoothing, cfg.workers)
    _write(report.to_tsv(cfg.echo()), cfg.out)


def cmd_summary(cfg: RunConfig, root: RootConfig) -> None:
    a, b = (_load(p) for p in cfg.corpus_paths)
    report = run_summary(a, b, _keys(cfg), cfg.kind_set(), cfg.k, cfg.seed, cfg.equalize,
                         cfg.smoothing, cfg.workers)
    _write(report.to_tsv(cfg.echo()), cfg.out)


def cmd_agree(cfg: RunConfig, root: RootConfig) -> None:
    """Agreement table to --out, contradiction listing to --details."""
    a, b = (_load(p) for p in cfg.corpus_paths)
    results = compare_corpora(a, b, _keys(cfg), cfg.kind_set())
    metadata = cfg.echo() + [("corpus_a", a.name), ("corpus_b", b.name)]
    _write(_header(metadata) + format_agreement((word, stats) for word, stats, _ in results), cfg.out)
    if cfg.details_path:
        contradictions = [c for _, _, contra in results for c in contra]
        _write(_header(metadata) + format_contradictions(contradictions), cfg.details_path, "--details")


def cmd_synth(cfg: RunConfig, root: RootConfig) -> None:
    if cfg.spec_path:
        try:
            spec = load_synth_spec(cfg.spec_path)
        except OSError as e:
            raise CliError(f"--spec {cfg.spec_path}: {e.strerror or e}") from None
        except ValueError as e:
            raise CliError(f"--spec {cfg.spec_path}: {_one_line(e)}") from None
    else:
        spec = root.synth
    if cfg.seed_from_flag:
        spec = spec.model_copy(update={"seed": cfg.seed})
    cfg = cfg.model_copy(update={"seed": spec.seed})
    _write(synth_text(spec, cfg.echo()), cfg.out)


def cmd_inventory(cfg: RunConfig, root: RootConfig) -> None:
    """word, pos, #senses, then #examples per corpus."""
    corpora = [_load(p) for p in cfg.corpus_paths]
    inventories = [sense_inventory(c) for c in corpora]
    keys = sorted(set().union(*inventories))
    if cfg.words:
        keys = [k for k in keys if k in set(cfg.words)]
    lines = ["\t".join(["word", "pos", "#senses"] + [f"#ex {c.name}" for c in corpora])]
    for key in keys:
        senses = set()
        for inv in inventories:
            senses |= set(inv.get(key, {}))
        counts = [str(sum(inv[key].values())) if key in inv else "0" for inv in inventories]
        lines.append("\t".join([key, pos_class(key), str(len(senses))] + counts))
    _write(_header(cfg.echo()) + "\n".join(lines) + "\n", cfg.out)


COMMAND_HANDLERS: Dict[str, Callable[[RunConfig, RootConfig], None]] = {
    "train": cmd_train,
    "tag": cmd_tag,
    "xval": cmd_xval,
    "cross": cmd_cross,
    "categories": cmd_categories,
    "agree": cmd_agree,
    "synth": cmd_synth,
    "inventory": cmd_inventory,
    "summary": cmd_summary,
}


def run(cfg: RunConfig, root: Optional[RootConfig] = None) -> int:
    """Execute one resolved invocation; returns the exit code."""
    root = root or RootConfig()
    log.info("run_start command=%s corpora=%d seed=%d", cfg.command, len(cfg.corpus_paths), cfg.seed)
    try:
        COMMAND_HANDLERS[cfg.command](cfg, root)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except ValueError as e:
        # FoldError, ProtocolError and other data problems
        log.error("run_failed command=%s error=%s", cfg.command, type(e).__name__)
        print(f"error: {_one_line(e)}", file=sys.stderr)
        return EXIT_DATA
    log.info("run_done command=%s", cfg.command)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        if args.config:
            try:
                root = load_config(args.config)
            except OSError as e:
                raise CliError(f"--config {args.config}: {e.strerror or e}") from None
            except ValueError as e:
                raise CliError(f"--config {args.config}: {_one_line(e)}") from None
        else:
            root = RootConfig()
        configure_logging(args.log_level or root.logging.level)
        log.debug("config_loaded json=%s", root.model_dump_json())
        cfg = resolve_run_config(args, root)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    return run(cfg, root)


if __name__ == "__main__":
    sys.exit(main())

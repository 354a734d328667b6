#!/usr/bin/env python3
"""Demo: how much precision a decision list loses when the corpus changes.

This script:
1. Generates two synthetic corpora whose signature collocations only partly overlap
2. Runs cross-validation inside the second corpus
3. Trains on the first corpus and tags the second
4. Compares the collocations of the two corpora
"""

import sys
sys.path.append('src')

from config import SynthSpec, WordSpec
from synth import synth
from evaluation import run_xval, run_cross
from agreement import compare_corpora
from logging_utils import configure_logging


def make_corpus(name, seed, signatures):
    word = WordSpec(target_key="bank.n", senses=["1", "2"], signatures=signatures, noise=0.1)
    return synth(SynthSpec(corpus_name=name, seed=seed, documents=40, words=[word]))


def main():
    configure_logging("WARNING")

    print("=== Cross-Corpus Demo ===\n")

    river = [f"river{i}" for i in range(10)]
    money = [f"money{i}" for i in range(10)]
    a = make_corpus("alpha", 1, {"1": river, "2": money})
    # only the first three signature words per sense carry over
    b = make_corpus("beta", 2, {"1": river[:3] + ["muddy", "wide", "steep", "green", "low", "far", "wet"],
                                "2": money[:3] + ["loan", "vault", "teller", "branch", "cash", "fee", "rate"]})

    xval = run_xval(b, k=10).row("ALL", "OVERALL").score
    cross = run_cross(a, b).row("ALL", "OVERALL").score
    print(f"in-corpus  precision={xval.precision:.3f} coverage={xval.coverage:.3f}")
    print(f"cross      precision={cross.precision:.3f} coverage={cross.coverage:.3f}")

    print("\nCollocation agreement (local content words):")
    for word, stats, contradictions in compare_corpora(a, b):
        print(f"  {word}: {stats.count_a} vs {stats.count_b} collocations, "
              f"{stats.shared_pct:.1f}% shared, {stats.contradiction_pct:.1f}% of those contradict")
        for c in contradictions[:5]:
            print(f"    {c.feature}: {c.sense_a} vs {c.sense_b}")


if __name__ == "__main__":
    main()

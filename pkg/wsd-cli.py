#!/usr/bin/env python3
"""
Collocation Sense Lab CLI

Decision-list word sense disambiguation experiments over sense-tagged
corpora in the vertical format (see docs/CORPUS_FORMAT.md).

Usage:
    wsd-cli.py train --corpus bc.txt --words state.n
    wsd-cli.py xval --corpus bc.txt --fold-unit document
    wsd-cli.py cross --corpus bc.txt --corpus wsj.txt
    wsd-cli.py agree --corpus bc.txt --corpus wsj.txt --details contra.tsv
    wsd-cli.py synth --spec synth.yaml --out synth.txt
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent / "src"))

from main import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())

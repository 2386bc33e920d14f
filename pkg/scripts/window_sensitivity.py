"""Compare sentence and whole-text co-occurrence windows on a corpus's JMS networks.

    python3 scripts/window_sensitivity.py [corpus.csv]
"""

from __future__ import annotations

import sys
from importlib import resources
from pathlib import Path

from jmsnet.corpus_io import load_corpus
from jmsnet.pipeline import build_network
from jmsnet.textprep import StopPolicy


def main() -> int:
    path = Path(sys.argv[1]) if len(sys.argv) > 1 else \
        Path(str(resources.files("jmsnet.data").joinpath("mini_corpus.csv")))
    corpus = load_corpus(path)
    texts = {r.id: r.mission for r in corpus}
    for merge in (False, True):
        policy = StopPolicy(merge_plural_singular=merge)
        for window in ("sentence", "whole_text"):
            m = build_network("jms", texts, policy, window, seed=42).metrics
            print(f"merge_plurals={merge!s:5s} window={window:10s} n={m.n:4d} m={m.m:5d} "
                  f"density={m.density:.4f} apl={m.average_path_length:.3f} "
                  f"clusters={m.community_count} Q={m.modularity:.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

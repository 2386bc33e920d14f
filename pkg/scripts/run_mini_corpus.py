"""Full pipeline on the bundled 20-record synthetic corpus.

    python3 scripts/run_mini_corpus.py results/mini
"""

from __future__ import annotations

import sys
from importlib import resources
from pathlib import Path

from jmsnet.pipeline import PipelineConfig, run_and_write


def main() -> int:
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "results/mini")
    corpus = Path(str(resources.files("jmsnet.data").joinpath("mini_corpus.csv")))
    bundle, written = run_and_write(PipelineConfig(input=corpus, out=out, seed=42))
    for name, net in bundle.networks.items():
        m = net.metrics
        print(f"{name:12s} n={m.n:3d} m={m.m:4d} density={m.density:.3f} "
              f"apl={m.average_path_length:.2f} clusters={m.community_count} "
              f"Q={m.modularity:.3f} top={[t for t, _ in net.top_terms[:5]]}")
    fkgl = bundle.summaries["fkgl"]["all"]
    k = bundle.summaries["yules_k"]["all"]
    print(f"FKGL median {fkgl.median:.2f} (IQR {fkgl.q1:.2f}-{fkgl.q3:.2f}); "
          f"Yule's K median {k.median:.2f} (IQR {k.q1:.2f}-{k.q3:.2f})")
    for t in bundle.tests:
        if t.test in ("pearson", "wilcoxon_rank_sum", "kruskal_wallis"):
            print(f"{t.test:18s} {' vs '.join(t.group_labels)}: stat={t.statistic:.3f} "
                  f"p={t.p_value:.4f} effect={t.effect_size}")
    print(f"{len(written)} files written to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

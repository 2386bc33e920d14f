"""Rebuild the golden bundle used by the determinism acceptance check.

Run only after a deliberate, reviewed change to pipeline output:

    python3 scripts/regenerate_golden.py
"""

from __future__ import annotations

import hashlib
from importlib import resources
from pathlib import Path

from jmsnet.pipeline import PipelineConfig, bundle_files, run_pipeline

DATA = Path(__file__).resolve().parents[1] / "tests" / "data"


def main() -> None:
    corpus = Path(str(resources.files("jmsnet.data").joinpath("mini_corpus.csv")))
    config = PipelineConfig(input=corpus, seed=42)
    files = bundle_files(run_pipeline(config), config.formats)
    (DATA / "golden_bundle.json").write_text(files["bundle.json"], encoding="utf-8")
    manifest = "".join(
        f"{hashlib.sha256(content.encode('utf-8')).hexdigest()}  {name}\n"
        for name, content in sorted(files.items())
    )
    (DATA / "golden_files.sha256").write_text(manifest, encoding="utf-8")
    print(f"wrote golden bundle and {len(files)} file hashes to {DATA}")


if __name__ == "__main__":
    main()

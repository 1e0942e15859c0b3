#!/usr/bin/env python3
"""Regenerate the bundled reference runs under src/pcmfill/data/.

One artifact per item count n = 2..6: a full sweep over every connected
class at every level, plus (for n >= 4) the scored metagraph export and the
extracted filling sequences.  Deterministic: fixed master seed, fixed N.
"""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from pcmfill.metagraph import build_metagraph, export_metagraph, extract_sequences, mark_optimal
from pcmfill.simulate import SimConfig, run_level_sweep
from pcmfill.store import RunArtifact, save_run

MASTER_SEED = 20220905
N_SAMPLES = 30_000
OUT_DIR = pathlib.Path(__file__).resolve().parents[1] / "src" / "pcmfill" / "data"


def main():
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    for n in range(2, 7):
        config = SimConfig(n=n, n_samples=N_SAMPLES, master_seed=MASTER_SEED)
        scores = run_level_sweep(config)
        artifact = RunArtifact.build(config, scores)
        if n >= 4:
            scored = mark_optimal(build_metagraph(n), scores, margins=artifact.margins)
            artifact.metagraph = json.loads(export_metagraph(scored, "json"))
            artifact.sequences = [seq.to_dict() for seq in extract_sequences(scored)]
        path = OUT_DIR / f"reference_n{n}.json"
        save_run(artifact, path)
        print(f"wrote {path} ({len(scores)} classes)")


if __name__ == "__main__":
    main()

"""Build the GRAPH of graphs, mark optima, and read off question sequences.

Run with: python demos/04_graph_of_graphs.py
It writes metagraph_n5.dot next to itself; render it with
    dot -Tpng metagraph_n5.dot -o metagraph_n5.png
"""

import pathlib

from pcmfill import (
    SimConfig,
    build_metagraph,
    export_metagraph,
    extract_sequences,
    mark_optimal,
    run_level_sweep,
)

n = 5
print(f"scoring all 21 patterns for n={n} (a minute at most)...")
scores = run_level_sweep(SimConfig(n=n, n_samples=20_000, master_seed=11))

meta = build_metagraph(n)
scored = mark_optimal(meta, scores)

print("per-level optimum:")
for e, g6 in sorted(scored.optimal.items()):
    ties = scored.near_optimal[e]
    note = f" (within margin: {', '.join(ties)})" if ties else ""
    print(f"  e={e}: {g6}{note}")

out = pathlib.Path(__file__).with_name(f"metagraph_n{n}.dot")
out.write_text(export_metagraph(scored, "dot"))
print(f"\nwrote {out}")

print("\nquestion sequences (apostrophes mark interchangeable steps):")
for seq in extract_sequences(scored):
    print(f"  {seq.kind} (first constrained prefix at e={seq.start_level}):")
    boundary = 0
    for idx, (i, j) in enumerate(seq.steps):
        grp = seq.group_of_step(idx)
        mark = "'" if seq.groups[grp] > 1 else " "
        flag = seq.realized_levels.get(idx + 1, "")
        note = "  [near-optimal]" if flag == "near_optimal" else ""
        print(f"    #{idx + 1}{mark} a{i + 1}{j + 1}{note}")

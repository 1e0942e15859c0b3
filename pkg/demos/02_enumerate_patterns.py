"""Enumerate the non-isomorphic connected filling patterns for small n.

Run with: python demos/02_enumerate_patterns.py
"""

from pcmfill import enumerate_connected_classes

for n in (4, 5, 6):
    counts = []
    for e in range(n - 1, n * (n - 1) // 2 + 1):
        counts.append(len(enumerate_connected_classes(n, e)))
    total = sum(counts)
    print(f"n={n}: {total} connected patterns, per edge count {counts}")

print("\nthe five-vertex patterns with six comparisons:")
for cls in enumerate_connected_classes(5, 6):
    flags = []
    if cls.is_bipartite:
        flags.append("bipartite")
    if cls.k_regular is not None:
        flags.append(f"{cls.k_regular}-regular")
    if cls.k_quasi_regular is not None:
        flags.append(f"{cls.k_quasi_regular}-quasi-regular")
    print(f"  {cls.g6:6s} degrees={cls.degree_sequence} {' '.join(flags)}")
    print(f"         representative edges: {sorted(cls.representative.edges)}")

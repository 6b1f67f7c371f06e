"""Nearby-cycle decompositions and test functions for ramified unitary local models."""
from __future__ import annotations

from ramified_satake.local_model import build_gu_data, nearby_cycle_decomposition, summand_label, z_trace_table

if __name__ == "__main__":
    for n, r, s in [(3, 2, 1), (4, 2, 2), (6, 3, 3), (8, 4, 4)]:
        st = build_gu_data(n)
        rep = nearby_cycle_decomposition(st, r, s)
        parts = ", ".join(f"mu_{summand_label(st, w)} (dim {d}, {c})" for w, d, c in rep.summands)
        print(f"GU({n}) signature ({r},{s}): {parts}")
    st = build_gu_data(4)
    for nf, v in sorted(z_trace_table(st, 2, 2).items()):
        print(f"z_(2,2) trace on invariants at {nf}: {v}")

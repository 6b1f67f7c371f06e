"""Fixed dual groups of the reversal folds of GL_n and a few other foldings."""
from __future__ import annotations

from ramified_satake.galois_fold import coweight_coinvariants, fold_fixed_group, pinned_action, reversal
from ramified_satake.root_datum import build_root_datum


def show(name: str, perm=None) -> None:
    rd = build_root_datum(name)
    psi = pinned_action(rd, reversal(rd), center="inverse") if perm is None else pinned_action(rd, perm)
    cl = coweight_coinvariants(rd, psi)
    ech = fold_fixed_group(rd, psi, cl)
    print(f"{name:5} {str(psi.permutation):20} {ech.folded_type:6} pi0 = {ech.pi0_label}")


if __name__ == "__main__":
    for n in range(2, 10):
        show(f"GL{n}")
    show("SO8", (0, 1, 3, 2))
    show("D4", (3, 1, 0, 2))
    show("E6", (5, 1, 4, 3, 2, 0))

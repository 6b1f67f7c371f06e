"""Lusztig-Kato polynomials, IC stalks and Satake evaluation on the GL4 fold."""
from __future__ import annotations

from ramified_satake.echelon_rep import irreducible_character
from ramified_satake.galois_fold import coweight_coinvariants, fold_fixed_group, pinned_action, reversal
from ramified_satake.kato_lusztig import ic_stalk_table, kato_lusztig_column
from ramified_satake.root_datum import build_root_datum
from ramified_satake.satake_hecke import SatakeParameter, eval_character, ic_function

if __name__ == "__main__":
    rd = build_root_datum("GL4")
    psi = pinned_action(rd, reversal(rd))
    cl = coweight_coinvariants(rd, psi)
    ech = fold_fixed_group(rd, psi, cl)
    lam = (2, 1)
    for mu, poly in sorted(kato_lusztig_column(ech.folded_datum, lam).items()):
        print(f"K_{lam},{mu} = {poly}")
    table = ic_stalk_table(ech, cl, lam)
    print("IC function:", ic_function(table, normalized=True).as_dict())
    ch = irreducible_character(ech, cl, (1, 1))
    print("dim V(1,1) =", ch.dimension, " value at (3, 2):",
          eval_character(ch, SatakeParameter.from_values(cl, [3, 2])))

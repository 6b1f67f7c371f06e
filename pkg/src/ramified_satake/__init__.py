"""Exact combinatorics of the ramified geometric Satake correspondence."""

from __future__ import annotations

__version__ = "0.1.0"

from .echelon_rep import BranchingResult, EchelonCharacter, branch, irreducible_character, restrict_character
from .errors import ComputationError, SatakeError, SpecError
from .galois_fold import (
    CoinvariantLattice,
    EchelonData,
    PinnedAutomorphism,
    closure_strata,
    coweight_coinvariants,
    fold_fixed_group,
    is_dominant,
    order_leq,
    pairing_2rho,
    pinned_action,
    reversal,
)
from .kato_lusztig import (
    MatrixModel,
    StalkTable,
    bk_filtration_oracle,
    builtin_models,
    ic_stalk_table,
    kato_lusztig_poly,
    matrix_model,
    q_kostant,
)
from .lattice import FgAbelianGroup, coinvariants, invariants, smith_normal_form
from .local_model import (
    GUSetup,
    NearbyCycleReport,
    build_gu_data,
    nearby_cycle_decomposition,
    twisted_trace_check,
    z_function,
    z_trace_table,
)
from .polys import Cyclo, MPoly, QPoly
from .root_datum import RootDatum, WeightMultiset, build_root_datum, weyl_character, weyl_group
from .satake_hecke import (
    HeckeElement,
    SatakeParameter,
    basis_change,
    char_function,
    eval_character,
    ic_function,
    normalize_parameter,
)

__all__ = [name for name in dir() if not name.startswith("_")]

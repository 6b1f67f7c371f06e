"""Irreducible characters of the fixed dual group and branching to it.

Weights live in X_*(T)_I as normal forms.  An irreducible W_mu is computed
on the folded datum from the free part of mu and lifted back by subtracting
the same combination of orbit classes from mu, so torsion is carried along.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import AmbiguousTorsionLift, DecompositionFailure, NotDominant
from .galois_fold import CoinvariantLattice, EchelonData, NormalForm, is_dominant, order_leq
from .lattice import vsub
from .root_datum import RootDatum, WeightMultiset, weyl_character, weyl_dimension


@dataclass(frozen=True)
class EchelonCharacter:
    highest_weight: NormalForm
    weights: WeightMultiset
    dimension: int
    dominant: tuple[NormalForm, ...]  # dominant weights in the support, sorted


@dataclass(frozen=True)
class BranchingResult:
    source: tuple[int, ...]
    top: NormalForm
    summands: tuple[tuple[NormalForm, int], ...]

    def as_dict(self) -> dict[NormalForm, int]:
        return dict(self.summands)


_CACHE: dict = {}


def irreducible_character(ech: EchelonData, cl: CoinvariantLattice,
                          mu: Sequence[int]) -> EchelonCharacter:
    mu = tuple(mu)
    key = (id(ech), mu)
    hit = _CACHE.get(key)
    if hit is not None and hit[0] is ech:
        return hit[1]
    if not is_dominant(cl, mu):
        raise NotDominant(f"{cl.format(mu)} is not dominant")
    if not cl.classes_independent:
        raise AmbiguousTorsionLift("free parts of the orbit classes are dependent")
    fd = ech.folded_datum
    top = cl.free_part(mu)
    ch = weyl_character(fd, top)
    weights = {}
    for nu, m in ch.items():
        coeffs = fd.root_coords(vsub(top, nu))
        if coeffs is None or any(c < 0 for c in coeffs):
            raise AmbiguousTorsionLift(f"weight {nu} is not below {top}")
        lifted = cl.combination(coeffs, mu)
        if cl.free_part(lifted) != nu:
            raise AmbiguousTorsionLift("lift does not reproduce the folded weight")
        weights[lifted] = weights.get(lifted, 0) + m
    ws = WeightMultiset(weights)
    dominant = tuple(sorted((w for w in ws if is_dominant(cl, w)),
                            key=lambda w: (-_pair(cl, w), w)))
    out = EchelonCharacter(mu, ws, ws.dimension, dominant)
    if len(_CACHE) > 20000:
        _CACHE.clear()
    _CACHE[key] = (ech, out)
    return out


def _pair(cl: CoinvariantLattice, nf) -> int:
    from .galois_fold import pairing_2rho
    return pairing_2rho(cl, nf)


def restrict_character(cl: CoinvariantLattice, rd: RootDatum, mu: Sequence[int]) -> WeightMultiset:
    """Character of the dual-group irreducible V_mu pushed to X_*(T)_I."""
    dual = rd.dual()
    mu = tuple(mu)
    if not dual.is_dominant(mu):
        raise NotDominant(f"{mu} is not dominant")
    return weyl_character(dual, mu).pushforward(cl.project)


def branch(ech: EchelonData, cl: CoinvariantLattice, rd: RootDatum,
           mu: Sequence[int]) -> BranchingResult:
    """Decompose Res V_mu into irreducibles W_lam by greedy top-weight subtraction."""
    mu = tuple(mu)
    remaining = dict(restrict_character(cl, rd, mu).items())
    top = cl.project(mu)
    summands: dict[NormalForm, int] = {}
    while remaining:
        cands = [w for w, m in remaining.items() if m > 0 and is_dominant(cl, w)]
        if not cands:
            raise DecompositionFailure("nonzero remainder without dominant weights")
        maximal = [w for w in cands
                   if not any(v != w and order_leq(cl, w, v) for v in cands)]
        lam = min(maximal)
        c = remaining[lam]
        summands[lam] = c
        for w, m in irreducible_character(ech, cl, lam).weights.items():
            left = remaining.get(w, 0) - c * m
            if left < 0:
                raise DecompositionFailure(f"multiplicity of {cl.format(w)} would go negative")
            if left:
                remaining[w] = left
            else:
                remaining.pop(w, None)
    result = BranchingResult(mu, top, tuple(sorted(summands.items())))
    _audit(ech, cl, rd, result)
    return result


def _audit(ech, cl, rd, result: BranchingResult) -> None:
    d = result.as_dict()
    if d.get(result.top) != 1:
        raise DecompositionFailure("top summand does not have multiplicity one")
    for lam in d:
        if not order_leq(cl, lam, result.top):
            raise DecompositionFailure(f"summand {cl.format(lam)} is not below the top weight")
    total = sum(c * irreducible_character(ech, cl, lam).dimension for lam, c in d.items())
    if total != weyl_dimension(rd.dual(), result.source):
        raise DecompositionFailure("dimension audit failed")

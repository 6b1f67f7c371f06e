"""Ramified unitary similitude groups: nearby cycles and test functions.

H = GL_n x GL_1 with the unitary action on X_*: e_i -> -e_{n+1-i},
f -> f + sum e_i.  The fixed dual group is GO_{2m+1} (n = 2m+1) or
GSp_{2m} (n = 2m), both with torsion-free coinvariants.  The cocharacter
mu_{r,s} is (1^(s), 0^(r); 1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .echelon_rep import branch, irreducible_character
from .errors import BadDimension, BadSignature, IdentityFailure
from .galois_fold import (
    CoinvariantLattice,
    EchelonData,
    NormalForm,
    closure_strata,
    coweight_coinvariants,
    fold_fixed_group,
    pairing_2rho,
    pinned_action,
)
from .kato_lusztig import ic_stalk_table
from .polys import Cyclo, MPoly, QPoly
from .root_datum import RootDatum, build_root_datum
from .satake_hecke import HeckeElement, ic_function, normalize_ic_value

SCHEMA_VERSION = 1
TRIVIAL, QUADRATIC = "trivial", "quadratic"


@dataclass(frozen=True)
class GUSetup:
    n: int
    datum: RootDatum
    theta: object
    cl: CoinvariantLattice
    ech: EchelonData = field(repr=False)

    def mu(self, r: int, s: int) -> NormalForm:
        """Class of (1^(s), 0^(r); 1)."""
        _check_signature(self.n, r, s, allow_swap=True)
        return self.cl.project((1,) * s + (0,) * r + (1,))

    def mu_ambient(self, r: int, s: int) -> tuple[int, ...]:
        return (1,) * s + (0,) * r + (1,)


def _check_signature(n: int, r: int, s: int, allow_swap: bool = False) -> None:
    if r < 0 or s < 0 or r + s != n:
        raise BadSignature(f"(r, s) = ({r}, {s}) does not satisfy r + s = {n}")
    if s > r and not allow_swap:
        raise BadSignature(f"(r, s) = ({r}, {s}) needs s <= r")


def build_gu_data(n: int) -> GUSetup:
    if n < 3:
        raise BadDimension(f"n = {n}: the unitary local model needs n >= 3")
    return _gu_setup(n)


@lru_cache(maxsize=None)
def _gu_setup(n: int) -> GUSetup:
    rd = build_root_datum(f"GL{n}xGL1")
    theta = pinned_action(rd, similitude_recipe="GU")
    cl = coweight_coinvariants(rd, theta)
    ech = fold_fixed_group(rd, theta, cl)
    return GUSetup(n, rd, theta, cl, ech)


def _inertia(r: int, s: int, s_prime: int) -> str:
    if r != s:
        return TRIVIAL
    return TRIVIAL if (r - s_prime) % 4 == 0 else QUADRATIC


@dataclass(frozen=True)
class NearbyCycleReport:
    n: int
    r: int
    s: int
    summands: tuple[tuple[NormalForm, int, str], ...]  # (weight, dim, inertia)
    strata: tuple[tuple[NormalForm, int, QPoly, QPoly], ...]  # (weight, dim, z raw, z normalized)
    monodromy_trivial: bool

    @property
    def invariants_part(self) -> tuple[tuple[NormalForm, int, str], ...]:
        return tuple(x for x in self.summands if x[2] == TRIVIAL)

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "n": self.n,
            "r": self.r,
            "s": self.s,
            "summands": [{"weight": _fmt(w), "dim": d, "inertia": c} for w, d, c in self.summands],
            "strata": [{"weight": _fmt(w), "dim_flag": d, "z_value": str(z),
                        "z_normalized": str(zn)} for w, d, z, zn in self.strata],
            "monodromy_trivial": self.monodromy_trivial,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, obj) -> "NearbyCycleReport":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if obj.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {obj.get('schema_version')}")
        return cls(
            obj["n"], obj["r"], obj["s"],
            tuple((_parse(x["weight"]), x["dim"], x["inertia"]) for x in obj["summands"]),
            tuple((_parse(x["weight"]), x["dim_flag"], QPoly.parse(x["z_value"]),
                   QPoly.parse(x["z_normalized"])) for x in obj["strata"]),
            obj["monodromy_trivial"],
        )


def _fmt(nf: Sequence[int]) -> str:
    return ",".join(str(x) for x in nf)


def _parse(text: str) -> NormalForm:
    return tuple(int(x) for x in text.split(",") if x.strip())


def summand_label(setup: GUSetup, nf: NormalForm) -> int | None:
    """The s' with nf equal to the class of mu_{n-s',s'}, if any."""
    for sp in range(setup.n // 2 + 1):
        if setup.mu(setup.n - sp, sp) == tuple(nf):
            return sp
    return None


def nearby_cycle_decomposition(setup: GUSetup, r: int, s: int) -> NearbyCycleReport:
    """Branch Lambda^s(std) (x) similitude and attach inertia characters and z-values."""
    _check_signature(setup.n, r, s)
    res = branch(setup.ech, setup.cl, setup.datum, setup.mu_ambient(r, s))
    summands = []
    for lam, mult in res.summands:
        sp = summand_label(setup, lam)
        if sp is None:
            raise IdentityFailure(f"summand {lam} is not of the form mu_(n-s', s')")
        dim = irreducible_character(setup.ech, setup.cl, lam).dimension
        summands.extend([(lam, dim, _inertia(r, s, sp))] * mult)
    summands.sort(key=lambda x: (-pairing_2rho(setup.cl, x[0]), x[0]))
    z = _z_from_summands(setup, [x[0] for x in summands if x[2] == TRIVIAL])
    top = setup.mu(r, s)
    d_top = pairing_2rho(setup.cl, top)
    strata = []
    for lam in closure_strata(setup.cl, top):
        raw = z[lam]
        strata.append((lam, pairing_2rho(setup.cl, lam), raw, normalize_ic_value(raw, d_top)))
    return NearbyCycleReport(setup.n, r, s, tuple(summands), tuple(strata), r != s)


def _z_from_summands(setup: GUSetup, labels) -> HeckeElement:
    total = HeckeElement(())
    for lam in labels:
        total = total + ic_function(ic_stalk_table(setup.ech, setup.cl, lam))
    return total


def z_function(setup: GUSetup, r: int, s: int) -> HeckeElement:
    """Sum of the raw IC functions of the summands with trivial inertia."""
    rep = nearby_cycle_decomposition(setup, r, s)
    return _z_from_summands(setup, [x[0] for x in rep.invariants_part])


def z_trace_table(setup: GUSetup, r: int, s: int) -> dict[NormalForm, QPoly]:
    """z_{r,s} per stratum with the top Tate twist and shift removed."""
    rep = nearby_cycle_decomposition(setup, r, s)
    return {lam: zn for lam, _, _, zn in rep.strata}


# --------------------------------------------------------------------------
# the twisted trace identity for n = 2m

@dataclass(frozen=True)
class TwistedTraceWitness:
    m: int
    lhs: MPoly
    alternating_sum: MPoly
    branched_sum: MPoly
    signs: tuple[tuple[int, int], ...]  # (m', +1 or -1)


def _elementary(m: int, k: int) -> MPoly:
    """e_k(eps_1^{+-1}, ..., eps_m^{+-1}) in variables (eps, eps_1..eps_m)."""
    letters = [(i, 1) for i in range(m)] + [(i, -1) for i in range(m)]
    total = MPoly(m + 1)
    for combo in combinations(letters, k):
        exps = [0] * (m + 1)
        for i, e in combo:
            exps[i + 1] += e
        total = total + MPoly.monomial(exps)
    return total


def _class_monomial(setup: GUSetup, nf: NormalForm) -> tuple[int, ...]:
    """Exponents (eps; eps_1..eps_m) of a class (a_1..a_m; c)."""
    m = setup.n // 2
    return (nf[m],) + tuple(nf[:m])


def twisted_trace_check(m: int) -> tuple[bool, TwistedTraceWitness]:
    """Check eps * prod_i (1 + eps_i T)(1 + eps_i^-1 T) at T = zeta_4 three ways.

    Against zeta_4^m * eps * (e_m - 2 e_{m-2} + 2 e_{m-4} - ...), and against
    the branched characters of the r = s = m decomposition weighted by the
    emitted inertia characters (+1 trivial, -1 quadratic) times zeta_4^m.
    """
    if m < 1:
        raise BadDimension("m must be at least 1")
    nv = m + 1
    i4 = Cyclo.zeta(4, 1)
    eps = MPoly.monomial([1] + [0] * m)
    lhs = eps
    for j in range(m):
        up = [0] * nv
        up[j + 1] = 1
        dn = [0] * nv
        dn[j + 1] = -1
        lhs = lhs * (MPoly.const(nv, 1) + MPoly.monomial(up, i4))
        lhs = lhs * (MPoly.const(nv, 1) + MPoly.monomial(dn, i4))
    im = Cyclo.zeta(4, m)

    alt = MPoly(nv)
    for t, k in enumerate(range(m, -1, -2)):
        coeff = 1 if t == 0 else 2 * (-1) ** t
        alt = alt + _elementary(m, k) * MPoly.const(nv, coeff)
    alt = eps * alt * MPoly.const(nv, im)

    setup = _gu_setup(2 * m)
    rep = nearby_cycle_decomposition(setup, m, m)
    branched = MPoly(nv)
    signs = []
    for lam, _, inertia in rep.summands:
        sign = 1 if inertia == TRIVIAL else -1
        signs.append((summand_label(setup, lam), sign))
        ch = irreducible_character(setup.ech, setup.cl, lam).weights
        poly = MPoly(nv, {_class_monomial(setup, w): c for w, c in ch.items()})
        branched = branched + poly * MPoly.const(nv, sign)
    branched = branched * MPoly.const(nv, im)
    witness = TwistedTraceWitness(m, lhs, alt, branched, tuple(signs))
    for name, other in (("alternating sum", alt), ("branched sum", branched)):
        diff = lhs - other
        if not diff.is_zero():
            mono, c = sorted(diff.items())[0]
            raise IdentityFailure(f"m = {m}: {name} differs at monomial {mono} by {c}")
    return True, witness

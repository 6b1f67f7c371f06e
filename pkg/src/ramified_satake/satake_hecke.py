"""Spherical functions in two bases and Satake-parameter evaluation.

Functions on dominant classes of X_*(T)_I take values in Laurent polynomials
in q^{1/2}.  ``ic_function`` gives the trace function of an IC sheaf,
``char_function`` the dominant multiplicities of a character.  Parameters are
homomorphisms from X_*(T)_I to monomials c * q^{k/2} with c in Q(zeta_e).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Mapping, Sequence

from .echelon_rep import EchelonCharacter
from .errors import SingularChange, SpecError, TwistedEvaluationUnsupported
from .galois_fold import CoinvariantLattice, EchelonData, NormalForm, order_leq, pairing_2rho
from .kato_lusztig import StalkTable
from .lattice import rational_inverse
from .polys import Cyclo, QPoly, Scalar
from .root_datum import WeightMultiset


@dataclass(frozen=True)
class HeckeElement:
    """Finitely supported function from dominant classes to QPoly."""

    values: tuple[tuple[NormalForm, QPoly], ...]

    @classmethod
    def from_dict(cls, d: Mapping[NormalForm, QPoly]) -> "HeckeElement":
        items = ((tuple(k), QPoly.coerce(v)) for k, v in d.items())
        return cls(tuple(sorted((k, v) for k, v in items if not v.is_zero())))

    def as_dict(self) -> dict[NormalForm, QPoly]:
        return dict(self.values)

    def support(self) -> tuple[NormalForm, ...]:
        return tuple(k for k, _ in self.values)

    def __getitem__(self, lam) -> QPoly:
        return self.as_dict().get(tuple(lam), QPoly())

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        d = self.as_dict()
        for k, v in other.values:
            d[k] = d.get(k, QPoly()) + v
        return HeckeElement.from_dict(d)

    def scale(self, c) -> "HeckeElement":
        c = QPoly.coerce(c)
        return HeckeElement.from_dict({k: c * v for k, v in self.values})

    def to_json(self, cl: CoinvariantLattice | None = None) -> dict[str, str]:
        fmt = cl.format if cl is not None else (lambda k: ",".join(map(str, k)))
        return {fmt(k): str(v) for k, v in self.values}


def ic_function(stalks: StalkTable, normalized: bool = False) -> HeckeElement:
    """Trace function of IC_mu.

    Raw value at lam: (-1)^{d_mu} sum_j c_j q^{-d_lam/2 - j}, where d = (2rho, .)
    and c_j is the q^j coefficient of the stratum polynomial.  With
    ``normalized`` the Tate twist and shift are removed, giving
    sum_j c_j q^{(d_mu - d_lam)/2 - j}, which is 1 at the top stratum.
    """
    d_mu = stalks.label_dim
    sign = -1 if d_mu % 2 else 1
    out = {}
    for lam, d_lam, _ in stalks.rows:
        poly = stalks.polynomial(lam)
        if normalized:
            val = QPoly({d_mu - d_lam - k: c for k, c in poly.items()})
        else:
            val = QPoly({-d_lam - k: sign * c for k, c in poly.items()})
        out[lam] = val
    return HeckeElement.from_dict(out)


def normalize_ic_value(raw: QPoly, d_mu: int) -> QPoly:
    """(-1)^{d_mu} q^{d_mu/2} * raw."""
    return raw * QPoly.t(d_mu, -1 if d_mu % 2 else 1)


def char_function(ech_char: EchelonCharacter) -> HeckeElement:
    """Dominant weight multiplicities as constant polynomials."""
    ws = ech_char.weights
    return HeckeElement.from_dict({lam: QPoly.const(ws[lam]) for lam in ech_char.dominant})


def basis_change(ic_basis: Sequence[HeckeElement], ch_basis: Sequence[HeckeElement],
                 index: Sequence[NormalForm] | None = None,
                 cl: CoinvariantLattice | None = None) -> list[list[QPoly]]:
    """Matrix M with ic_basis[a] = sum_b M[a][b] ch_basis[b].

    ``index`` lists the common index set (default: the union of supports,
    sorted).  The character matrix must be unitriangular with integer
    entries; the result is checked to be unitriangular for the order
    ``cl`` defines (or for the support pattern when ``cl`` is omitted).
    """
    if len(ic_basis) != len(ch_basis):
        raise SingularChange("bases have different sizes")
    if index is None:
        index = sorted({k for h in list(ic_basis) + list(ch_basis) for k in h.support()})
    index = [tuple(x) for x in index]
    n = len(index)
    if n != len(ic_basis):
        raise SingularChange(f"index set has {n} elements, bases have {len(ic_basis)}")
    pos = {k: i for i, k in enumerate(index)}
    for h in list(ic_basis) + list(ch_basis):
        for k in h.support():
            if k not in pos:
                raise SingularChange(f"support element {k} outside the index set")
    c = []
    for h in ch_basis:
        row = []
        for k in index:
            v = h[k].constant()
            if v is None or (isinstance(v, Fraction) and v.denominator != 1) or isinstance(v, Cyclo):
                raise SingularChange("character entries must be integers")
            row.append(int(v))
        c.append(row)
    for i in range(n):
        if c[i][i] != 1:
            raise SingularChange(f"character of {index[i]} is not 1 at its label")
    try:
        cinv = rational_inverse(c)
    except (ZeroDivisionError, ValueError) as exc:
        raise SingularChange("character matrix is singular") from exc
    m = []
    for a, h in enumerate(ic_basis):
        row = []
        for b in range(n):
            acc = QPoly()
            for k in range(n):
                if cinv[k][b]:
                    acc = acc + h[index[k]] * QPoly.const(cinv[k][b])
            row.append(acc)
        m.append(row)
    for a in range(n):
        if m[a][a] != QPoly.const(1):
            raise SingularChange(f"diagonal entry at {index[a]} is {m[a][a]}")
        for b in range(n):
            if a == b or m[a][b].is_zero():
                continue
            below = (order_leq(cl, index[b], index[a]) if cl is not None
                     else index[b] in ic_basis[a].support())
            if not below:
                raise SingularChange(f"entry ({index[a]}, {index[b]}) violates triangularity")
    return m


# --------------------------------------------------------------------------
# Satake parameters

@dataclass(frozen=True)
class SatakeParameter:
    """Homomorphism X_*(T)_I -> value field, on the generators of the normal form.

    ``free_values[j]`` is the monomial image of the j-th free generator;
    torsion generator k of order d maps to zeta_d^{torsion_exponents[k]}.
    """

    free_values: tuple[QPoly, ...]
    torsion_orders: tuple[int, ...]
    torsion_exponents: tuple[int, ...]
    sigma_twisted: bool = False

    def __post_init__(self):
        for v in self.free_values:
            if not v.is_monomial():
                raise SpecError(f"parameter value {v} is not an invertible monomial")
        if len(self.torsion_orders) != len(self.torsion_exponents):
            raise SpecError("torsion data length mismatch")

    @classmethod
    def from_values(cls, cl: CoinvariantLattice, free: Sequence, torsion: Sequence[int] = (),
                    sigma_twisted: bool = False) -> "SatakeParameter":
        """Free values are scalars or QPoly monomials; torsion entries are exponents k of zeta_d^k."""
        if len(free) != cl.free_rank:
            raise SpecError(f"expected {cl.free_rank} free values, got {len(free)}")
        torsion = tuple(torsion) or (0,) * len(cl.torsion)
        if len(torsion) != len(cl.torsion):
            raise SpecError(f"expected {len(cl.torsion)} torsion exponents")
        vals = tuple(QPoly.coerce(_as_scalar(x)) for x in free)
        return cls(vals, tuple(cl.torsion), tuple(k % d for k, d in zip(torsion, cl.torsion)),
                   sigma_twisted)

    @classmethod
    def from_signs(cls, cl: CoinvariantLattice, free: Sequence, signs: Sequence[int]) -> "SatakeParameter":
        """Torsion values given as roots of unity in {1, -1} for order-2 generators."""
        exps = []
        for s, d in zip(signs, cl.torsion):
            if s == 1:
                exps.append(0)
            elif s == -1 and d % 2 == 0:
                exps.append(d // 2)
            else:
                raise SpecError(f"{s} is not a root of unity of order dividing {d}")
        return cls.from_values(cl, free, exps)

    @classmethod
    def trivial(cls, cl: CoinvariantLattice) -> "SatakeParameter":
        return cls.from_values(cl, [1] * cl.free_rank)

    def __call__(self, nf: Sequence[int]) -> QPoly:
        f = len(self.free_values)
        out = QPoly.const(1)
        for v, a in zip(self.free_values, nf[:f]):
            if a:
                out = out * v ** a
        for d, k, a in zip(self.torsion_orders, self.torsion_exponents, nf[f:]):
            if (k * a) % d:
                out = out * QPoly.const(Cyclo.zeta(d, k * a))
        return out


def _as_scalar(x) -> Scalar:
    if isinstance(x, (QPoly, Cyclo, int, Fraction)):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def eval_character(ech_char: EchelonCharacter | WeightMultiset, param: SatakeParameter) -> QPoly:
    """Sum over the weight multiset of the parameter's values."""
    if param.sigma_twisted:
        raise TwistedEvaluationUnsupported(
            "twisted evaluation is only available through the unitary local model")
    ws = ech_char.weights if isinstance(ech_char, EchelonCharacter) else ech_char
    total = QPoly()
    for w, m in ws.items():
        total = total + param(w) * QPoly.const(m)
    return total


def orbit_sum(ech: EchelonData, lam: Sequence[int]) -> WeightMultiset:
    """Sum of the monomials over the relative Weyl orbit of lam."""
    return WeightMultiset({w: 1 for w in ech.orbit(tuple(lam))})


def eval_class_function(ech: EchelonData, h: HeckeElement, param: SatakeParameter) -> QPoly:
    """Evaluate sum_lam h(lam) * orbit_sum(lam) at a parameter."""
    if param.sigma_twisted:
        raise TwistedEvaluationUnsupported("twisted evaluation of class functions")
    total = QPoly()
    for lam, v in h.values:
        total = total + v * eval_character(orbit_sum(ech, lam), param)
    return total


def rho_multipliers(cl: CoinvariantLattice, q_value=None) -> tuple[QPoly, ...]:
    """q^{<rho, lift_j>} for each free generator, as monomials in q^{1/2}.

    ``q_value=None`` keeps q formal; an exact rational square q substitutes
    q^{1/2} by its rational square root.
    """
    f = cl.free_rank
    out = []
    for j in range(f):
        e = [0] * (f + len(cl.torsion))
        e[j] = 1
        k = pairing_2rho(cl, e)
        out.append(QPoly.t(k) if q_value is None else QPoly.const(_sqrt(q_value) ** k))
    for j in range(len(cl.torsion)):
        e = [0] * (f + len(cl.torsion))
        e[f + j] = 1
        if pairing_2rho(cl, e) != 0:
            raise SpecError("rho pairs nontrivially with a torsion class")
    return tuple(out)


def _sqrt(q) -> Fraction:
    q = Fraction(q)
    if q <= 0:
        raise SpecError(f"q = {q} must be positive")
    num, den = isqrt(q.numerator), isqrt(q.denominator)
    if num * num != q.numerator or den * den != q.denominator:
        raise SpecError(f"q = {q} is not an exact square; use a formal q")
    return Fraction(num, den)


def normalize_parameter(param: SatakeParameter, cl: CoinvariantLattice, q_value=None,
                        direction: str = "geom_to_alg") -> SatakeParameter:
    """Multiply by lam -> q^{<rho, lam>} (geom_to_alg) or its inverse (alg_to_geom)."""
    if direction not in ("geom_to_alg", "alg_to_geom"):
        raise SpecError(f"unknown direction {direction!r}")
    sign = 1 if direction == "geom_to_alg" else -1
    mult = rho_multipliers(cl, q_value)
    vals = tuple(v * m ** sign for v, m in zip(param.free_values, mult))
    return SatakeParameter(vals, param.torsion_orders, param.torsion_exponents, param.sigma_twisted)


def rho_pairing(cl: CoinvariantLattice, nf: Sequence[int]) -> Fraction:
    """<rho, lam> for a class lam."""
    return Fraction(pairing_2rho(cl, nf), 2)

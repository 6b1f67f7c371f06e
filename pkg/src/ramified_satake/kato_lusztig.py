"""q-analogues of weight multiplicity and IC stalk tables.

The production path is Lusztig's alternating sum over the Weyl group of the
folded datum with a memoized q-Kostant partition function.  The independent
path is the Brylinski-Kostant filtration on explicit matrix models: the
graded pieces of V(mu) filtered by kernels of powers of a principal
nilpotent, computed from exact ranks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from typing import Callable, Sequence

from .errors import DecompositionFailure, NotDominant, UnsupportedModel
from .galois_fold import (
    CoinvariantLattice,
    EchelonData,
    NormalForm,
    closure_strata,
    pairing_2rho,
)
from .lattice import Vector, rank, vadd, vsub
from .polys import QPoly
from .root_datum import RootDatum, build_root_datum, weyl_group

Coeffs = tuple[tuple[int, int], ...]  # sparse polynomial in q: sorted (exponent, coefficient)


def _padd(a: Coeffs, b: Coeffs, shift: int = 0, sign: int = 1) -> Coeffs:
    """a + sign * q^shift * b."""
    d = dict(a)
    for e, c in b:
        d[e + shift] = d.get(e + shift, 0) + sign * c
    return tuple(sorted((e, c) for e, c in d.items() if c))


def _to_qpoly(a: Coeffs) -> QPoly:
    return QPoly({2 * e: c for e, c in a})


# --------------------------------------------------------------------------
# q-Kostant partition function

class _PartitionTable:
    """Memoized P_k(beta): multisets of the first k positive roots summing to beta."""

    def __init__(self, rd: RootDatum):
        self.roots = [rd.root_coords(a) for a in rd.positive_roots]
        self.memo: dict[tuple[Vector, int], Coeffs] = {}

    def __call__(self, beta: Vector) -> Coeffs:
        if any(x < 0 for x in beta):
            return ()
        return self._p(beta, len(self.roots))

    def _p(self, beta: Vector, k: int) -> Coeffs:
        # P_k(beta) = P_{k-1}(beta) + q P_k(beta - root_k); evaluated with an explicit stack
        memo = self.memo
        stack = [(beta, k)]
        while stack:
            b, j = stack[-1]
            if (b, j) in memo:
                stack.pop()
                continue
            if j == 0:
                memo[(b, j)] = ((0, 1),) if not any(b) else ()
                stack.pop()
                continue
            rest = vsub(b, self.roots[j - 1])
            need = [(b, j - 1)]
            if all(x >= 0 for x in rest):
                need.append((rest, j))
            missing = [x for x in need if x not in memo]
            if missing:
                stack.extend(missing)
                continue
            out = memo[(b, j - 1)]
            if len(need) == 2:
                out = _padd(out, memo[(rest, j)], shift=1)
            memo[(b, j)] = out
            stack.pop()
        return memo[(beta, k)]


@lru_cache(maxsize=64)
def _table(rd: RootDatum) -> _PartitionTable:
    return _PartitionTable(rd)


def q_kostant(fd: RootDatum, beta: Sequence[int]) -> QPoly:
    """Sum over multisets of positive roots adding to beta of q^(number of parts)."""
    coords = fd.root_coords(tuple(beta))
    if coords is None:
        raise ValueError(f"{tuple(beta)} is not in the root lattice")
    return _to_qpoly(_table(fd)(coords))


@lru_cache(maxsize=4096)
def _lusztig_shifts(fd: RootDatum, lam: Vector) -> tuple[tuple[Vector, int], ...]:
    """Pairs (coords of w(lam+rho) - (lam+rho), sign of w) over the Weyl group."""
    w = weyl_group(fd)
    lr = vadd(vadd(lam, lam), fd.two_rho)
    out = []
    for k in range(w.order):
        v = vsub(w.act(k, lr), lr)
        coords = fd.root_coords(tuple(x // 2 for x in v))
        assert coords is not None and all(x % 2 == 0 for x in v)
        out.append((coords, -1 if w.length(k) % 2 else 1))
    return tuple(out)


def _kl_coeffs(fd: RootDatum, lam: Vector, mu: Vector) -> Coeffs:
    c = fd.root_coords(vsub(lam, mu))
    if c is None or any(x < 0 for x in c):
        return ()
    table = _table(fd)
    memo = table.memo
    k = len(table.roots)
    total: dict[int, int] = {}
    for d, sign in _lusztig_shifts(fd, lam):
        beta = tuple([x + y for x, y in zip(d, c)])
        if min(beta) < 0:
            continue
        part = memo.get((beta, k))
        if part is None:
            part = table._p(beta, k)
        for e, x in part:
            total[e] = total.get(e, 0) + sign * x
    return tuple(sorted((e, x) for e, x in total.items() if x))


def kato_lusztig_column(fd: RootDatum, lam: Sequence[int],
                        mus: Sequence[Sequence[int]] | None = None) -> dict[Vector, QPoly]:
    """m^mu_lam(q) for every dominant mu in ``mus`` (default: dominant weights of V_lam)."""
    lam = tuple(lam)
    _check_weight(fd, lam)
    if mus is None:
        from .root_datum import dominant_weights_below
        mus = dominant_weights_below(fd, lam)
    else:
        mus = [tuple(mu) for mu in mus]
        for mu in mus:
            _check_weight(fd, mu)
    return {mu: _to_qpoly(_checked(fd, lam, mu)) for mu in mus}


def _check_weight(fd: RootDatum, x: Vector) -> None:
    if len(x) != fd.rank:
        raise ValueError(f"{x} has {len(x)} coordinates, expected {fd.rank}")
    if not fd.is_dominant(x):
        raise NotDominant(f"{x} is not dominant")


def kato_lusztig_poly(fd: RootDatum, lam: Sequence[int], mu: Sequence[int]) -> QPoly:
    """Lusztig's q-analogue m^mu_lam(q) for dominant lam, mu."""
    lam, mu = tuple(lam), tuple(mu)
    for x in (lam, mu):
        _check_weight(fd, x)
    return _to_qpoly(_checked(fd, lam, mu))


def _checked(fd: RootDatum, lam: Vector, mu: Vector) -> Coeffs:
    coeffs = _kl_coeffs(fd, lam, mu)
    if any(c < 0 for _, c in coeffs):
        raise DecompositionFailure(f"negative coefficient in m^{mu}_{lam}")
    return coeffs


# --------------------------------------------------------------------------
# explicit matrix models

Matrix = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class MatrixModel:
    """A representation given by weight vectors and a principal nilpotent.

    ``nilpotent`` acts on column vectors in the basis whose weights are listed
    in ``weights``.  ``datum`` names the group whose dominant weights index
    the irreducible, ``highest_weight`` is its highest weight.
    """

    name: str
    datum: str
    highest_weight: Vector
    weights: tuple[Vector, ...]
    nilpotent: Matrix

    @property
    def dimension(self) -> int:
        return len(self.weights)


def _mat(rows) -> Matrix:
    return tuple(tuple(Fraction(x) for x in r) for r in rows)


def _mul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(r, c)) for c in bt) for r in a)


def _zero(n: int) -> list[list[Fraction]]:
    return [[Fraction(0)] * n for _ in range(n)]


def bk_filtration_oracle(model: MatrixModel, mu: Sequence[int]) -> QPoly:
    """Sum_i dim gr_i V(mu) q^i for F_i V = ker X^{i+1}."""
    if not isinstance(model, MatrixModel):
        raise UnsupportedModel(f"not a matrix model: {model!r}")
    mu = tuple(mu)
    cols = [k for k, w in enumerate(model.weights) if w == mu]
    if not cols:
        return QPoly()
    n = model.dimension
    x = model.nilpotent
    ranks = [len(cols)]
    power = x
    while ranks[-1]:
        ranks.append(rank([[power[i][j] for j in cols] for i in range(n)]))
        power = _mul(power, x)
    coeffs = [ranks[i] - ranks[i + 1] for i in range(len(ranks) - 1)]
    return QPoly.from_q_coeffs(coeffs)


# standard representations: (datum, weights, simple root vectors)

def _gl_std(n: int):
    weights = [tuple(int(k == i) for k in range(n)) for i in range(n)]
    ops = []
    for i in range(n - 1):
        m = _zero(n)
        m[i][i + 1] = Fraction(1)
        ops.append(m)
    return f"GL{n}", weights, ops


def _sp_std(m: int):
    """Basis v_1..v_m, v_-m..v_-1; weights e_i and -e_i."""
    n = 2 * m
    idx = {i: i - 1 for i in range(1, m + 1)}
    idx.update({-i: n - i for i in range(1, m + 1)})
    weights = [None] * n
    for i in range(1, m + 1):
        weights[idx[i]] = tuple(int(k == i - 1) for k in range(m))
        weights[idx[-i]] = tuple(-int(k == i - 1) for k in range(m))
    ops = []
    for i in range(1, m):
        a = _zero(n)
        a[idx[i]][idx[i + 1]] = Fraction(1)
        a[idx[-(i + 1)]][idx[-i]] = Fraction(-1)
        ops.append(a)
    a = _zero(n)
    a[idx[m]][idx[-m]] = Fraction(1)
    ops.append(a)
    return f"Sp{n}", weights, ops


def _so_odd_std(m: int):
    """Basis v_1..v_m, v_0, v_-m..v_-1 for the split form pairing v_i with v_-i."""
    n = 2 * m + 1
    idx = {i: i - 1 for i in range(1, m + 1)}
    idx[0] = m
    idx.update({-i: n - i for i in range(1, m + 1)})
    weights = [None] * n
    weights[idx[0]] = (0,) * m
    for i in range(1, m + 1):
        weights[idx[i]] = tuple(int(k == i - 1) for k in range(m))
        weights[idx[-i]] = tuple(-int(k == i - 1) for k in range(m))
    ops = []
    for i in range(1, m):
        a = _zero(n)
        a[idx[i]][idx[i + 1]] = Fraction(1)
        a[idx[-(i + 1)]][idx[-i]] = Fraction(-1)
        ops.append(a)
    a = _zero(n)
    a[idx[m]][idx[0]] = Fraction(1)
    a[idx[0]][idx[-m]] = Fraction(-1)
    ops.append(a)
    return f"SO{n}", weights, ops


def _sum_ops(ops, n) -> Matrix:
    out = _zero(n)
    for a in ops:
        for i in range(n):
            for j in range(n):
                out[i][j] += a[i][j]
    return _mat(out)


def _wedge(weights, x: Matrix, k: int):
    """Induced derivation on the k-th exterior power, basis of increasing k-subsets."""
    n = len(weights)
    basis = list(combinations(range(n), k))
    pos = {b: i for i, b in enumerate(basis)}
    out = _zero(len(basis))
    for col, b in enumerate(basis):
        for slot, j in enumerate(b):
            for i in range(n):
                c = x[i][j]
                if not c or i in b:
                    continue
                new = list(b)
                new[slot] = i
                order = sorted(range(k), key=lambda t: new[t])
                sign = _perm_sign(order)
                out[pos[tuple(sorted(new))]][col] += sign * c
    w = [tuple(map(sum, zip(*[weights[j] for j in b]))) for b in basis]
    return w, _mat(out)


def _sym(weights, x: Matrix, k: int):
    """Induced derivation on the k-th symmetric power, monomial basis."""
    n = len(weights)
    basis = list(combinations_with_replacement(range(n), k))
    pos = {b: i for i, b in enumerate(basis)}
    out = _zero(len(basis))
    for col, b in enumerate(basis):
        for slot, j in enumerate(b):
            for i in range(n):
                c = x[i][j]
                if not c:
                    continue
                new = tuple(sorted(b[:slot] + (i,) + b[slot + 1:]))
                out[pos[new]][col] += c
    w = [tuple(map(sum, zip(*[weights[j] for j in b]))) for b in basis]
    return w, _mat(out)


def _perm_sign(order: Sequence[int]) -> int:
    sign = 1
    seq = list(order)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def _restrict(weights, x: Matrix, basis: list[list[Fraction]]):
    """Action on an invariant subspace spanned by weight vectors ``basis``."""
    n = len(weights)
    k = len(basis)
    cols = basis
    out = []
    for v in cols:
        xv = [sum(x[i][j] * v[j] for j in range(n)) for i in range(n)]
        # solve sum_c a_c cols[c] = xv
        aug = [[cols[c][i] for c in range(k)] + [xv[i]] for i in range(n)]
        from .lattice import rational_rref
        red, piv = rational_rref(aug)
        if k in piv:
            raise UnsupportedModel("subspace is not invariant")
        sol = [Fraction(0)] * k
        for r, p in enumerate(piv):
            sol[p] = red[r][k]
        out.append(sol)
    mat = [[out[c][r] for c in range(k)] for r in range(k)]
    w = []
    for v in cols:
        support = {tuple(weights[i]) for i in range(n) if v[i]}
        assert len(support) == 1, "basis vector is not a weight vector"
        w.append(support.pop())
    return w, _mat(mat)


def _primitive_wedge2_sp(m: int):
    """Kernel of the symplectic contraction on the exterior square of the standard."""
    _, weights, ops = _sp_std(m)
    n = 2 * m
    x = _sum_ops(ops, n)
    w2, x2 = _wedge(weights, x, 2)
    basis2 = list(combinations(range(n), 2))
    vectors = []
    zero_pairs = []
    for c, (a, b) in enumerate(basis2):
        if b == n - 1 - a:  # v_i ^ v_-i
            zero_pairs.append(c)
        else:
            v = [Fraction(0)] * len(basis2)
            v[c] = Fraction(1)
            vectors.append(v)
    # contraction sends each v_i ^ v_-i to 1: kernel spanned by differences
    for c1, c2 in zip(zero_pairs, zero_pairs[1:]):
        v = [Fraction(0)] * len(basis2)
        v[c1], v[c2] = Fraction(1), Fraction(-1)
        vectors.append(v)
    return _restrict(w2, x2, vectors)


def _sl3_adjoint():
    """ad(E12 + E23) on sl3 with basis E_ij (i != j), H1, H2."""
    basis = [(i, j) for i in range(3) for j in range(3) if i != j] + ["H1", "H2"]

    def elem(b):
        m = [[Fraction(0)] * 3 for _ in range(3)]
        if b == "H1":
            m[0][0], m[1][1] = Fraction(1), Fraction(-1)
        elif b == "H2":
            m[1][1], m[2][2] = Fraction(1), Fraction(-1)
        else:
            m[b[0]][b[1]] = Fraction(1)
        return m

    def coords(m):
        out = [m[i][j] for (i, j) in basis[:6]]
        out += [m[0][0], -m[2][2]]
        return out

    x = elem((0, 1))
    y = elem((1, 2))
    xm = [[x[i][j] + y[i][j] for j in range(3)] for i in range(3)]
    cols = []
    for b in basis:
        m = elem(b)
        br = [[sum(xm[i][k] * m[k][j] - m[i][k] * xm[k][j] for k in range(3))
               for j in range(3)] for i in range(3)]
        cols.append(coords(br))
    mat = [[cols[c][r] for c in range(8)] for r in range(8)]
    weights = []
    for b in basis:
        if isinstance(b, tuple):
            weights.append(tuple(int(k == b[0]) - int(k == b[1]) for k in range(3)))
        else:
            weights.append((0, 0, 0))
    return weights, _mat(mat)


def _builders() -> dict[str, Callable[[], MatrixModel]]:
    out: dict[str, Callable[[], MatrixModel]] = {}

    def add(name, datum, hw, make):
        out[name] = lambda: MatrixModel(name, datum, tuple(hw), *map(_freeze, make()))

    for n in range(2, 7):
        for k in range(1, n):
            def make(n=n, k=k):
                _, w, ops = _gl_std(n)
                return _wedge(w, _sum_ops(ops, n), k)
            add(f"GL{n}-wedge{k}", f"GL{n}", (1,) * k + (0,) * (n - k), make)
    for n, kmax in ((2, 6), (3, 4), (4, 2)):
        for k in range(2, kmax + 1):
            def make(n=n, k=k):
                _, w, ops = _gl_std(n)
                return _sym(w, _sum_ops(ops, n), k)
            add(f"GL{n}-sym{k}", f"GL{n}", (k,) + (0,) * (n - 1), make)
    for m in (1, 2, 3):
        def make(m=m):
            _, w, ops = _so_odd_std(m)
            return w, _sum_ops(ops, 2 * m + 1)
        add(f"SO{2 * m + 1}-std", f"SO{2 * m + 1}", (1,) + (0,) * (m - 1), make)
    for m in (2, 3):
        for k in range(2, m + 1):
            def make(m=m, k=k):
                _, w, ops = _so_odd_std(m)
                return _wedge(w, _sum_ops(ops, 2 * m + 1), k)
            add(f"SO{2 * m + 1}-wedge{k}", f"SO{2 * m + 1}", (1,) * k + (0,) * (m - k), make)
    for m in (2, 3):
        def make(m=m):
            _, w, ops = _sp_std(m)
            return w, _sum_ops(ops, 2 * m)
        add(f"Sp{2 * m}-std", f"Sp{2 * m}", (1,) + (0,) * (m - 1), make)
        def make2(m=m):
            _, w, ops = _sp_std(m)
            return _sym(w, _sum_ops(ops, 2 * m), 2)
        add(f"Sp{2 * m}-sym2", f"Sp{2 * m}", (2,) + (0,) * (m - 1), make2)
        add(f"Sp{2 * m}-wedge2prim", f"Sp{2 * m}", (1, 1) + (0,) * (m - 2),
            lambda m=m: _primitive_wedge2_sp(m))
    add("SL3-adjoint", "GL3", (1, 0, -1), _sl3_adjoint)
    return out


def _freeze(obj):
    if isinstance(obj, tuple) and obj and isinstance(obj[0], tuple) and obj[0] and isinstance(obj[0][0], Fraction):
        return obj
    return tuple(tuple(x) for x in obj)


_BUILDERS = _builders()
_ALIASES = {"SO3": "SO3-std", "SO5": "SO5-std", "Sp4-5dim": "Sp4-wedge2prim",
            "Sp4-five": "Sp4-wedge2prim", "SL3-adj": "SL3-adjoint"}


def builtin_models() -> tuple[str, ...]:
    return tuple(sorted(_BUILDERS))


@lru_cache(maxsize=None)
def matrix_model(name: str) -> MatrixModel:
    key = _ALIASES.get(name, name)
    if key not in _BUILDERS:
        raise UnsupportedModel(f"no built-in model named {name!r}")
    model = _BUILDERS[key]()
    if model.dimension > 50:
        raise UnsupportedModel(f"{name} has dimension {model.dimension} > 50")
    return model


def model_datum(model: MatrixModel) -> RootDatum:
    return build_root_datum(model.datum)


# --------------------------------------------------------------------------
# stalk tables

@dataclass(frozen=True)
class StalkTable:
    """Stalk cohomology of IC_label along each stratum.

    ``rows`` holds, per stratum lam, the pairs (degree, dimension) with
    degree = -2i - (2rho, lam) for the q^i coefficient of the stratum
    polynomial.  The same polynomial is the costalk generating function.
    """

    label: NormalForm
    label_dim: int
    rows: tuple[tuple[NormalForm, int, tuple[tuple[int, int], ...]], ...]

    def strata(self) -> tuple[NormalForm, ...]:
        return tuple(r[0] for r in self.rows)

    def stratum_dim(self, lam) -> int:
        return self._row(lam)[1]

    def degrees(self, lam) -> dict[int, int]:
        return dict(self._row(lam)[2])

    def polynomial(self, lam) -> QPoly:
        _, d, entries = self._row(lam)
        return QPoly({2 * ((-deg - d) // 2): dim for deg, dim in entries})

    def _row(self, lam):
        lam = tuple(lam)
        for r in self.rows:
            if r[0] == lam:
                return r
        raise KeyError(lam)


def ic_stalk_table(ech: EchelonData, cl: CoinvariantLattice, mu: Sequence[int]) -> StalkTable:
    mu = tuple(mu)
    strata = closure_strata(cl, mu)
    fd = ech.folded_datum
    top = cl.free_part(mu)
    d_mu = pairing_2rho(cl, mu)
    rows = []
    for lam in strata:
        poly = kato_lusztig_poly(fd, top, cl.free_part(lam))
        d_lam = pairing_2rho(cl, lam)
        if poly.q_coeffs() and len(poly.q_coeffs()) - 1 > (d_mu - d_lam) // 2:
            raise DecompositionFailure(f"stalk degree bound violated at {lam}")
        entries = tuple((-2 * i - d_lam, int(c)) for i, c in enumerate(poly.q_coeffs()) if c)
        rows.append((lam, d_lam, tuple(sorted(entries))))
    return StalkTable(mu, d_mu, tuple(rows))

"""Integer matrices, Smith normal form, and finitely generated abelian groups.

Matrices are tuples of row tuples of Python ints.  Vectors are tuples.
Nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NotFiniteOrder

IntMatrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]


# --------------------------------------------------------------------------
# basic matrix helpers

def as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in r) for r in rows)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zeros(m: int, n: int) -> IntMatrix:
    return tuple((0,) * n for _ in range(m))


def transpose(a: Sequence[Sequence]) -> tuple:
    if not a:
        return ()
    return tuple(zip(*a))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def vadd(u: Sequence, v: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(u, v))


def vscale(c, v: Sequence) -> tuple:
    return tuple(c * x for x in v)


def matpow(a: IntMatrix, k: int) -> IntMatrix:
    out = identity(len(a))
    for _ in range(k):
        out = matmul(out, a)
    return out


def determinant(a: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rational_rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    if not a:
        return a, pivots
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rational_rref(rows)[1])


def rational_inverse(a: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(a)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(a)]
    red, piv = rational_rref(aug)
    if piv[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def integer_inverse(a: IntMatrix) -> IntMatrix:
    inv = rational_inverse(a)
    if any(x.denominator != 1 for r in inv for x in r):
        raise ValueError("matrix is not unimodular")
    return as_matrix(inv)


def solve_rational(cols: Sequence[Sequence], target: Sequence) -> tuple[Fraction, ...] | None:
    """Coordinates c with sum c_j cols[j] = target, or None if no solution.

    ``cols`` must be linearly independent.
    """
    k = len(cols)
    if k == 0:
        return () if all(x == 0 for x in target) else None
    n = len(target)
    aug = [[cols[j][i] for j in range(k)] + [target[i]] for i in range(n)]
    red, piv = rational_rref(aug)
    if k in piv:
        return None
    if piv != list(range(k)):
        raise ValueError("columns are linearly dependent")
    return tuple(red[j][k] for j in range(k))


# --------------------------------------------------------------------------
# Smith and Hermite normal forms

def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (D, U, V) with U*M*V = D diagonal, d_1 | d_2 | ..., d_i >= 0."""
    a = [list(map(int, r)) for r in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = [list(r) for r in identity(rows)]
    v = [list(r) for r in identity(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, c):  # col_dst += c * col_src
        for r in a:
            r[dst] += c * r[src]
        for r in v:
            r[dst] += c * r[src]

    for t in range(min(rows, cols)):
        entries = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            clean = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        clean = False
            if not clean:
                cand = [(abs(a[i][t]), i, t) for i in range(t + 1, rows) if a[i][t]]
                cand += [(abs(a[t][j]), t, j) for j in range(t + 1, cols) if a[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return as_matrix(a), as_matrix(u), as_matrix(v)


def hermite_rows(rows: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form H = T * rows with T unimodular.

    Zero rows are kept at the bottom; pivots are positive and entries above
    a pivot are reduced into [0, pivot).
    """
    a = [list(map(int, r)) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    t = [list(r) for r in identity(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [(abs(a[i][c]), i) for i in range(r, m) if a[i][c]]
            if not nz:
                break
            _, p = min(nz)
            a[r], a[p] = a[p], a[r]
            t[r], t[p] = t[p], t[r]
            done = True
            for i in range(r + 1, m):
                if a[i][c]:
                    f = a[i][c] // a[r][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                    t[i] = [x - f * y for x, y in zip(t[i], t[r])]
                    if a[i][c]:
                        done = False
            if done:
                break
        if r < m and a[r][c]:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
                t[r] = [-x for x in t[r]]
            for i in range(r):
                f = a[i][c] // a[r][c]
                if f:
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                    t[i] = [x - f * y for x, y in zip(t[i], t[r])]
            r += 1
    return as_matrix(a), as_matrix(t)


def integer_kernel(m: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    """Saturated Z-basis (as rows) of {x : M x = 0}, in Hermite form."""
    if not m:
        return identity(ncols or 0)
    d, _, v = smith_normal_form(m)
    n = len(m[0])
    nonzero = sum(1 for i in range(min(len(d), n)) if d[i][i])
    basis = [tuple(v[r][c] for r in range(n)) for c in range(nonzero, n)]
    if not basis:
        return ()
    h, _ = hermite_rows(basis)
    return tuple(r for r in h if any(r))


# --------------------------------------------------------------------------
# finitely generated abelian groups

@dataclass(frozen=True)
class FgAbelianGroup:
    """Z^n modulo the span of the relation columns, in normalized coordinates.

    Elements are flat tuples (free coordinates..., torsion coordinates...),
    torsion coordinate i reduced into [0, d_i).
    """

    ambient_rank: int
    free_rank: int
    torsion: tuple[int, ...]
    relations: IntMatrix  # columns generate the relation sublattice
    normal_form_map: IntMatrix  # one row per normalized coordinate
    lifts: IntMatrix  # row k is a preimage of the k-th normalized generator

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def order_of_torsion(self) -> int:
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def reduce(self, coords: Sequence[int]) -> Vector:
        f = self.free_rank
        return tuple(coords[:f]) + tuple(c % d for c, d in zip(coords[f:], self.torsion))

    def normal_form(self, x: Sequence[int]) -> Vector:
        return self.reduce(matvec(self.normal_form_map, x))

    def lift(self, element: Sequence[int]) -> Vector:
        out = [0] * self.ambient_rank
        for c, row in zip(element, self.lifts):
            for i, y in enumerate(row):
                out[i] += c * y
        return tuple(out)

    def add(self, a: Sequence[int], b: Sequence[int]) -> Vector:
        return self.reduce(vadd(a, b))

    def sub(self, a: Sequence[int], b: Sequence[int]) -> Vector:
        return self.reduce(vsub(a, b))

    def scale(self, c: int, a: Sequence[int]) -> Vector:
        return self.reduce(vscale(c, a))

    def zero(self) -> Vector:
        return (0,) * self.ngens

    def free_part(self, a: Sequence[int]) -> Vector:
        return tuple(a[: self.free_rank])

    def torsion_part(self, a: Sequence[int]) -> Vector:
        return tuple(a[self.free_rank:])

    def describe(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("ℤ" if self.free_rank == 1 else f"ℤ^{self.free_rank}")
        parts += [f"ℤ/{d}" for d in self.torsion]
        return " ⊕ ".join(parts) if parts else "0"


def quotient(n: int, relation_columns: Sequence[Sequence[int]]) -> FgAbelianGroup:
    """Z^n modulo the subgroup generated by ``relation_columns``."""
    rels = [tuple(c) for c in relation_columns if any(c)]
    if not rels:
        ident = identity(n)
        return FgAbelianGroup(n, n, (), (), ident, ident)
    r_mat = transpose(rels)  # n x k
    d, u, _ = smith_normal_form(r_mat)
    k = len(rels)
    diag = [d[i][i] if i < k else 0 for i in range(n)]
    free_idx = [i for i in range(n) if diag[i] == 0]
    tors_idx = [i for i in range(n) if diag[i] > 1]
    torsion = tuple(diag[i] for i in tors_idx)
    u_inv = integer_inverse(u)

    # canonical free coordinates: Hermite form of the raw free functionals
    f_raw = [u[i] for i in free_idx]
    if f_raw:
        h, a = hermite_rows(f_raw)
    else:
        h, a = (), ()
    a_inv = integer_inverse(a) if a else ()

    # torsion functionals re-split against the free pivots
    t_rows = []
    shifts = []  # shifts[k][j]: multiple of free row j subtracted from torsion row k
    pivots = [next(c for c, x in enumerate(row) if x) for row in h]
    for idx, dk in zip(tors_idx, torsion):
        t = list(u[idx])
        sh = []
        for row, p in zip(h, pivots):
            c = (t[p] % dk) // row[p] if row[p] else 0
            t = [x - c * y for x, y in zip(t, row)]
            sh.append(c)
        t_rows.append(tuple(x % dk for x in t))
        shifts.append(sh)
    nf_map = tuple(h) + tuple(t_rows)

    # lifts expressed through raw SNF coordinates y = U x
    lifts = []
    for j in range(len(free_idx)):
        y = [0] * n
        yf = [a_inv[i][j] for i in range(len(free_idx))]
        for i, val in zip(free_idx, yf):
            y[i] = val
        for k, idx in enumerate(tors_idx):
            y[idx] = shifts[k][j]
        lifts.append(matvec(u_inv, y))
    for idx in tors_idx:
        y = [0] * n
        y[idx] = 1
        lifts.append(matvec(u_inv, y))

    group = FgAbelianGroup(n, len(free_idx), torsion, r_mat, nf_map, tuple(lifts))
    for c in rels:
        assert group.normal_form(c) == group.zero(), "relation not killed"
    for k in range(group.ngens):
        e = tuple(int(i == k) for i in range(group.ngens))
        assert group.normal_form(group.lift(e)) == e, "bad lift"
    return group


def _check_finite_order(gamma: IntMatrix, order: int | None) -> int:
    n = len(gamma)
    if abs(determinant(gamma)) != 1:
        raise NotFiniteOrder("automorphism is not invertible over the integers")
    ident = identity(n)
    if order is not None:
        if matpow(gamma, order) != ident:
            raise NotFiniteOrder(f"gamma^{order} is not the identity")
        return order
    g = gamma
    for e in range(1, 25):
        if g == ident:
            return e
        g = matmul(g, gamma)
    raise NotFiniteOrder("automorphism has no finite order up to 24")


def coinvariants(rank: int, gamma: Sequence[Sequence[int]], order: int | None = None
                 ) -> tuple[FgAbelianGroup, IntMatrix]:
    """Z^rank / image(1 - gamma), with the projection to normalized coordinates."""
    g = as_matrix(gamma)
    if len(g) != rank:
        raise ValueError("gamma has the wrong size")
    _check_finite_order(g, order)
    one_minus = [[int(i == j) - g[i][j] for j in range(rank)] for i in range(rank)]
    group = quotient(rank, transpose(one_minus))
    return group, group.normal_form_map


def invariants(rank: int, gamma: Sequence[Sequence[int]], order: int | None = None) -> IntMatrix:
    """Saturated Z-basis (rows) of ker(1 - gamma)."""
    g = as_matrix(gamma)
    _check_finite_order(g, order)
    one_minus = [[int(i == j) - g[i][j] for j in range(rank)] for i in range(rank)]
    return integer_kernel(one_minus, rank)

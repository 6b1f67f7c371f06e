"""Based root data, Weyl groups, and classical character theory.

A ``RootDatum`` lives on Z^n (characters) with the dual Z^n (cocharacters)
under the dot product.  Named families:

* ``GLn``, ``Sp2n``, ``SO2n+1``, ``SO2n`` in ambient e_i coordinates;
* ``SLn`` and the letter types ``A3``, ``B2``, ``E6`` ... (simply connected,
  fundamental-weight coordinates) and ``A3_ad`` ... (adjoint, simple-root
  coordinates);
* products joined by ``x``, e.g. ``GL4xGL1``.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import factorial, gcd
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import GroupTooLarge, NotDominant, RankTooLarge, UnknownType
from .lattice import IntMatrix, Vector, dot, identity, matmul, matvec, rational_inverse, vadd, vsub

WEYL_CAP = 10**6


# --------------------------------------------------------------------------
# weight multisets

class WeightMultiset(Mapping):
    """Finitely supported map weight -> positive multiplicity."""

    __slots__ = ("_d",)

    def __init__(self, data: Mapping | Iterable[tuple] = ()):
        d: dict = {}
        items = data.items() if isinstance(data, Mapping) else data
        for k, v in items:
            k = tuple(k)
            d[k] = d.get(k, 0) + v
        for k, v in list(d.items()):
            if v < 0:
                raise ValueError(f"negative multiplicity {v} at {k}")
            if v == 0:
                del d[k]
        self._d = d

    def __getitem__(self, k):
        return self._d.get(tuple(k), 0)

    def __contains__(self, k):
        return tuple(k) in self._d

    def __iter__(self) -> Iterator:
        return iter(sorted(self._d))

    def __len__(self):
        return len(self._d)

    def __eq__(self, other):
        if isinstance(other, Mapping):
            return self._d == {tuple(k): v for k, v in other.items() if v}
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._d.items()))

    def __repr__(self):
        return f"WeightMultiset({dict(sorted(self._d.items()))})"

    @property
    def dimension(self) -> int:
        return sum(self._d.values())

    def pushforward(self, f) -> "WeightMultiset":
        return WeightMultiset((f(k), v) for k, v in self._d.items())

    def scaled(self, c: int) -> "WeightMultiset":
        return WeightMultiset((k, c * v) for k, v in self._d.items())

    def __add__(self, other: "WeightMultiset") -> "WeightMultiset":
        return WeightMultiset(list(self._d.items()) + list(other.items()))


# --------------------------------------------------------------------------
# Cartan matrices (a_ij = <alpha_i^vee, alpha_j>) and classification

def cartan_matrix(family: str, r: int) -> IntMatrix:
    a = [[2 if i == j else 0 for j in range(r)] for i in range(r)]

    def link(i, j, aij=-1, aji=-1):
        a[i][j], a[j][i] = aij, aji

    if family == "A":
        for i in range(r - 1):
            link(i, i + 1)
    elif family in ("B", "C"):
        for i in range(r - 2):
            link(i, i + 1)
        if family == "B":  # last node short
            link(r - 2, r - 1, -1, -2)
        else:
            link(r - 2, r - 1, -2, -1)
    elif family == "D":
        for i in range(r - 2):
            link(i, i + 1)
        link(r - 3, r - 1)
    elif family == "E":
        # Bourbaki: 1-3-4-5-6-7-8 with 2 attached to 4
        link(0, 2)
        link(1, 3)
        for i in range(2, r - 1):
            link(i, i + 1)
    elif family == "F":
        link(0, 1)
        link(1, 2, -1, -2)
        link(2, 3)
    elif family == "G":
        link(0, 1, -3, -1)  # node 0 short
    return tuple(map(tuple, a))


_VALID = {"A": (1, None), "B": (2, None), "C": (2, None), "D": (3, None),
          "E": (6, 8), "F": (4, 4), "G": (2, 2)}


def classify_cartan(c: Sequence[Sequence[int]]) -> list[tuple[str, int, tuple[int, ...]]]:
    """Decompose a Cartan matrix into irreducible types.

    Returns (family, rank, node indices) per component, components ordered by
    their smallest node.  Rank-2 double bonds are reported as ``B``.
    """
    n = len(c)
    seen: set[int] = set()
    out = []
    for start in range(n):
        if start in seen:
            continue
        comp, todo = [], [start]
        seen.add(start)
        while todo:
            i = todo.pop()
            comp.append(i)
            for j in range(n):
                if j != i and c[i][j] and j not in seen:
                    seen.add(j)
                    todo.append(j)
        comp.sort()
        out.append((_classify_component(c, comp), len(comp), tuple(comp)))
    return out


def _classify_component(c, comp) -> str:
    r = len(comp)
    bonds = {}
    for i in comp:
        for j in comp:
            if i < j and c[i][j]:
                bonds[(i, j)] = c[i][j] * c[j][i]
    degree = {i: sum(1 for e in bonds if i in e) for i in comp}
    mults = sorted(bonds.values())
    if r == 1:
        return "A"
    if 3 in mults:
        return "G"
    if 2 in mults:
        if r == 4:
            (i, j), = [e for e, m in bonds.items() if m == 2]
            if degree[i] == 2 and degree[j] == 2:
                return "F"
        (i, j), = [e for e, m in bonds.items() if m == 2]
        end = i if degree[i] == 1 else j
        other = j if end == i else i
        if r == 2:
            return "B"
        # the end node is short iff its coroot pairs to -2 with the neighbour
        return "B" if c[end][other] == -2 else "C"
    if max(degree.values()) <= 2:
        return "A"
    branch = next(i for i in comp if degree[i] == 3)
    arms = []
    for nb in [j for j in comp if j != branch and c[branch][j]]:
        length, prev, cur = 1, branch, nb
        while True:
            nxt = [k for k in comp if k not in (prev, cur) and c[cur][k]]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[:2] == [1, 1]:
        return "D"
    return "E"


def weyl_order_of_type(family: str, r: int) -> int:
    if family == "A":
        return factorial(r + 1)
    if family in ("B", "C"):
        return 2**r * factorial(r)
    if family == "D":
        return 2 ** (r - 1) * factorial(r)
    return {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600,
            ("F", 4): 1152, ("G", 2): 12}[(family, r)]


# --------------------------------------------------------------------------
# the datum

@dataclass(frozen=True)
class RootDatum:
    """Roots in X^* = Z^rank, coroots in X_* = Z^rank, standard pairing."""

    name: str
    rank: int
    roots: tuple[Vector, ...]
    coroots: tuple[Vector, ...]
    simple: tuple[int, ...]

    def __post_init__(self):
        if len(self.roots) != len(self.coroots):
            raise ValueError("roots and coroots differ in number")
        for a, b in zip(self.roots, self.coroots):
            if len(a) != self.rank or len(b) != self.rank:
                raise ValueError("vector of wrong length")
            if dot(a, b) != 2:
                raise ValueError(f"<{a}, {b}> != 2")
        root_set = set(self.roots)
        coroot_set = set(self.coroots)
        for a, b in zip(self.roots, self.coroots):
            for x, y in zip(self.roots, self.coroots):
                k = dot(x, b)
                if vsub(x, tuple(k * t for t in a)) not in root_set:
                    raise ValueError("roots not stable under reflections")
                k2 = dot(a, y)
                if vsub(y, tuple(k2 * t for t in b)) not in coroot_set:
                    raise ValueError("coroots not stable under reflections")
        c = self.cartan
        for i in range(len(c)):
            for j in range(len(c)):
                if i != j and (c[i][j] > 0 or (c[i][j] == 0) != (c[j][i] == 0)):
                    raise ValueError("simple roots do not form a Cartan matrix")
        if len(self.positive) * 2 != len(self.roots):
            raise ValueError("simple roots are not a base")

    # structure
    @cached_property
    def simple_roots(self) -> tuple[Vector, ...]:
        return tuple(self.roots[i] for i in self.simple)

    @cached_property
    def simple_coroots(self) -> tuple[Vector, ...]:
        return tuple(self.coroots[i] for i in self.simple)

    @cached_property
    def cartan(self) -> IntMatrix:
        return tuple(tuple(dot(a, b) for b in self.simple_roots) for a in self.simple_coroots)

    @property
    def semisimple_rank(self) -> int:
        return len(self.simple)

    @cached_property
    def _coord_map(self) -> tuple[list[list[Fraction]], tuple[int, ...]]:
        """Left inverse of the simple-root matrix on a set of independent rows."""
        k = len(self.simple)
        if k == 0:
            return [], ()
        rows = []
        chosen: list[int] = []
        from .lattice import rank as mat_rank
        for i in range(self.rank):
            trial = rows + [[a[i] for a in self.simple_roots]]
            if mat_rank(trial) > len(rows):
                rows = trial
                chosen.append(i)
            if len(rows) == k:
                break
        return rational_inverse(rows), tuple(chosen)

    @cached_property
    def _int_coord_map(self) -> tuple[tuple[tuple[int, ...], ...], int]:
        """The left inverse as an integer matrix over a common denominator."""
        inv, _ = self._coord_map
        den = 1
        for row in inv:
            for x in row:
                den = den * x.denominator // gcd(den, x.denominator)
        return tuple(tuple(int(x * den) for x in row) for row in inv), den

    @cached_property
    def _height_functional(self) -> tuple[tuple[int, ...], int]:
        """(h, d) with height(v) = <h, v> / d on the root span."""
        num, den = self._int_coord_map
        chosen = self._coord_map[1]
        h = [0] * self.rank
        for row in num:
            for j, i in enumerate(chosen):
                h[i] += row[j]
        return tuple(h), den

    def height(self, v: Sequence[int]) -> int:
        """Sum of the simple-root coordinates of v, assumed in the root lattice."""
        if not self.simple:
            return 0
        h, den = self._height_functional
        return sum(x * y for x, y in zip(h, v)) // den

    def _coords_scaled(self, v: Sequence[int]) -> tuple[tuple[int, ...], int] | None:
        k = len(self.simple)
        num, den = self._int_coord_map
        chosen = self._coord_map[1]
        sub = [v[i] for i in chosen]
        c = tuple(sum(num[r][j] * sub[j] for j in range(k)) for r in range(k))
        recon = [sum(c[j] * a[i] for j, a in enumerate(self.simple_roots)) for i in range(self.rank)]
        if any(x != den * y for x, y in zip(recon, v)):
            return None
        return c, den

    def simple_coords(self, v: Sequence[int]) -> tuple[Fraction, ...] | None:
        """Coordinates of v in the simple-root basis, or None if v is off the span."""
        if not self.simple:
            return () if not any(v) else None
        res = self._coords_scaled(v)
        if res is None:
            return None
        c, den = res
        return tuple(Fraction(x, den) for x in c)

    def root_coords(self, v: Sequence[int]) -> tuple[int, ...] | None:
        """Integer simple-root coordinates, or None if v is not in the root lattice."""
        if not self.simple:
            return () if not any(v) else None
        res = self._coords_scaled(v)
        if res is None:
            return None
        c, den = res
        if any(x % den for x in c):
            return None
        return tuple(x // den for x in c)

    @cached_property
    def positive(self) -> tuple[int, ...]:
        out = []
        for i, a in enumerate(self.roots):
            c = self.simple_coords(a)
            if c is None:
                raise ValueError("root outside the span of the simple roots")
            if all(x >= 0 for x in c):
                out.append(i)
        return tuple(out)

    @cached_property
    def positive_roots(self) -> tuple[Vector, ...]:
        return tuple(self.roots[i] for i in self.positive)

    @cached_property
    def positive_coroots(self) -> tuple[Vector, ...]:
        return tuple(self.coroots[i] for i in self.positive)

    @cached_property
    def two_rho(self) -> Vector:
        out = (0,) * self.rank
        for a in self.positive_roots:
            out = vadd(out, a)
        return out

    @cached_property
    def two_rho_check(self) -> Vector:
        out = (0,) * self.rank
        for a in self.positive_coroots:
            out = vadd(out, a)
        return out

    def dual(self) -> "RootDatum":
        return self._dual

    @cached_property
    def _dual(self) -> "RootDatum":
        name = self.name if self.name.endswith("^") else self.name + "^"
        if self.name.endswith("^"):
            name = self.name[:-1]
        return RootDatum(name, self.rank, self.coroots, self.roots, self.simple)

    def is_dominant(self, lam: Sequence[int]) -> bool:
        return all(dot(lam, b) >= 0 for b in self.simple_coroots)

    def reflect(self, i: int, lam: Sequence[int]) -> Vector:
        """Simple reflection s_i applied to a weight."""
        k = dot(lam, self.simple_coroots[i])
        return tuple(x - k * a for x, a in zip(lam, self.simple_roots[i]))

    def to_dominant(self, lam: Sequence[int]) -> tuple[Vector, int]:
        """Dominant W-conjugate and the number of reflections used."""
        lam = tuple(lam)
        steps = 0
        while True:
            for i, b in enumerate(self.simple_coroots):
                if dot(lam, b) < 0:
                    lam = self.reflect(i, lam)
                    steps += 1
                    break
            else:
                return lam, steps

    def components(self) -> list[tuple[str, int, tuple[int, ...]]]:
        return classify_cartan(self.cartan)

    def weyl_order(self) -> int:
        out = 1
        for fam, r, _ in self.components():
            out *= weyl_order_of_type(fam, r)
        return out

    def type_label(self) -> str:
        comps = self.components()
        if not comps:
            return "T"
        return "x".join(f"{f}_{r}" for f, r, _ in comps)


# --------------------------------------------------------------------------
# construction

def _closure(simple_roots, simple_coroots) -> tuple[list, list]:
    """All (root, coroot) pairs generated from the simple ones by reflections."""
    pairs = list(zip(map(tuple, simple_roots), map(tuple, simple_coroots)))
    seen = set(pairs)
    queue = deque(pairs)
    while queue:
        a, b = queue.popleft()
        for sa, sb in zip(simple_roots, simple_coroots):
            k = dot(a, sb)
            k2 = dot(sa, b)
            na = tuple(x - k * y for x, y in zip(a, sa))
            nb = tuple(x - k2 * y for x, y in zip(b, sb))
            if (na, nb) not in seen:
                seen.add((na, nb))
                queue.append((na, nb))
    ordered = sorted(seen)
    return [p[0] for p in ordered], [p[1] for p in ordered]


def from_simple(name: str, rank: int, simple_roots, simple_coroots) -> RootDatum:
    roots, coroots = _closure(simple_roots, simple_coroots)
    index = {r: i for i, r in enumerate(roots)}
    simple = tuple(index[tuple(a)] for a in simple_roots)
    return RootDatum(name, rank, tuple(roots), tuple(coroots), simple)


def _e(n: int, i: int, c: int = 1) -> Vector:
    return tuple(c if k == i else 0 for k in range(n))


def _classical(kind: str, n: int) -> RootDatum:
    if kind == "GL":
        sr = [vsub(_e(n, i), _e(n, i + 1)) for i in range(n - 1)]
        return from_simple(f"GL{n}", n, sr, sr)
    m = n // 2
    sr = [vsub(_e(m, i), _e(m, i + 1)) for i in range(m - 1)]
    sc = list(sr)
    if kind == "Sp":
        sr.append(_e(m, m - 1, 2))
        sc.append(_e(m, m - 1, 1))
    elif kind == "SO" and n % 2:
        sr.append(_e(m, m - 1, 1))
        sc.append(_e(m, m - 1, 2))
    else:
        last = vadd(_e(m, m - 2), _e(m, m - 1))
        sr.append(last)
        sc.append(last)
    return from_simple(f"{kind}{n}", m, sr, sc)


def _letter(family: str, r: int, form: str) -> RootDatum:
    a = cartan_matrix(family, r)
    cols = [tuple(a[i][j] for i in range(r)) for j in range(r)]
    rows = [tuple(a[i]) for i in range(r)]
    unit = [_e(r, i) for i in range(r)]
    if form == "sc":
        return from_simple(f"{family}{r}", r, cols, unit)
    return from_simple(f"{family}{r}_ad", r, unit, rows)


def product(name: str, factors: Sequence[RootDatum]) -> RootDatum:
    rank = sum(f.rank for f in factors)
    sr, sc = [], []
    off = 0
    for f in factors:
        pad = lambda v: (0,) * off + tuple(v) + (0,) * (rank - off - f.rank)  # noqa: E731
        sr += [pad(v) for v in f.simple_roots]
        sc += [pad(v) for v in f.simple_coroots]
        off += f.rank
    return from_simple(name, rank, sr, sc)


_FACTOR = re.compile(r"^(GL|SL|PGL|Sp|SO)(\d+)$|^([A-G])(\d+)(_ad|_sc)?$")


def _factor(token: str) -> RootDatum:
    m = _FACTOR.match(token)
    if not m:
        raise UnknownType(f"unknown group type {token!r}")
    if m.group(1):
        kind, n = m.group(1), int(m.group(2))
        if n < 1:
            raise UnknownType(token)
        if kind == "GL":
            return _classical("GL", n)
        if kind in ("SL", "PGL"):
            if n < 2:
                raise UnknownType(token)
            if n - 1 > 8:
                raise RankTooLarge(f"{token}: rank {n - 1} > 8")
            d = _letter("A", n - 1, "sc" if kind == "SL" else "ad")
            return RootDatum(token, d.rank, d.roots, d.coroots, d.simple)
        if kind == "Sp":
            if n % 2 or n < 2:
                raise UnknownType(token)
            return _classical("Sp", n)
        if n < 3 or n == 4:
            raise UnknownType(f"{token}: not a supported orthogonal group")
        return _classical("SO", n)
    family, r, form = m.group(3), int(m.group(4)), (m.group(5) or "_sc")[1:]
    lo, hi = _VALID[family]
    if r < lo or (hi is not None and r > hi):
        raise UnknownType(f"{token}: no such type")
    if r > 8:
        raise RankTooLarge(f"{token}: rank {r} > 8")
    return _letter(family, r, form)


def build_root_datum(spec) -> RootDatum:
    """Build a validated datum from a name or an explicit mapping.

    The mapping form takes keys ``rank``, ``roots``, ``coroots`` and
    ``simples`` (indices into ``roots``); optional ``name``.
    """
    if isinstance(spec, Mapping):
        if "name" in spec and "roots" not in spec:
            return build_root_datum(spec["name"])
        try:
            return RootDatum(
                str(spec.get("name", "custom")),
                int(spec["rank"]),
                tuple(tuple(int(x) for x in r) for r in spec["roots"]),
                tuple(tuple(int(x) for x in r) for r in spec["coroots"]),
                tuple(int(i) for i in spec["simples"]),
            )
        except KeyError as exc:
            raise UnknownType(f"explicit datum is missing {exc}") from None
        except ValueError as exc:
            raise UnknownType(f"invalid explicit datum: {exc}") from None
    tokens = str(spec).strip().split("x")
    if not all(tokens):
        raise UnknownType(f"cannot parse {spec!r}")
    factors = [_factor(t) for t in tokens]
    if len(factors) == 1:
        return factors[0]
    return product(str(spec).strip(), factors)


# --------------------------------------------------------------------------
# Weyl groups

@dataclass(frozen=True)
class WeylGroup:
    """Elements as integer matrices on X^* (acting on column vectors)."""

    simple_reflections: tuple[IntMatrix, ...]
    elements: tuple[IntMatrix, ...]
    words: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def length(self, k: int) -> int:
        return len(self.words[k])

    def act(self, k: int, v: Sequence[int]) -> Vector:
        return matvec(self.elements[k], v)


@lru_cache(maxsize=64)
def _weyl_group_cached(rd: RootDatum, cap: int) -> WeylGroup:
    expected = rd.weyl_order()
    if expected > cap:
        raise GroupTooLarge(f"|W| = {expected} exceeds cap {cap}")
    n = rd.rank
    gens = []
    for a, b in zip(rd.simple_roots, rd.simple_coroots):
        gens.append(tuple(tuple(int(i == j) - a[i] * b[j] for j in range(n)) for i in range(n)))
    simple = list(zip(rd.simple_roots, rd.simple_coroots))
    start = identity(n)
    elements = [start]
    words = [()]
    index = {start: 0}
    head = 0
    while head < len(elements):
        g, w = elements[head], words[head]
        head += 1
        for i, (a, b) in enumerate(simple):
            # g * s_i = g - (g a) b^T, a rank-one update
            ga = [sum(x * y for x, y in zip(row, a)) for row in g]
            h = tuple(tuple(x - c * y for x, y in zip(row, b)) for row, c in zip(g, ga))
            if h not in index:
                index[h] = len(elements)
                elements.append(h)
                words.append(w + (i,))
    if len(elements) != expected:
        raise AssertionError(f"Weyl group order {len(elements)} != {expected}")
    return WeylGroup(tuple(gens), tuple(elements), tuple(words))


def weyl_group(rd: RootDatum, cap: int = WEYL_CAP) -> WeylGroup:
    if rd.semisimple_rank > 8:
        raise GroupTooLarge(f"semisimple rank {rd.semisimple_rank} > 8")
    return _weyl_group_cached(rd, cap)


# --------------------------------------------------------------------------
# characters

def weyl_dimension(rd: RootDatum, lam: Sequence[int]) -> int:
    if not rd.is_dominant(lam):
        raise NotDominant(f"{tuple(lam)} is not dominant")
    num = Fraction(1)
    shifted = vadd(vadd(lam, lam), rd.two_rho)
    for b in rd.positive_coroots:
        num *= Fraction(dot(shifted, b), dot(rd.two_rho, b))
    assert num.denominator == 1
    return int(num)


def _form(rd: RootDatum, x: Sequence[int], y: Sequence[int]) -> int:
    """W-invariant form sum over all coroots of <x,b><y,b>."""
    return sum(dot(x, b) * dot(y, b) for b in rd.coroots)


@lru_cache(maxsize=64)
def _gram(rd: RootDatum) -> tuple[tuple[int, ...], ...]:
    n = rd.rank
    return tuple(tuple(sum(b[i] * b[j] for b in rd.coroots) for j in range(n)) for i in range(n))


def _quad(gram: tuple[tuple[int, ...], ...], x: Sequence[int]) -> int:
    return sum(xi * sum(g * y for g, y in zip(row, x)) for xi, row in zip(x, gram))


def _height(rd: RootDatum, v: Sequence[int]) -> int:
    return rd.height(v)


@lru_cache(maxsize=256)
def _character(rd: RootDatum, lam: Vector) -> dict[Vector, int]:
    if len(rd.simple) == 1:
        # an sl_2 string: lam, lam - a, ..., s_a(lam), all of multiplicity one
        a = rd.simple_roots[0]
        k = dot(lam, rd.simple_coroots[0])
        return {tuple(x - j * y for x, y in zip(lam, a)): 1 for j in range(k + 1)}
    # weight support by saturation along root strings
    support = {lam}
    todo = [lam]
    while todo:
        mu = todo.pop()
        for a, b in zip(rd.positive_roots, rd.positive_coroots):
            k = dot(mu, b)
            if k == 0:
                continue
            # one step towards the reflection, and the reflection itself
            step = -1 if k > 0 else 1
            for nu in (tuple(x + step * y for x, y in zip(mu, a)),
                       tuple(x - k * y for x, y in zip(mu, a))):
                if nu not in support:
                    support.add(nu)
                    todo.append(nu)
    h, hden = rd._height_functional if rd.simple else ((0,) * rd.rank, 1)
    order = sorted(support, key=lambda m: (sum(x * y for x, y in zip(h, m)) * -1, m))
    n = rd.rank
    two_rho = rd.two_rho
    gram = _gram(rd)
    lr = tuple(2 * x + y for x, y in zip(lam, two_rho))
    top = _quad(gram, lr)
    pos = rd.positive_roots
    simple_coroots = rd.simple_coroots
    # B(x, a) = <x, f_a> with f_a = sum_b <a, b> b over all coroots
    fa = [tuple(sum(dot(a, b) * b[i] for b in rd.coroots) for i in range(n)) for a in pos]
    pairs = list(zip(pos, fa))
    # tails[mu][j] = sum_{k >= 1} m(mu + k a_j) B(mu + k a_j, a_j), by running sums along strings
    tails: dict[Vector, list[int]] = {}
    mult: dict[Vector, int] = {}
    for mu in order:
        t = []
        for j, (a, f) in enumerate(pairs):
            nu = tuple([x + y for x, y in zip(mu, a)])
            tn = tails.get(nu)
            if tn is None:
                t.append(0)
            else:
                t.append(tn[j] + mult[nu] * sum([x * y for x, y in zip(nu, f)]))
        tails[mu] = t
        if mu == lam:
            mult[mu] = 1
            continue
        if any(sum([x * y for x, y in zip(mu, b)]) < 0 for b in simple_coroots):
            mult[mu] = mult[rd.to_dominant(mu)[0]]
            continue
        mr = [2 * x + y for x, y in zip(mu, two_rho)]
        denom = top - _quad(gram, mr)  # four times the usual difference
        value, rem = divmod(8 * sum(t), denom)
        assert rem == 0 and value >= 0, (lam, mu, denom)
        mult[mu] = value
    return {k: v for k, v in mult.items() if v}


def weyl_character(rd: RootDatum, lam: Sequence[int]) -> WeightMultiset:
    """Weight multiset of the irreducible representation of highest weight lam."""
    lam = tuple(lam)
    if len(lam) != rd.rank:
        raise ValueError("weight has the wrong length")
    if not rd.is_dominant(lam):
        raise NotDominant(f"{lam} is not dominant")
    return WeightMultiset(_character(rd, lam))


def weight_multiplicity(rd: RootDatum, lam: Sequence[int], mu: Sequence[int]) -> int:
    return weyl_character(rd, lam)[tuple(mu)]


def dominant_weights_below(rd: RootDatum, lam: Sequence[int]) -> list[Vector]:
    """Dominant weights of V_lam, sorted by decreasing height then value."""
    ch = weyl_character(rd, lam)
    return sorted((m for m in ch if rd.is_dominant(m)),
                  key=lambda m: (_height(rd, vsub(lam, m)), m))


def dominant_weights_up_to_dim(rd: RootDatum, bound: int) -> list[Vector]:
    """All dominant lam with dim V_lam <= bound, for a semisimple datum.

    The Weyl dimension grows in each fundamental coordinate, so the search box
    is cut off along each fundamental ray where dim(k omega_i) exceeds bound.
    """
    r = rd.rank
    if rd.semisimple_rank != r:
        raise ValueError("dimension bounds need a semisimple datum")
    if r == 0:
        return [()]
    # omega_i: rational weights with <omega_i, b_j> = delta_ij
    inv = rational_inverse([list(b) for b in rd.simple_coroots])
    omegas = [tuple(inv[i][j] for i in range(r)) for j in range(r)]

    def dim(x) -> Fraction:
        shifted = vadd(vadd(x, x), rd.two_rho)
        out = Fraction(1)
        for b in rd.positive_coroots:
            out *= Fraction(dot(shifted, b), dot(rd.two_rho, b))
        return out

    caps = []
    for w in omegas:
        k = 0
        while dim(tuple((k + 1) * x for x in w)) <= bound:
            k += 1
        caps.append(k)
    out = []

    def walk(i: int, acc: tuple[Fraction, ...]) -> None:
        if dim(acc) > bound:
            return
        if i == r:
            if all(x.denominator == 1 for x in acc):
                out.append(tuple(int(x) for x in acc))
            return
        for k in range(caps[i] + 1):
            nxt = tuple(x + k * y for x, y in zip(acc, omegas[i]))
            if dim(nxt) > bound:
                break
            walk(i + 1, nxt)

    walk(0, tuple(Fraction(0) for _ in range(r)))
    return sorted(out)

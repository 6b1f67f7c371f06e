"""Exact value types: cyclotomic numbers and Laurent polynomials.

``Cyclo`` is an element of Q(zeta_e) stored in the power basis modulo the
cyclotomic polynomial.  ``QPoly`` is a Laurent polynomial in t = q^{1/2}
with coefficients in Q or Q(zeta_e).  ``MPoly`` is a multivariate Laurent
polynomial used for character identities.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction, "Cyclo"]


# --------------------------------------------------------------------------
# cyclotomic numbers

def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Integer polynomial division by a monic divisor (coefficients low to high)."""
    num = list(num)
    out = [0] * max(len(num) - len(den) + 1, 1)
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1]
        out[k] = c
        if c:
            for j, d in enumerate(den):
                num[k + j] -= c * d
    return out, num[: len(den) - 1]


@lru_cache(maxsize=None)
def cyclotomic_poly(e: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the e-th cyclotomic polynomial."""
    if e < 1:
        raise ValueError("order must be positive")
    p = [-1] + [0] * (e - 1) + [1]
    for d in range(1, e):
        if e % d == 0:
            p, rem = _poly_divmod(p, list(cyclotomic_poly(d)))
            assert not any(rem)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p)


def _reduce(coeffs: list, e: int) -> tuple[Fraction, ...]:
    phi = cyclotomic_poly(e)
    n = len(phi) - 1
    c = [Fraction(x) for x in coeffs]
    for k in range(len(c) - 1, n - 1, -1):
        a = c[k]
        if a:
            for j in range(n + 1):
                c[k - n + j] -= a * phi[j]
    c = c[:n] + [Fraction(0)] * (n - len(c))
    return tuple(c)


class Cyclo:
    """Element of the cyclotomic field Q(zeta_e)."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable):
        self.order = order
        self.coeffs = _reduce(list(coeffs), order)

    @classmethod
    def zeta(cls, e: int, k: int = 1) -> Scalar:
        k %= e
        return simplify(cls(e, [0] * k + [1]))

    def rational(self) -> Fraction | None:
        if all(x == 0 for x in self.coeffs[1:]):
            return self.coeffs[0] if self.coeffs else Fraction(0)
        return None

    def _lift(self, e: int) -> "Cyclo":
        if e == self.order:
            return self
        step = e // self.order
        c = [Fraction(0)] * (step * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            c[i * step] = a
        return Cyclo(e, c)

    @staticmethod
    def _common(a: Scalar, b: Scalar) -> tuple["Cyclo", "Cyclo"]:
        ea = a.order if isinstance(a, Cyclo) else 1
        eb = b.order if isinstance(b, Cyclo) else 1
        e = ea * eb // gcd(ea, eb)
        return _as_cyclo(a, e), _as_cyclo(b, e)

    def __add__(self, other):
        if not isinstance(other, (int, Fraction, Cyclo)):
            return NotImplemented
        a, b = Cyclo._common(self, other)
        return simplify(Cyclo(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)]))

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.order, [-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return simplify(Cyclo(self.order, [x * other for x in self.coeffs]))
        if not isinstance(other, Cyclo):
            return NotImplemented
        a, b = Cyclo._common(self, other)
        prod = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs))
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    prod[i + j] += x * y
        return simplify(Cyclo(a.order, prod))

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        """Multiplicative inverse by solving the multiplication-matrix system."""
        n = len(self.coeffs)
        cols = []
        for j in range(n):
            basis = Cyclo(self.order, [0] * j + [1])
            cols.append(_as_cyclo(self * basis, self.order).coeffs)
        mat = [[cols[j][i] for j in range(n)] for i in range(n)]
        rhs = [Fraction(1)] + [Fraction(0)] * (n - 1)
        sol = _solve_square(mat, rhs)
        return simplify(Cyclo(self.order, sol))

    def __truediv__(self, other):
        return self * _inverse(other)

    def __pow__(self, n: int):
        if n < 0:
            return _inverse(self) ** (-n)
        out: Scalar = Fraction(1)
        for _ in range(n):
            out = out * self
        return out

    def __rtruediv__(self, other):
        return other * self.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            r = self.rational()
            return r is not None and r == other
        if not isinstance(other, Cyclo):
            return NotImplemented
        a, b = Cyclo._common(self, other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        r = self.rational()
        if r is not None:
            return hash(r)
        return hash("cyclo")  # equal elements may live in different orders

    def __str__(self):
        terms = []
        for k, a in enumerate(self.coeffs):
            if a == 0:
                continue
            mono = "" if k == 0 else (f"z{self.order}" if k == 1 else f"z{self.order}^{k}")
            terms.append(_term(a, mono, "*"))
        return _join(terms) if terms else "0"

    __repr__ = __str__

    def to_json(self):
        return {"zeta": self.order, "coeffs": [_frac_json(x) for x in self.coeffs]}


def _solve_square(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(mat)
    a = [list(row) + [r] for row, r in zip(mat, rhs)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def _as_cyclo(x: Scalar, e: int) -> Cyclo:
    if isinstance(x, Cyclo):
        return x._lift(e)
    return Cyclo(e, [x])


def simplify(x: Scalar) -> Scalar:
    """Collapse a rational-valued Cyclo to a Fraction."""
    if isinstance(x, Cyclo):
        r = x.rational()
        return r if r is not None else x
    return Fraction(x)


def _inverse(x: Scalar) -> Scalar:
    if isinstance(x, Cyclo):
        return x.inverse()
    if x == 0:
        raise ZeroDivisionError("inverse of zero")
    return 1 / Fraction(x)


def scalar_from_json(obj) -> Scalar:
    if isinstance(obj, dict):
        return simplify(Cyclo(obj["zeta"], [Fraction(c) for c in obj["coeffs"]]))
    return Fraction(obj)


def scalar_to_json(x: Scalar):
    x = simplify(x)
    if isinstance(x, Cyclo):
        return x.to_json()
    return _frac_json(x)


def _frac_json(x: Fraction):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _term(coeff: Scalar, mono: str, sep: str) -> str:
    """Render coeff*mono with the sign pulled out."""
    if isinstance(coeff, Cyclo):
        body = f"({coeff})"
        return body if not mono else f"{body}{sep}{mono}"
    c = Fraction(coeff)
    sign = "-" if c < 0 else "+"
    c = abs(c)
    if not mono:
        return f"{sign}{c}"
    if c == 1:
        return f"{sign}{mono}"
    return f"{sign}{c}{sep}{mono}"


def _join(terms: list[str]) -> str:
    out = ""
    for i, t in enumerate(terms):
        if t[0] in "+-":
            sign, body = t[0], t[1:]
        else:
            sign, body = "+", t
        if i == 0:
            out = body if sign == "+" else "-" + body
        else:
            out += f" {sign} {body}"
    return out


# --------------------------------------------------------------------------
# Laurent polynomials in t = q^{1/2}

class QPoly:
    """Laurent polynomial in q^{1/2}; keys are exponents of q^{1/2}."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, Scalar] | None = None):
        c = {}
        for k, v in (coeffs or {}).items():
            v = simplify(v)
            if v != 0:
                c[int(k)] = v
        self._c = c

    # constructors
    @classmethod
    def const(cls, c: Scalar) -> "QPoly":
        return cls({0: c})

    @classmethod
    def t(cls, k: int = 1, c: Scalar = 1) -> "QPoly":
        """c * q^{k/2}."""
        return cls({k: c})

    @classmethod
    def q(cls, n: int = 1, c: Scalar = 1) -> "QPoly":
        return cls({2 * n: c})

    @classmethod
    def from_q_coeffs(cls, coeffs: Iterable[int]) -> "QPoly":
        """Ordinary polynomial in q from its coefficient list (low to high)."""
        return cls({2 * i: c for i, c in enumerate(coeffs)})

    @staticmethod
    def coerce(x) -> "QPoly":
        return x if isinstance(x, QPoly) else QPoly.const(x)

    # inspection
    def items(self) -> list[tuple[int, Scalar]]:
        return sorted(self._c.items())

    def coeff(self, half_exp: int) -> Scalar:
        return self._c.get(half_exp, Fraction(0))

    def is_zero(self) -> bool:
        return not self._c

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def half_degrees(self) -> tuple[int, int]:
        if not self._c:
            raise ValueError("zero polynomial has no degree")
        return min(self._c), max(self._c)

    def degree(self) -> Fraction:
        """Top exponent of q (may be half-integral)."""
        return Fraction(self.half_degrees()[1], 2)

    def q_coeffs(self) -> list[Scalar]:
        """Coefficients of q^0, q^1, ... for an ordinary polynomial in q."""
        if not self._c:
            return []
        if any(k < 0 or k % 2 for k in self._c):
            raise ValueError(f"{self} is not a polynomial in q")
        top = max(self._c) // 2
        return [self._c.get(2 * i, Fraction(0)) for i in range(top + 1)]

    def constant(self) -> Scalar | None:
        if not self._c:
            return Fraction(0)
        if set(self._c) == {0}:
            return self._c[0]
        return None

    # arithmetic
    def __add__(self, other):
        other = QPoly.coerce(other)
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, 0) + v
        return QPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return QPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-QPoly.coerce(other))

    def __rsub__(self, other):
        return QPoly.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, QPoly):
            if isinstance(other, (int, Fraction, Cyclo)):
                return QPoly({k: v * other for k, v in self._c.items()})
            return NotImplemented
        c: dict[int, Scalar] = {}
        for k1, v1 in self._c.items():
            for k2, v2 in other._c.items():
                c[k1 + k2] = c.get(k1 + k2, 0) + v1 * v2
        return QPoly(c)

    __rmul__ = __mul__

    def inverse(self) -> "QPoly":
        if not self.is_monomial():
            raise ZeroDivisionError(f"{self} is not a unit")
        ((k, v),) = self._c.items()
        return QPoly({-k: _inverse(v)})

    def __truediv__(self, other):
        return self * QPoly.coerce(other).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = QPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Cyclo)):
            other = QPoly.const(other)
        if not isinstance(other, QPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(tuple(sorted(self._c.items())))

    # substitutions
    def flip_half(self) -> "QPoly":
        """Substitute q^{1/2} -> -q^{1/2}."""
        return QPoly({k: (-v if k % 2 else v) for k, v in self._c.items()})

    def subs_half(self, value: Scalar) -> Scalar:
        """Evaluate at q^{1/2} = value."""
        out: Scalar = Fraction(0)
        for k, v in self._c.items():
            p = value ** k if k >= 0 else _inverse(value) ** (-k)
            out = out + v * p
        return simplify(out)

    def at_q(self, value: Scalar) -> Scalar:
        """Evaluate at q = value (integral q-exponents only)."""
        out: Scalar = Fraction(0)
        for k, v in self._c.items():
            if k % 2:
                raise ValueError(f"{self} has half-integral exponents")
            p = value ** (k // 2) if k >= 0 else _inverse(value) ** (-k // 2)
            out = out + v * p
        return simplify(out)

    # text and json
    def __str__(self):
        if not self._c:
            return "0"
        terms = []
        for k, v in sorted(self._c.items(), reverse=True):
            if k == 0:
                mono = ""
            elif k % 2 == 0:
                mono = "q" if k == 2 else f"q^{k // 2}"
            else:
                mono = f"q^({k}/2)"
            terms.append(_term(v, mono, "*"))
        return _join(terms)

    def __repr__(self):
        return f"QPoly({self})"

    def to_json(self):
        return [[k, scalar_to_json(v)] for k, v in self.items()]

    @classmethod
    def from_json(cls, obj) -> "QPoly":
        return cls({int(k): scalar_from_json(v) for k, v in obj})

    _TERM = re.compile(
        r"^(?P<c>\d+(?:/\d+)?)?(?:\*)?(?P<q>q(?:\^(?:\((?P<h>-?\d+)/2\)|(?P<n>-?\d+)))?)?$"
    )

    @classmethod
    def parse(cls, text: str) -> "QPoly":
        """Inverse of ``str`` for rational coefficients."""
        s = text.replace(" ", "")
        if s == "0":
            return cls()
        parts = _split_terms(s)
        out: dict[int, Fraction] = {}
        for part in parts:
            sign = -1 if part[0] == "-" else 1
            body = part.lstrip("+-")
            m = cls._TERM.match(body)
            if not m or not (m.group("c") or m.group("q")):
                raise ValueError(f"cannot parse term {part!r} in {text!r}")
            c = Fraction(m.group("c")) if m.group("c") else Fraction(1)
            if not m.group("q"):
                k = 0
            elif m.group("h") is not None:
                k = int(m.group("h"))
            elif m.group("n") is not None:
                k = 2 * int(m.group("n"))
            else:
                k = 2
            out[k] = out.get(k, 0) + sign * c
        return cls(out)


def _split_terms(s: str) -> list[str]:
    """Split a signed sum, ignoring signs inside exponents."""
    parts, cur, depth = [], "", 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and cur and s[i - 1] != "^":
            parts.append(cur)
            cur = ch
        else:
            cur += ch
    if cur:
        parts.append(cur)
    return parts


# --------------------------------------------------------------------------
# multivariate Laurent polynomials

class MPoly:
    """Multivariate Laurent polynomial; keys are exponent tuples."""

    __slots__ = ("nvars", "_c")

    def __init__(self, nvars: int, coeffs: Mapping[tuple[int, ...], Scalar] | None = None):
        self.nvars = nvars
        c = {}
        for k, v in (coeffs or {}).items():
            v = simplify(v)
            if v != 0:
                c[tuple(k)] = v
        self._c = c

    @classmethod
    def monomial(cls, exps: Iterable[int], c: Scalar = 1) -> "MPoly":
        exps = tuple(exps)
        return cls(len(exps), {exps: c})

    @classmethod
    def const(cls, nvars: int, c: Scalar) -> "MPoly":
        return cls(nvars, {(0,) * nvars: c})

    def items(self):
        return sorted(self._c.items())

    def is_zero(self) -> bool:
        return not self._c

    def __add__(self, other):
        if not isinstance(other, MPoly):
            other = MPoly.const(self.nvars, other)
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, 0) + v
        return MPoly(self.nvars, c)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.nvars, {k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            return MPoly(self.nvars, {k: v * other for k, v in self._c.items()})
        c: dict = {}
        for k1, v1 in self._c.items():
            for k2, v2 in other._c.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                c[k] = c.get(k, 0) + v1 * v2
        return MPoly(self.nvars, c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            other = MPoly.const(self.nvars, other)
        return self._c == other._c

    def __hash__(self):
        return hash(tuple(sorted(self._c.items())))

    def __str__(self):
        if not self._c:
            return "0"
        terms = []
        for k, v in sorted(self._c.items(), reverse=True):
            mono = "*".join(
                (f"x{i}" if e == 1 else f"x{i}^{e}") for i, e in enumerate(k) if e
            )
            terms.append(_term(v, mono, "*"))
        return _join(terms)

    __repr__ = __str__

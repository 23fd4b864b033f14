"""Exact arithmetic in the cyclotomic field Q(w_N) with adjoined zero-mode symbols.

A :class:`CycloScalar` is a polynomial in the commuting symbols C_1, ..., C_{n-1}
whose coefficients live in Q(w_N).  The last symbol is eliminated through
C_n = -(C_1 + ... + C_{n-1}), so the relation sum_j C_j = 0 holds by
construction.  Field elements are stored as coefficient vectors in the power
basis {1, w, ..., w^(phi(N)-1)}, reduced modulo the N-th cyclotomic polynomial,
which makes equality testing a plain comparison of representations.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable

__all__ = [
    "CycloScalar",
    "NotInvertible",
    "OrderMismatch",
    "cyclotomic_polynomial",
    "make_root_power",
    "symbol",
    "rational",
]


class OrderMismatch(ValueError):
    """Operands live in different cyclotomic fields or symbol rings."""


class NotInvertible(ArithmeticError):
    """Inverse requested for a scalar carrying zero-mode symbols."""


# ---------------------------------------------------------------------------
# integer/rational polynomial helpers (lists, lowest degree first)
# ---------------------------------------------------------------------------

def _trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _polydivmod(num, den):
    num = [Fraction(c) for c in num]
    den = [Fraction(c) for c in den]
    _trim(num)
    _trim(den)
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    lead = den[-1]
    while len(num) >= len(den) and num:
        shift = len(num) - len(den)
        c = num[-1] / lead
        quot[shift] = c
        for k, d in enumerate(den):
            num[shift + k] -= c * d
        _trim(num)
    return _trim(quot), num


def _polymul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _polysub(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return _trim(out)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(N: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_N, lowest degree first."""
    if N < 1:
        raise ValueError("cyclotomic order must be positive")
    poly = [Fraction(-1)] + [Fraction(0)] * (N - 1) + [Fraction(1)]
    for d in range(1, N):
        if N % d == 0:
            poly, rem = _polydivmod(poly, list(cyclotomic_polynomial(d)))
            assert not rem
    return tuple(int(c) for c in poly)


class _Field:
    """Reduction data for Q(w_N) in the power basis."""

    def __init__(self, N: int):
        self.N = N
        phi = cyclotomic_polynomial(N)
        self.deg = len(phi) - 1
        self.phi = phi
        # w^e as a basis vector for 0 <= e < N
        powers = []
        for e in range(N):
            vec = [Fraction(0)] * (e + 1)
            vec[e] = Fraction(1)
            _, rem = _polydivmod(vec, list(phi))
            powers.append(tuple(rem + [Fraction(0)] * (self.deg - len(rem))))
        self.powers = powers
        self.zero = (Fraction(0),) * self.deg

    def reduce(self, vec) -> tuple:
        out = list(vec[: self.deg]) + [Fraction(0)] * max(0, self.deg - len(vec))
        for e in range(self.deg, len(vec)):
            c = vec[e]
            if c:
                for k, b in enumerate(self.powers[e % self.N]):
                    if b:
                        out[k] += c * b
        return tuple(out)

    def mul(self, a, b) -> tuple:
        if self.deg == 1:
            return (a[0] * b[0],)
        conv = [Fraction(0)] * (2 * self.deg - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        return self.reduce(conv)

    def inverse(self, a) -> tuple:
        # extended Euclid on a(x) and Phi_N(x)
        r0, r1 = list(self.phi), _trim([Fraction(c) for c in a])
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = _polydivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _polysub(s0, _polymul(q, s1))
        # r0 is a nonzero constant since Phi_N is irreducible
        c = r0[0]
        inv = [x / c for x in s0]
        return self.reduce(inv)


@lru_cache(maxsize=None)
def _field(N: int) -> _Field:
    return _Field(N)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


# ---------------------------------------------------------------------------
# CycloScalar
# ---------------------------------------------------------------------------

class CycloScalar:
    """Immutable element of Q(w_N)[C_1, ..., C_{n-1}].

    ``terms`` maps a C-monomial (exponent tuple of length max(n-1, 0)) to the
    coefficient vector of its Q(w_N) coefficient.  Zero coefficients are never
    stored, so the empty mapping is the zero scalar.
    """

    __slots__ = ("order", "nsym", "_terms", "_hash")

    def __init__(self, order: int, nsym: int, terms: dict):
        self.order = order
        self.nsym = nsym
        self._terms = terms
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, order: int = 1, nsym: int = 0) -> "CycloScalar":
        return cls(order, nsym, {})

    @classmethod
    def one(cls, order: int = 1, nsym: int = 0) -> "CycloScalar":
        return rational(1, order, nsym)

    @property
    def _mono_len(self) -> int:
        return max(self.nsym - 1, 0)

    # -- inspection --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_c_free(self) -> bool:
        return all(not any(m) for m in self._terms)

    def is_rational(self) -> bool:
        if not self.is_c_free():
            return False
        vec = self._terms.get((0,) * self._mono_len)
        return vec is None or not any(vec[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        vec = self._terms.get((0,) * self._mono_len)
        return vec[0] if vec else Fraction(0)

    def c_free_part(self) -> "CycloScalar":
        """The value obtained by setting every C_j to zero."""
        key = (0,) * self._mono_len
        vec = self._terms.get(key)
        return CycloScalar(self.order, self.nsym, {key: vec} if vec else {})

    def terms(self):
        """Yield (c_monomial, omega_pow, Fraction) in canonical order."""
        for mono in sorted(self._terms):
            for e, c in enumerate(self._terms[mono]):
                if c:
                    yield mono, e, c

    # -- coercion ----------------------------------------------------------

    def _coerce(self, other) -> "CycloScalar":
        if isinstance(other, CycloScalar):
            if other.order == self.order and other.nsym == self.nsym:
                return other
            if other.order != self.order:
                if other.is_rational():
                    return rational(other.rational_value(), self.order, self.nsym)
                raise OrderMismatch(f"orders {self.order} and {other.order} differ")
            if other.is_c_free():
                key = (0,) * self._mono_len
                vec = other._terms.get((0,) * other._mono_len)
                return CycloScalar(self.order, self.nsym, {key: vec} if vec else {})
            raise OrderMismatch(f"symbol counts {self.nsym} and {other.nsym} differ")
        return rational(_as_fraction(other), self.order, self.nsym)

    def _pair(self, other):
        """Coerce both operands to a common ring, lifting rationals if needed."""
        if isinstance(other, CycloScalar):
            if other.order != self.order and self.is_rational() and not other.is_rational():
                return other._coerce(self), other
            if other.nsym != self.nsym and self.is_c_free() and not other.is_c_free():
                return other._coerce(self), other
        return self, self._coerce(other)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        out = dict(a._terms)
        for mono, vec in b._terms.items():
            cur = out.get(mono)
            if cur is None:
                out[mono] = vec
            else:
                s = tuple(x + y for x, y in zip(cur, vec))
                if any(s):
                    out[mono] = s
                else:
                    del out[mono]
        return CycloScalar(a.order, a.nsym, out)

    __radd__ = __add__

    def __neg__(self):
        return CycloScalar(
            self.order, self.nsym, {m: tuple(-x for x in v) for m, v in self._terms.items()}
        )

    def __sub__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return CycloScalar(self.order, self.nsym, {})
            c = Fraction(other)
            return CycloScalar(
                self.order, self.nsym, {m: tuple(x * c for x in v) for m, v in self._terms.items()}
            )
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        f = _field(a.order)
        out: dict = {}
        for m1, v1 in a._terms.items():
            for m2, v2 in b._terms.items():
                mono = tuple(x + y for x, y in zip(m1, m2))
                prod = f.mul(v1, v2)
                cur = out.get(mono)
                out[mono] = prod if cur is None else tuple(x + y for x, y in zip(cur, prod))
        out = {m: v for m, v in out.items() if any(v)}
        return CycloScalar(a.order, a.nsym, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycloScalar.one(self.order, self.nsym)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "CycloScalar":
        """Multiplicative inverse of a nonzero, symbol-free value."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if not self.is_c_free():
            raise NotInvertible("scalars with zero-mode symbols are not invertible")
        key = (0,) * self._mono_len
        inv = _field(self.order).inverse(self._terms[key])
        return CycloScalar(self.order, self.nsym, {key: inv})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        if isinstance(other, CycloScalar):
            a, b = self._pair(other)
            return a * b.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    # -- comparison --------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.rational_value() == other
        if not isinstance(other, CycloScalar):
            return NotImplemented
        try:
            a, b = self._pair(other)
        except OrderMismatch:
            return False
        return a._terms == b._terms

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.rational_value())
            else:
                self._hash = hash((self.order, self.nsym, frozenset(self._terms.items())))
        return self._hash

    # -- evaluation and display ---------------------------------------------

    def to_complex(self, c_values: Iterable[complex] | None = None) -> complex:
        """Numerical value at w = exp(2 pi i / N); ``c_values`` gives C_1..C_{n-1}."""
        w = cmath.exp(2j * math.pi / self.order)
        cs = list(c_values) if c_values is not None else [0] * self._mono_len
        total = 0j
        for mono, e, c in self.terms():
            term = complex(float(c)) * w**e
            for ci, k in zip(cs, mono):
                term *= ci**k
            total += term
        return total

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, e, c in self.terms():
            factors = []
            if e == 1:
                factors.append("w")
            elif e > 1:
                factors.append(f"w^{e}")
            for j, k in enumerate(mono, start=1):
                if k:
                    factors.append(f"C{j}" if k == 1 else f"C{j}^{k}")
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {
            "N": self.order,
            "n": self.nsym,
            "terms": [
                {
                    "omega_pow": e,
                    "num": str(c.numerator),
                    "den": str(c.denominator),
                    "c_monomial": list(mono),
                }
                for mono, e, c in self.terms()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CycloScalar":
        N = int(data["N"])
        terms = data.get("terms", [])
        if "n" in data:
            nsym = int(data["n"])
        else:
            nsym = len(terms[0]["c_monomial"]) + 1 if terms and terms[0]["c_monomial"] else 0
        out = CycloScalar.zero(N, nsym)
        for t in terms:
            c = Fraction(int(t["num"]), int(t["den"]))
            piece = make_root_power(N, int(t["omega_pow"]), nsym) * c
            for j, k in enumerate(t.get("c_monomial", []), start=1):
                if k:
                    piece = piece * symbol(j, N, nsym) ** k
            out = out + piece
        return out


def rational(q, order: int = 1, nsym: int = 0) -> CycloScalar:
    q = _as_fraction(q)
    if q == 0:
        return CycloScalar(order, nsym, {})
    f = _field(order)
    vec = (q,) + (Fraction(0),) * (f.deg - 1)
    return CycloScalar(order, nsym, {(0,) * max(nsym - 1, 0): vec})


def make_root_power(N: int, e: int, nsym: int = 0) -> CycloScalar:
    """w^e for a primitive N-th root of unity w, reduced modulo Phi_N."""
    if N < 1:
        raise ValueError("N must be positive")
    f = _field(N)
    vec = f.powers[e % N]
    return CycloScalar(N, nsym, {(0,) * max(nsym - 1, 0): vec})


def symbol(j: int, N: int = 1, nsym: int = 1) -> CycloScalar:
    """The zero-mode constant C_j (1-based); C_n is expanded as -sum of the others."""
    if not 1 <= j <= nsym:
        raise ValueError(f"symbol index {j} outside 1..{nsym}")
    one = _field(N).powers[0]
    if j < nsym:
        mono = tuple(1 if k == j - 1 else 0 for k in range(nsym - 1))
        return CycloScalar(N, nsym, {mono: one})
    neg = tuple(-x for x in one)
    terms = {}
    for k in range(nsym - 1):
        terms[tuple(1 if t == k else 0 for t in range(nsym - 1))] = neg
    return CycloScalar(N, nsym, terms)

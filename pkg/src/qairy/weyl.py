"""Normal-ordered differential operators presented through bosonic modes.

A mode K^j_m acts as hbar d/dx^j_m for m > 0, as multiplication by |m| x^j_|m|
for m < 0, and as the central element hbar^(1/2) C_j for m = 0.  Zero modes are
folded into coefficients when an operator is built, so a stored monomial is a
coefficient, a power of hbar^(1/2), a sorted list of creators and a sorted
list of annihilators.

``hbar_half`` counts every half power of hbar carried by the monomial,
including the hbar inside each annihilator.  With that convention a Wick
contraction leaves ``hbar_half`` unchanged, and the grading degree is
``len(creators) + hbar_half - len(annihilators)``.

Polynomials acted on by operators are dictionaries keyed by ``(h, vars)``
where ``h`` is the exponent of hbar^(1/2) and ``vars`` a sorted tuple of
variables ``(j, q)`` with repetition; the value is the coefficient.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from .scalar import CycloScalar, rational, symbol

__all__ = [
    "Mode",
    "Ring",
    "Window",
    "WindowOverflow",
    "GradedOperator",
    "grading_degree",
    "commutator_basic",
    "normal_order_product",
    "operator_commutator",
    "apply",
    "poly_add",
    "poly_mul",
    "poly_scale",
    "poly_diff",
    "poly_degree",
    "poly_part",
]


class WindowOverflow(ValueError):
    """A produced term lies outside the operator's materialization window."""


class Mode(NamedTuple):
    cycle: int
    index: int

    @property
    def kind(self) -> str:
        if self.index > 0:
            return "annihilator"
        if self.index < 0:
            return "creator"
        return "zero"


@dataclass(frozen=True)
class Ring:
    """Scalar ring Q(w_N)[C_1..C_n] with sum C_j = 0."""

    order: int = 1
    nsym: int = 0

    def scalar(self, x) -> CycloScalar:
        if isinstance(x, CycloScalar):
            return x
        return rational(x, self.order, self.nsym)

    def zero(self) -> CycloScalar:
        return CycloScalar.zero(self.order, self.nsym)

    def symbol(self, j: int) -> CycloScalar:
        return symbol(j, self.order, self.nsym)


@dataclass(frozen=True)
class Window:
    """Materialization region: mode indices |m| <= W, grading degree <= D."""

    W: int = 64
    D: int = 64

    def admits(self, key) -> bool:
        h, cre, ann = key
        if len(cre) + h - len(ann) > self.D:
            return False
        return all(-m <= self.W for _, m in cre) and all(m <= self.W for _, m in ann)

    def union(self, other: "Window") -> "Window":
        return Window(max(self.W, other.W), max(self.D, other.D))


def _key_degree(key) -> int:
    h, cre, ann = key
    return len(cre) + h - len(ann)


class GradedOperator:
    """Finite sum of normal-ordered monomials with exact coefficients.

    ``terms`` maps a signature ``(hbar_half, creators, annihilators)`` to a
    nonzero :class:`CycloScalar`.  Modes inside the signature are plain
    ``(cycle, index)`` tuples kept in sorted order.
    """

    __slots__ = ("terms", "window", "ring")

    def __init__(self, terms=None, window: Window | None = None, ring: Ring | None = None):
        self.terms = dict(terms) if terms else {}
        self.window = window if window is not None else Window()
        self.ring = ring if ring is not None else Ring()

    # -- builders ----------------------------------------------------------

    @classmethod
    def zero(cls, ring: Ring | None = None, window: Window | None = None) -> "GradedOperator":
        return cls({}, window, ring)

    @classmethod
    def constant(cls, c, ring: Ring | None = None, window: Window | None = None, hbar_half: int = 0):
        ring = ring or Ring()
        c = ring.scalar(c)
        return cls({(hbar_half, (), ()): c} if c else {}, window, ring)

    @classmethod
    def hbar(cls, ring: Ring | None = None, window: Window | None = None):
        return cls.constant(1, ring, window, hbar_half=2)

    @classmethod
    def mode(cls, j: int, m: int, ring: Ring | None = None, window: Window | None = None, coeff=1):
        """The single mode K^j_m (zero modes become hbar^(1/2) C_j)."""
        ring = ring or Ring()
        c = ring.scalar(coeff)
        if m == 0:
            c = c * ring.symbol(j)
            return cls({(1, (), ()): c} if c else {}, window, ring)
        if m > 0:
            key = (2, (), ((j, m),))
        else:
            key = (0, ((j, m),), ())
        return cls({key: c} if c else {}, window, ring)

    @classmethod
    def word(cls, modes: Iterable[tuple[int, int]], coeff=1, hbar_half: int = 0,
             ring: Ring | None = None, window: Window | None = None):
        """The normal-ordered product :K K ... K: times coeff * hbar^(hbar_half/2)."""
        ring = ring or Ring()
        c = ring.scalar(coeff)
        h = hbar_half
        cre, ann = [], []
        for j, m in modes:
            if m == 0:
                c = c * ring.symbol(j)
                h += 1
            elif m > 0:
                ann.append((j, m))
                h += 2
            else:
                cre.append((j, m))
        key = (h, tuple(sorted(cre)), tuple(sorted(ann)))
        return cls({key: c} if c else {}, window, ring)

    def _new(self, terms, window=None) -> "GradedOperator":
        return GradedOperator(terms, window or self.window, self.ring)

    def with_window(self, window: Window) -> "GradedOperator":
        return GradedOperator({k: v for k, v in self.terms.items() if window.admits(k)}, window, self.ring)

    # -- linear structure --------------------------------------------------

    def __add__(self, other: "GradedOperator") -> "GradedOperator":
        if not isinstance(other, GradedOperator):
            return NotImplemented
        out = dict(self.terms)
        for k, v in other.terms.items():
            cur = out.get(k)
            s = v if cur is None else cur + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return self._new(out, self.window.union(other.window))

    def __neg__(self) -> "GradedOperator":
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "GradedOperator") -> "GradedOperator":
        return self + (-other)

    def scale(self, c) -> "GradedOperator":
        c = self.ring.scalar(c) if not isinstance(c, CycloScalar) else c
        if not c:
            return self._new({})
        out = {}
        for k, v in self.terms.items():
            p = v * c
            if p:
                out[k] = p
        return self._new(out)

    def __mul__(self, other):
        if isinstance(other, GradedOperator):
            return normal_order_product(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    # -- inspection --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedOperator):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        raise TypeError("GradedOperator is not hashable")

    def max_degree(self) -> int:
        return max((_key_degree(k) for k in self.terms), default=-1)

    def min_degree(self) -> int:
        return min((_key_degree(k) for k in self.terms), default=-1)

    def degree_part(self, d: int) -> "GradedOperator":
        return self._new({k: v for k, v in self.terms.items() if _key_degree(k) == d})

    def truncate(self, D: int) -> "GradedOperator":
        """Drop every term of grading degree above D."""
        return self._new({k: v for k, v in self.terms.items() if _key_degree(k) <= D})

    def above(self, d: int) -> "GradedOperator":
        return self._new({k: v for k, v in self.terms.items() if _key_degree(k) > d})

    def modes_used(self) -> set:
        out = set()
        for _, cre, ann in self.terms:
            out.update(cre)
            out.update(ann)
        return out

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (h, cre, ann), c in self.sorted_terms():
            e = h - 2 * len(ann)
            word = " ".join(f"K{j}[{m}]" for j, m in cre + ann)
            if e == 0:
                hb = ""
            elif e % 2:
                hb = f"hbar^({e}/2)"
            else:
                hb = "hbar" if e == 2 else f"hbar^{e // 2}"
            body = " ".join(x for x in (hb, word) if x)
            parts.append(f"({c})" + (f" {body}" if body else ""))
        return " + ".join(parts)

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "window": {"W": self.window.W, "D": self.window.D},
            "terms": [
                {
                    "coeff": c.to_json(),
                    "hbar_half": h,
                    "creators": [list(x) for x in cre],
                    "annihilators": [list(x) for x in ann],
                }
                for (h, cre, ann), c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: dict, ring: Ring | None = None) -> "GradedOperator":
        win = Window(int(data["window"]["W"]), int(data["window"]["D"]))
        terms = {}
        for t in data["terms"]:
            c = CycloScalar.from_json(t["coeff"])
            key = (
                int(t["hbar_half"]),
                tuple(sorted(tuple(x) for x in t["creators"])),
                tuple(sorted(tuple(x) for x in t["annihilators"])),
            )
            terms[key] = c if key not in terms else terms[key] + c
        if ring is None:
            first = next(iter(terms.values()), None)
            ring = Ring(first.order, first.nsym) if first is not None else Ring()
        return cls({k: v for k, v in terms.items() if v}, win, ring)


def grading_degree(key) -> int:
    """Grading degree of a monomial signature (hbar_half, creators, annihilators)."""
    return _key_degree(key)


def commutator_basic(a: tuple[int, int], b: tuple[int, int], ring: Ring | None = None) -> GradedOperator:
    """[K^j_a, K^j'_b] = a hbar delta_{j,j'} delta_{a+b,0}; zero modes are central."""
    ring = ring or Ring()
    (j1, m1), (j2, m2) = a, b
    if j1 != j2 or m1 + m2 != 0 or m1 == 0:
        return GradedOperator.zero(ring)
    return GradedOperator.constant(m1, ring, hbar_half=2)


def _merge_sorted(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b))


def _wick(ann: tuple, cre: tuple):
    """Normal order ann * cre (annihilators left of creators).

    Returns a list of (integer factor, remaining annihilators, remaining
    creators).  Each contraction of K^j_q with K^j_{-q} contributes q; the hbar
    it produces is accounted for by the annihilator's own hbar.
    """
    states = [(1, (), Counter(cre))]
    for a in reversed(ann):
        j, q = a
        partner = (j, -q)
        new = []
        for factor, kept, pool in states:
            new.append((factor, (a,) + kept, pool))
            k = pool.get(partner, 0)
            if k:
                rest = pool.copy()
                rest[partner] -= 1
                if not rest[partner]:
                    del rest[partner]
                new.append((factor * k * q, kept, rest))
        states = new
    out = []
    for factor, kept, pool in states:
        out.append((factor, kept, tuple(sorted(pool.elements()))))
    return out


def normal_order_product(A: GradedOperator, B: GradedOperator, truncate: bool = False,
                         window: Window | None = None) -> GradedOperator:
    """The product A*B rewritten in normal order.

    Terms outside ``window`` (default: the union of the operand windows) raise
    :class:`WindowOverflow`, or are dropped when ``truncate`` is set.
    """
    win = window or A.window.union(B.window)
    out: dict = {}
    for (h1, c1, a1), x in A.terms.items():
        for (h2, c2, a2), y in B.terms.items():
            xy = None
            for factor, ann_left, cre_right in _wick(a1, c2):
                key = (h1 + h2, _merge_sorted(c1, cre_right), _merge_sorted(ann_left, a2))
                if not win.admits(key):
                    if truncate:
                        continue
                    raise WindowOverflow(f"term {key} outside window {win}")
                if xy is None:
                    xy = x * y
                val = xy * factor if factor != 1 else xy
                cur = out.get(key)
                s = val if cur is None else cur + val
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
    return GradedOperator(out, win, A.ring)


def operator_commutator(A: GradedOperator, B: GradedOperator, truncate: bool = False) -> GradedOperator:
    return normal_order_product(A, B, truncate) - normal_order_product(B, A, truncate)


# ---------------------------------------------------------------------------
# polynomials in x^j_q with hbar^(1/2)-graded coefficients
# ---------------------------------------------------------------------------

def poly_degree(key) -> int:
    h, vs = key
    return h + len(vs)


def poly_add(f: dict, g: dict, sign: int = 1) -> dict:
    out = dict(f)
    for k, v in g.items():
        cur = out.get(k)
        s = (v if sign == 1 else -v) if cur is None else (cur + v if sign == 1 else cur - v)
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def poly_scale(f: dict, c) -> dict:
    out = {}
    for k, v in f.items():
        p = v * c
        if p:
            out[k] = p
    return out


def poly_mul(f: dict, g: dict, max_degree: int | None = None) -> dict:
    out: dict = {}
    for (h1, v1), a in f.items():
        for (h2, v2), b in g.items():
            key = (h1 + h2, _merge_sorted(v1, v2))
            if max_degree is not None and poly_degree(key) > max_degree:
                continue
            p = a * b
            cur = out.get(key)
            s = p if cur is None else cur + p
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def poly_diff(f: dict, var: tuple[int, int]) -> dict:
    """Plain partial derivative d/dx_var (no hbar)."""
    out: dict = {}
    for (h, vs), c in f.items():
        k = vs.count(var)
        if not k:
            continue
        idx = vs.index(var)
        key = (h, vs[:idx] + vs[idx + 1:])
        val = c * k
        cur = out.get(key)
        s = val if cur is None else cur + val
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return out


def poly_part(f: dict, d: int) -> dict:
    return {k: v for k, v in f.items() if poly_degree(k) == d}


def apply(A: GradedOperator, f: dict) -> dict:
    """Act with A on the polynomial f as a differential operator."""
    out: dict = {}
    for (h, cre, ann), c in A.terms.items():
        g = f
        for var in reversed(ann):
            g = {(hh + 2, vs): v for (hh, vs), v in poly_diff(g, var).items()}
            if not g:
                break
        if not g:
            continue
        extra = h - 2 * len(ann)
        mult = Fraction(1)
        xs = []
        for j, m in cre:
            mult *= -m
            xs.append((j, -m))
        xs = tuple(sorted(xs))
        coeff = c * mult
        for (hh, vs), v in g.items():
            key = (hh + extra, _merge_sorted(vs, xs))
            val = v * coeff
            cur = out.get(key)
            s = val if cur is None else cur + val
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out

"""Mode operators of W(gl_r) realized on a twisted bosonic module.

Each cycle of length rho carries modes W^{j,i}_m (1 <= i <= rho) built from the
bosons K^j_p of that cycle, weighted by the coefficients Psi.  The composite
modes W^i_m of the full algebra are sums of products of cycle modes over
subsets of cycles.  Everything is materialized on a finite :class:`Window`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

from .scalar import CycloScalar, rational
from .weyl import GradedOperator, Ring, Window, normal_order_product

__all__ = [
    "TwistSpec",
    "UnsupportedRho",
    "WindowTooSmall",
    "register_psi_provider",
    "supported_rho",
    "psi_coefficient",
    "cycle_mode",
    "composite_mode",
    "reindex",
    "bounded_multisets",
]


class UnsupportedRho(NotImplementedError):
    """No Psi provider is registered for this cycle length."""


class WindowTooSmall(ValueError):
    """The requested window cannot hold the operator or solution being built."""


@dataclass(frozen=True)
class TwistSpec:
    """n cycles of length rho, each shifted at K^j_{-s} by Q_j."""

    rho: int
    n: int
    s: int
    Q: tuple = field(default=())
    nsym: int | None = None

    def __post_init__(self):
        if self.rho < 1 or self.n < 1 or self.s < 1:
            raise ValueError("rho, n and s must be positive")
        Q = tuple(self.Q) if self.Q else tuple(rational(1) for _ in range(self.n))
        Q = tuple(q if isinstance(q, CycloScalar) else rational(q) for q in Q)
        if len(Q) != self.n:
            raise ValueError(f"expected {self.n} shifts, got {len(Q)}")
        object.__setattr__(self, "Q", Q)

    @property
    def r(self) -> int:
        return self.n * self.rho

    @property
    def ring(self) -> Ring:
        order = max((q.order for q in self.Q), default=1)
        return Ring(order, self.n if self.nsym is None else self.nsym)

    def shift(self, j: int) -> CycloScalar:
        """Q_j lifted into the twist's scalar ring."""
        ring = self.ring
        return ring.scalar(0) + self.Q[j - 1]


# ---------------------------------------------------------------------------
# Psi coefficients
# ---------------------------------------------------------------------------

def _psi_rho1(ell: int, ps: Sequence[int]) -> Fraction:
    if ell == 0 and len(ps) == 1:
        return Fraction(1)
    raise ValueError(f"no coefficient for rho=1, ell={ell}, {len(ps)} arguments")


def _psi_rho2(ell: int, ps: Sequence[int]) -> Fraction:
    even = [p % 2 == 0 for p in ps]
    if ell == 0 and len(ps) == 1:
        # the single-boson mode must come out as K_{2m}
        return Fraction(2 if even[0] else 0)
    if ell == 0 and len(ps) == 2:
        return Fraction(2 * (even[0] and even[1]) - 1)
    if ell == 1 and not ps:
        return Fraction(-1, 4)
    raise ValueError(f"no coefficient for rho=2, ell={ell}, {len(ps)} arguments")


_PROVIDERS: dict[int, Callable] = {1: _psi_rho1, 2: _psi_rho2}


def register_psi_provider(rho: int, provider: Callable) -> None:
    """Register ``provider(ell, ps)`` supplying Psi for cycle length rho.

    The provider must be symmetric in ``ps`` and return an exact value.
    """
    _PROVIDERS[rho] = provider


def supported_rho() -> set[int]:
    return set(_PROVIDERS)


def psi_coefficient(rho: int, ell: int, ps: Sequence[int]) -> CycloScalar:
    provider = _PROVIDERS.get(rho)
    if provider is None:
        raise UnsupportedRho(f"no Psi provider registered for rho={rho}")
    if ell < 0 or not 1 <= len(ps) + 2 * ell <= rho:
        raise ValueError(f"invalid Psi arguments for rho={rho}: ell={ell}, ps={list(ps)}")
    val = provider(ell, tuple(ps))
    return val if isinstance(val, CycloScalar) else rational(val)


# ---------------------------------------------------------------------------
# cycle modes
# ---------------------------------------------------------------------------

def bounded_multisets(k: int, total: int, W: int):
    """Nondecreasing k-tuples from [-W, W] summing to ``total``."""
    if k == 0:
        if total == 0:
            yield ()
        return

    def rec(k, total, lo):
        if k == 1:
            if lo <= total <= W:
                yield (total,)
            return
        # first entry p, the other k-1 entries lie in [p, W]
        for p in range(lo, W + 1):
            rest = total - p
            if rest < (k - 1) * p:
                break
            if rest > (k - 1) * W:
                continue
            for tail in rec(k - 1, rest, p):
                yield (p,) + tail

    yield from rec(k, total, -W)


def _orderings(ms: tuple) -> int:
    out = factorial(len(ms))
    for _, grp in itertools.groupby(ms):
        out //= factorial(len(list(grp)))
    return out


def cycle_mode(spec: TwistSpec, j: int, i: int, m: int, window: Window) -> GradedOperator:
    """W^{j,i}_m restricted to mode indices |p| <= W.

    Every term has grading degree exactly i, so i > D raises WindowTooSmall.
    """
    rho = spec.rho
    if rho not in _PROVIDERS:
        raise UnsupportedRho(f"no Psi provider registered for rho={rho}")
    if not 1 <= i <= rho:
        raise ValueError(f"cycle mode index {i} outside 1..{rho}")
    if not 1 <= j <= spec.n:
        raise ValueError(f"cycle {j} outside 1..{spec.n}")
    ring = spec.ring
    total = rho * (m - i + 1)
    out = GradedOperator.zero(ring, window)
    for ell in range(i // 2 + 1):
        k = i - 2 * ell
        pref = Fraction(factorial(i), rho * 2**ell * factorial(ell) * factorial(k))
        for ms in bounded_multisets(k, total, window.W):
            psi = psi_coefficient(rho, ell, ms)
            if not psi:
                continue
            if i > window.D:
                raise WindowTooSmall(f"cycle mode of degree {i} exceeds window degree {window.D}")
            c = psi * (pref * _orderings(ms))
            out = out + GradedOperator.word([(j, p) for p in ms], c, 2 * ell, ring, window)
    return out


def reindex(spec: TwistSpec, i: int) -> tuple[int, int]:
    """Write i = k + l*rho with 1 <= k <= rho."""
    if not 1 <= i <= spec.r:
        raise ValueError(f"mode index {i} outside 1..{spec.r}")
    return (i - 1) % spec.rho + 1, (i - 1) // spec.rho


# ---------------------------------------------------------------------------
# composite modes
# ---------------------------------------------------------------------------

def _compositions(i: int, parts: int, cap: int):
    """Ordered tuples of ``parts`` integers in 1..cap summing to i."""
    if parts == 0:
        if i == 0:
            yield ()
        return
    for first in range(1, min(cap, i - parts + 1) + 1):
        for tail in _compositions(i - first, parts - 1, cap):
            yield (first,) + tail


def _m_range(i: int, rho: int, W: int) -> range:
    # W^{j,i}_m needs rho(m-i+1) reachable as a sum of at most i indices in [-W, W]
    span = (i * W) // rho
    return range(i - 1 - span, i - 1 + span + 1)


def composite_mode(spec: TwistSpec, i: int, m: int, window: Window, cycle=None) -> GradedOperator:
    """W^i_m as a sum over cycle subsets of products of cycle modes.

    ``cycle(j, i, m)`` supplies the per-cycle factor; by default it is the
    unshifted :func:`cycle_mode`.  Factors live on distinct cycles and commute,
    so each product is a plain merge and truncating it at degree D is exact.
    The factor m-ranges are cut to those that can be nonzero on the window.
    """
    if not 1 <= i <= spec.r:
        raise ValueError(f"mode index {i} outside 1..{spec.r}")
    rho, n = spec.rho, spec.n
    ring = spec.ring
    Wf = max(window.W, spec.s)
    cache: dict = {}

    if cycle is None:
        def cycle(j, ii, mm):
            if ii > window.D:
                return GradedOperator.zero(ring, window)
            return cycle_mode(spec, j, ii, mm, window)

    def factor(j, ii, mm):
        key = (j, ii, mm)
        if key not in cache:
            op = cycle(j, ii, mm).with_window(window)
            cache[key] = (op, op.min_degree())
        return cache[key]

    out = GradedOperator.zero(ring, window)
    for size in range(1, n + 1):
        for M in itertools.combinations(range(1, n + 1), size):
            total_m = m + 1 - size
            for ijs in _compositions(i, size, rho):
                coef = Fraction(rho) ** (size - i)
                ranges = [_m_range(ii, rho, Wf) for ii in ijs]
                for head in itertools.product(*ranges[:-1]):
                    last = total_m - sum(head)
                    if last not in ranges[-1]:
                        continue
                    ms = head + (last,)
                    ops = []
                    low = 0
                    for j, ii, mm in zip(M, ijs, ms):
                        op, d = factor(j, ii, mm)
                        if not op:
                            break
                        low += d
                        ops.append(op)
                    else:
                        if low > window.D:
                            continue
                        prod = ops[0]
                        for op in ops[1:]:
                            prod = normal_order_product(prod, op, truncate=True, window=window)
                        out = out + prod.scale(ring.scalar(coef))
    return GradedOperator(out.terms, window, ring)

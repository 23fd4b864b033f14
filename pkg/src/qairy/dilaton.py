"""Dilaton shifts, leading parts of shifted modes, shift matrices and the
block elimination that brings shifted modes into Airy form.

Grading weights: the boson K^j_p of a cycle with weight scale c_j has weight
c_j*p + s and hbar has weight 2s.  Every shifted mode H^i_m is homogeneous of
weight rho(m - i + 1) + s*i, so the linear system that isolates the
annihilators splits into independent blocks, one per weight.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd
from typing import Callable, Mapping, Sequence

from .scalar import CycloScalar, make_root_power, rational
from .weyl import GradedOperator, Ring, Window
from .wmodes import TwistSpec, composite_mode, cycle_mode

__all__ = [
    "NonCoprime",
    "ZeroShift",
    "NotAiryForm",
    "Singular",
    "ShiftMatrix",
    "LeadingPart",
    "shift_operator",
    "shifted_cycle_mode",
    "ShiftedModes",
    "shifted_cycle_leading",
    "shifted_composite_leading",
    "elementary_symmetric",
    "shift_matrix",
    "root_of_unity_shifts",
    "vieta_subset_identity",
    "invert_matrix",
    "determinant",
    "mode_weight",
    "block_labels",
    "eliminate_blocks",
    "normalize_to_airy_form",
]


class NonCoprime(ValueError):
    pass


class ZeroShift(ValueError):
    pass


class NotAiryForm(ValueError):
    """The shifted modes cannot be recombined into operators hbar d - P."""


@dataclass(frozen=True)
class Singular:
    """Returned (not raised) when a matrix has no inverse."""

    rank: int
    size: int

    def __bool__(self) -> bool:
        return False


# ---------------------------------------------------------------------------
# shifts
# ---------------------------------------------------------------------------

def shift_operator(A: GradedOperator, s, Q) -> GradedOperator:
    """Substitute K^j_{-s_j} -> K^j_{-s_j} - Q_j in every term.

    ``s`` is an integer or a per-cycle mapping/sequence; ``Q`` is a sequence
    indexed from cycle 1 or a mapping cycle -> shift.  Cycles without a shift
    (or with Q_j = 0) are untouched.  Creators commute, so the substitution is a
    binomial expansion and needs no reordering.
    """
    ring = A.ring
    if isinstance(Q, Mapping):
        shifts = dict(Q)
    else:
        shifts = {j: q for j, q in enumerate(Q, start=1)}
    if isinstance(s, int):
        svals = {j: s for j in shifts}
    elif isinstance(s, Mapping):
        svals = dict(s)
    else:
        svals = {j: v for j, v in enumerate(s, start=1)}
    targets = {}
    for j, q in shifts.items():
        q = ring.scalar(0) + q
        if q:
            targets[(j, -svals[j])] = q
    if not targets:
        return GradedOperator(A.terms, A.window, ring)
    out: dict = {}
    for (h, cre, ann), c in A.terms.items():
        # split creators into shifted ones (by mode) and the rest
        counts: dict = {}
        rest = []
        for x in cre:
            if x in targets:
                counts[x] = counts.get(x, 0) + 1
            else:
                rest.append(x)
        choices = [
            [(a, comb(k, a)) for a in range(k + 1)] for k in counts.values()
        ]
        modes = list(counts)
        for pick in itertools.product(*choices):
            coeff = c
            kept = list(rest)
            for mode, (a, binom) in zip(modes, pick):
                k = counts[mode]
                if a:
                    coeff = coeff * ((-targets[mode]) ** a) * binom
                kept.extend([mode] * (k - a))
            if not coeff:
                continue
            key = (h, tuple(sorted(kept)), ann)
            cur = out.get(key)
            v = coeff if cur is None else cur + coeff
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return GradedOperator(out, A.window, ring)


def shifted_cycle_mode(spec: TwistSpec, j: int, i: int, m: int, window: Window) -> GradedOperator:
    """H^{j,i}_m: the cycle mode with K^j_{-s} shifted by Q_j, on ``window``."""
    wide = Window(max(window.W, spec.s), max(i, 0))
    op = cycle_mode(spec, j, i, m, wide)
    op = shift_operator(op, spec.s, {j: spec.Q[j - 1]})
    return op.with_window(window)


class ShiftedModes:
    """Cached builder of shifted composite modes H^i_m for one spec and window.

    Shifting is an algebra automorphism, so H^i_m is assembled from shifted
    cycle modes exactly as W^i_m is assembled from unshifted ones.
    """

    def __init__(self, spec: TwistSpec, window: Window):
        self.spec = spec
        self.window = window
        self._cycles: dict = {}
        self._modes: dict = {}

    def cycle(self, j: int, i: int, m: int) -> GradedOperator:
        key = (j, i, m)
        if key not in self._cycles:
            self._cycles[key] = shifted_cycle_mode(self.spec, j, i, m, self.window)
        return self._cycles[key]

    def __call__(self, i: int, m: int) -> GradedOperator:
        key = (i, m)
        if key not in self._modes:
            self._modes[key] = composite_mode(self.spec, i, m, self.window, cycle=self.cycle)
        return self._modes[key]


# ---------------------------------------------------------------------------
# closed-form leading parts
# ---------------------------------------------------------------------------

@dataclass
class LeadingPart:
    """Degree-0 and degree-1 content of an operator.

    ``linear`` maps a mode (cycle, index) to its coefficient; index 0 stands
    for the zero mode hbar^(1/2) C_j.
    """

    constant: CycloScalar
    linear: dict = field(default_factory=dict)

    def to_operator(self, ring: Ring, window: Window | None = None) -> GradedOperator:
        window = window or Window(64, 1)
        out = GradedOperator.constant(self.constant, ring, window)
        for (j, p), c in sorted(self.linear.items()):
            out = out + GradedOperator.mode(j, p, ring, window, coeff=c)
        return out


def _check_coprime(rho: int, s: int):
    if rho > 1 and gcd(s, rho) != 1:
        raise NonCoprime(f"gcd(s={s}, rho={rho}) != 1")


def shifted_cycle_leading(rho: int, s: int, Qj, i: int, m: int, j: int = 1) -> LeadingPart:
    """Degree <= 1 part of H^{j,i}_m.

    linear: Q_j^{i-1} K^j_{rho m - (rho - s)(i - 1)}; constant: -Q_j^rho / rho when
    i = rho and m = rho - s - 1.
    """
    _check_coprime(rho, s)
    Qj = Qj if isinstance(Qj, CycloScalar) else rational(Qj)
    const = Qj * 0
    if i == rho and m == rho - s - 1:
        const = -(Qj ** rho) * Fraction(1, rho)
    coeff = Qj ** (i - 1)
    linear = {(j, rho * m - (rho - s) * (i - 1)): coeff} if coeff else {}
    return LeadingPart(const, linear)


def elementary_symmetric(values: Sequence, k: int, one=None):
    """e_k of ``values`` (k = 0 gives ``one``)."""
    if one is None:
        one = values[0] * 0 + 1 if values else rational(1)
    e = [one] + [one * 0] * k
    for v in values:
        for t in range(k, 0, -1):
            e[t] = e[t] + e[t - 1] * v
    return e[k]


def shifted_composite_leading(spec: TwistSpec, k: int, l: int, m: int) -> LeadingPart:
    """Closed-form degree <= 1 part of H^{k + l rho}_m.

    H = rho^{-(k + l rho - 1)} [ delta_{k,rho} delta_{m,(l+1)(rho-s)-1} e_{l+1}(-Q^rho) / rho
        + sum_mu M_{mu,l+1} Q_mu^{k-1} K^mu_{rho(m - l(rho-s)) - (rho-s)(k-1)} ].
    """
    rho, n, s = spec.rho, spec.n, spec.s
    _check_coprime(rho, s)
    if not 1 <= k <= rho or not 0 <= l <= n - 1:
        raise ValueError(f"(k, l) = ({k}, {l}) out of range")
    ring = spec.ring
    Q = [spec.shift(j) for j in range(1, n + 1)]
    pref = Fraction(1, rho ** (k + l * rho - 1))
    const = ring.zero()
    if k == rho and m == (l + 1) * (rho - s) - 1:
        minus = [-(q ** rho) for q in Q]
        const = elementary_symmetric(minus, l + 1, ring.scalar(1)) * (pref / rho)
    M = shift_matrix(rho, Q).rows
    index = rho * (m - l * (rho - s)) - (rho - s) * (k - 1)
    linear = {}
    for mu in range(1, n + 1):
        c = M[mu - 1][l] * (Q[mu - 1] ** (k - 1)) * pref
        if c:
            linear[(mu, index)] = c
    return LeadingPart(const, linear)


# ---------------------------------------------------------------------------
# shift matrix
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShiftMatrix:
    rows: tuple
    rho: int
    Q: tuple

    @property
    def n(self) -> int:
        return len(self.rows)

    def to_json(self) -> list:
        return [[c.to_json() for c in row] for row in self.rows]


def shift_matrix(rho: int, Q: Sequence) -> ShiftMatrix:
    """M_{mu,l} = e_{l-1}(-Q_j^rho : j != mu)."""
    Q = tuple(q if isinstance(q, CycloScalar) else rational(q) for q in Q)
    n = len(Q)
    one = Q[0] * 0 + 1
    minus = [-(q ** rho) for q in Q]
    rows = []
    for mu in range(n):
        others = minus[:mu] + minus[mu + 1:]
        rows.append(tuple(elementary_symmetric(others, l, one) for l in range(n)))
    return ShiftMatrix(tuple(rows), rho, Q)


def root_of_unity_shifts(rho: int, n: int):
    """Q_j = w^j with w a primitive (n rho)-th root of unity, with its shift matrix."""
    r = n * rho
    Q = tuple(make_root_power(r, j) for j in range(1, n + 1))
    return Q, shift_matrix(rho, Q)


def vieta_subset_identity(theta: CycloScalar, n: int, mu: int, ell: int):
    """Both sides of sum_{M, |M| = ell-1, mu not in M} prod_{j in M}(-theta^j) = theta^{mu(ell-1)}."""
    others = [-(theta ** j) for j in range(1, n + 1) if j != mu]
    lhs = elementary_symmetric(others, ell - 1, theta * 0 + 1)
    rhs = theta ** (mu * (ell - 1))
    return lhs, rhs


def _rows_of(M):
    return [list(r) for r in (M.rows if isinstance(M, ShiftMatrix) else M)]


def invert_matrix(M):
    """Exact inverse by Gauss-Jordan elimination, or a :class:`Singular` value.

    Pivots are the lowest-index rows with a nonzero entry.
    """
    A = _rows_of(M)
    n = len(A)
    if n == 0:
        return []
    zero = A[0][0] * 0
    one = zero + 1
    inv = [[one if a == b else zero for b in range(n)] for a in range(n)]
    rank = 0
    for col in range(n):
        piv = next((row for row in range(col, n) if A[row][col]), None)
        if piv is None:
            return Singular(rank, n)
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            inv[col], inv[piv] = inv[piv], inv[col]
        p = A[col][col].inverse()
        A[col] = [x * p for x in A[col]]
        inv[col] = [x * p for x in inv[col]]
        for row in range(n):
            if row != col and A[row][col]:
                f = A[row][col]
                A[row] = [x - f * y for x, y in zip(A[row], A[col])]
                inv[row] = [x - f * y for x, y in zip(inv[row], inv[col])]
        rank += 1
    return inv


def determinant(M) -> CycloScalar:
    A = _rows_of(M)
    n = len(A)
    det = A[0][0] * 0 + 1
    for col in range(n):
        piv = next((row for row in range(col, n) if A[row][col]), None)
        if piv is None:
            return det * 0
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        det = det * A[col][col]
        p = A[col][col].inverse()
        for row in range(col + 1, n):
            if A[row][col]:
                f = A[row][col] * p
                A[row] = [x - f * y for x, y in zip(A[row], A[col])]
    return det


# ---------------------------------------------------------------------------
# elimination into Airy form
# ---------------------------------------------------------------------------

def mode_weight(index: int, scale: int, s: int) -> int:
    return index * scale + s


def block_labels(rho: int, s: int, bounds: Mapping[int, int], w: int):
    """Labels (i, m) with m >= bounds[i] whose shifted mode has weight w."""
    out = []
    for i in sorted(bounds):
        num = w - s * i
        if num % rho:
            continue
        m = num // rho + i - 1
        if m >= bounds[i]:
            out.append((i, m))
    return out


def _annihilator_key(j, q):
    return (2, (), ((j, q),))


def eliminate_blocks(build: Callable, rho: int, s: int, bounds: Mapping[int, int],
                     scales: Mapping[int, int], W: int, max_degree: int) -> dict:
    """Recombine shifted modes into operators hbar d_v - P, one per variable v.

    ``build(i, m)`` returns the materialized mode, ``scales[j]`` the weight
    scale of cycle j.  Every variable (j, q) with 1 <= q * scales[j] <= W is
    produced.
    Raises :class:`NotAiryForm` on any failure of the Airy shape.
    """
    # low-weight labels must vanish (this is where H^1_0 = 0 lives)
    for i in sorted(bounds):
        m = bounds[i]
        while rho * (m - i + 1) + s * i <= s:
            op = build(i, m)
            if op:
                raise NotAiryForm(f"mode ({i}, {m}) of weight <= s does not vanish: {op}")
            m += 1
    out = {}
    for w in range(s + 1, W + s + 1):
        targets = sorted(
            (j, (w - s) // c) for j, c in scales.items() if (w - s) % c == 0
        )
        labels = block_labels(rho, s, bounds, w)
        if not targets and not labels:
            continue
        if len(labels) != len(targets):
            raise NotAiryForm(f"weight {w}: {len(labels)} modes for {len(targets)} variables")
        ops = [build(i, m) for i, m in labels]
        for (i, m), op in zip(labels, ops):
            if op.degree_part(0):
                raise NotAiryForm(f"mode ({i}, {m}) has a constant term")
        A = [[op.terms.get(_annihilator_key(*t), op.ring.zero()) for t in targets] for op in ops]
        # H_label = sum_t A[label][t] hbar d_t + ..., so row t of A^{-1} isolates t
        inv = invert_matrix(A)
        if isinstance(inv, Singular):
            raise NotAiryForm(f"weight {w}: singular block over {targets}")
        for t, row in zip(targets, inv):
            acc = GradedOperator.zero(ops[0].ring, ops[0].window)
            for c, op in zip(row, ops):
                if c:
                    acc = acc + op.scale(c)
            _check_airy_shape(acc, t, max_degree)
            out[t] = acc
    return out


def _check_airy_shape(op: GradedOperator, var, max_degree: int):
    if op.degree_part(0):
        raise NotAiryForm(f"operator for {var} has a constant term")
    lin = op.degree_part(1)
    want = {_annihilator_key(*var): lin.ring.scalar(1)}
    if lin.terms != want:
        raise NotAiryForm(f"operator for {var} has linear part {lin}")
    if op.max_degree() > max_degree:
        raise NotAiryForm(f"operator for {var} has degree {op.max_degree()} > {max_degree}")


def normalize_to_airy_form(spec: TwistSpec, bounds: Mapping[int, int], window: Window,
                           builder: ShiftedModes | None = None) -> dict:
    """Airy-form operators hbar d_{x^mu_q} - P for all 1 <= q <= window.W.

    ``bounds`` are the subalgebra bounds m >= bounds[i].  The shifted modes are
    materialized on ``window``; its degree D truncates the operators.
    """
    _check_coprime(spec.rho, spec.s)
    if spec.rho > 1 and any(not q for q in spec.Q):
        raise ZeroShift("all shifts must be nonzero when rho > 1")
    M = shift_matrix(spec.rho, [spec.shift(j) for j in range(1, spec.n + 1)])
    if isinstance(invert_matrix(M), Singular):
        raise NotAiryForm("shift matrix is singular")
    build = builder or ShiftedModes(spec, window)
    scales = {j: 1 for j in range(1, spec.n + 1)}
    return eliminate_blocks(build, spec.rho, spec.s, bounds, scales, window.W,
                            min(spec.r, window.D))

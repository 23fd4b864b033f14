"""Solve H_v Z = 0 for operators in Airy form H_v = hbar d_v - P_v.

Write Z = exp(F) and G = hbar F = sum hbar^(h/2) c[h, sigma] x^sigma.  A term
has grading degree h + |sigma| and every term of G has degree >= 3.  Under
conjugation by e^F an annihilator hbar d_a becomes hbar d_a + (d_a G), so the
degree-e part of e^{-F} H_v e^F 1 reads d_v G_{e+1} - (terms built from G of
degree <= e).  Solving degree by degree is therefore a triangular process.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterable

from . import __version__
from .scalar import CycloScalar
from .weyl import GradedOperator, Window, apply, poly_add, poly_degree, poly_diff, poly_mul, poly_scale
from .wmodes import WindowTooSmall

__all__ = [
    "InconsistentStructure",
    "WindowTooSmall",
    "AiryStructure",
    "FreeEnergy",
    "solve",
    "residual_check",
    "coefficient",
    "CONVENTION",
    "structure_from_spec",
]

CONVENTION = "F = sum_h hbar^((h-2)/2) / n! * F[sigma] x^sigma, sum over ordered sigma"


class InconsistentStructure(ArithmeticError):
    """The triangular system has no solution: the input is not an Airy structure."""


def _hbar_d(var) -> tuple:
    return (2, (), (tuple(var),))


@dataclass
class AiryStructure:
    """Operators keyed by their distinguished variable (cycle, index)."""

    operators: dict
    window: Window
    max_degree: int | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.operators = {tuple(k): v for k, v in self.operators.items()}

    @property
    def variables(self) -> list:
        return sorted(self.operators)

    def validate(self) -> None:
        for var, op in self.operators.items():
            if op.degree_part(0):
                raise InconsistentStructure(f"operator for {var} has a constant term")
            lin = op.degree_part(1)
            if set(lin.terms) != {_hbar_d(var)} or lin.terms[_hbar_d(var)] != 1:
                raise InconsistentStructure(f"operator for {var} has linear part {lin}")
            if self.max_degree is not None and op.max_degree() > self.max_degree:
                raise InconsistentStructure(f"operator for {var} exceeds degree {self.max_degree}")

    def to_json(self) -> dict:
        return {
            "version": __version__,
            "window": {"W": self.window.W, "D": self.window.D},
            "max_degree": self.max_degree,
            "meta": self.meta,
            "operators": [
                {"var": list(v), "operator": self.operators[v].to_json()} for v in self.variables
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "AiryStructure":
        ops = {tuple(e["var"]): GradedOperator.from_json(e["operator"]) for e in data["operators"]}
        w = data["window"]
        return cls(ops, Window(int(w["W"]), int(w["D"])), data.get("max_degree"), data.get("meta", {}))


def _mult_factorial(vs: tuple) -> int:
    out = 1
    run = 1
    for a, b in zip(vs, vs[1:]):
        if a == b:
            run += 1
            out *= run
        else:
            run = 1
    return out


@dataclass
class FreeEnergy:
    """Coefficients c[h, sigma] of G = hbar F, up to grading degree ``cutoff``."""

    table: dict
    cutoff: int

    def value(self, h: int, sigma: Iterable) -> CycloScalar | int:
        """F[sigma] in the symmetric 1/n! convention."""
        vs = tuple(sorted(tuple(v) for v in sigma))
        if h + len(vs) > self.cutoff:
            raise ValueError(f"degree {h + len(vs)} beyond cutoff {self.cutoff}")
        c = self.table.get((h, vs))
        if c is None:
            return 0
        return c * _mult_factorial(vs)

    def items(self):
        return sorted(self.table.items(), key=lambda kv: (poly_degree(kv[0]), kv[0]))

    def truncate(self, D: int) -> "FreeEnergy":
        return FreeEnergy({k: v for k, v in self.table.items() if poly_degree(k) <= D}, D)

    def to_json(self) -> dict:
        return {
            "version": __version__,
            "convention": CONVENTION,
            "cutoff": self.cutoff,
            "coefficients": [
                {
                    "hbar_half": h,
                    "vars": [list(v) for v in vs],
                    "value": (c * _mult_factorial(vs)).to_json(),
                }
                for (h, vs), c in self.items()
            ],
        }


def coefficient(F: FreeEnergy, h: int, sigma) -> CycloScalar | int:
    return F.value(h, sigma)


def _conjugated_apply(key, coeff, dG: dict, e: int) -> dict:
    """Degree-e part of e^{-F} (coeff * monomial) e^F applied to 1."""
    h, cre, ann = key
    extra = h - 2 * len(ann)
    budget = e - len(cre) - extra
    if budget < len(ann):
        return {}
    f = {(0, ()): coeff}
    for done, a in enumerate(reversed(ann), start=1):
        cap = budget - (len(ann) - done)
        nxt = {}
        for (hh, vs), v in poly_diff(f, a).items():
            k = (hh + 2, vs)
            if poly_degree(k) <= cap:
                nxt[k] = v
        g = dG.get(a)
        if g:
            nxt = poly_add(nxt, poly_mul(g, f, cap))
        f = nxt
        if not f:
            return {}
    xs = []
    mult = 1
    for j, m in cre:
        mult *= -m
        xs.append((j, -m))
    xs = tuple(sorted(xs))
    out = {}
    for (hh, vs), v in f.items():
        k = (hh + extra, tuple(sorted(vs + xs)))
        if poly_degree(k) == e:
            out[k] = out[k] + v * mult if k in out else v * mult
    return {k: v for k, v in out.items() if v}


def solve(A: AiryStructure, D_F: int, order: Iterable | None = None) -> FreeEnergy:
    """The unique F (terms of degree 3..D_F) with e^{-F} H_v e^F 1 = 0 up to degree D_F - 1.

    ``order`` permutes the constraint processing; the result does not depend on it.
    """
    variables = list(order) if order is not None else A.variables
    if set(variables) != set(A.operators):
        raise ValueError("order must list every distinguished variable once")
    known = set(A.operators)
    rest = {
        v: [(k, c) for k, c in A.operators[v].terms.items() if k != _hbar_d(v)]
        for v in variables
    }
    G: dict = {}
    dG: dict = {}
    for e in range(2, D_F):
        candidates: dict = {}
        for v in variables:
            U: dict = {}
            for key, c in rest[v]:
                part = _conjugated_apply(key, c, dG, e)
                if part:
                    U = poly_add(U, part)
            for (h, tau), t in U.items():
                sigma = tuple(sorted(tau + (v,)))
                val = -t / sigma.count(v)
                candidates.setdefault((h, sigma), {})[v] = val
        new = {}
        for (h, sigma), vals in sorted(candidates.items()):
            missing = [w for w in set(sigma) if w not in known]
            if missing:
                raise WindowTooSmall(f"variable {missing[0]} has no operator; enlarge the window")
            got = [vals.get(w, 0) for w in sorted(set(sigma))]
            ref = got[0]
            if any(g != ref for g in got[1:]):
                raise InconsistentStructure(
                    f"constraints disagree on the coefficient of {sigma} at hbar^({h}/2)"
                )
            if not ref:
                continue
            new[(h, sigma)] = ref
        G.update(new)
        for var in known:
            d = poly_diff(new, var)
            if d:
                dG[var] = poly_add(dG.get(var, {}), d)
    return FreeEnergy(G, D_F)


def _exp_truncated(X: dict, D: int) -> dict:
    one = next(iter(X.values()), None)
    if one is None:
        return {}
    Z = {(0, ()): one * 0 + 1}
    power = {(0, ()): one * 0 + 1}
    k = 0
    while True:
        k += 1
        power = poly_mul(power, X, D)
        if not power:
            break
        Z = poly_add(Z, poly_scale(power, Fraction(1, factorial(k))))
    return Z


def residual_check(A: AiryStructure, F: FreeEnergy, D: int) -> dict:
    """Apply each H_v to a truncation of Z = exp(G / hbar) and report
    nonzero components of degree <= D - 1.

    This path does not reuse the solver: it builds Z explicitly (with
    negative powers of hbar) and uses the plain differential action.
    """
    X = {(h - 2, vs): c for (h, vs), c in F.table.items() if poly_degree((h, vs)) <= D}
    Z = _exp_truncated(X, D - 2)
    if not Z:
        ring = next(iter(A.operators.values())).ring
        Z = {(0, ()): ring.scalar(1)}
    bad = []
    # a degree-delta operator term raises degree by delta, so only the
    # Z components of degree <= D - 1 - delta can reach the checked range
    z_by_degree: dict = {}
    for k, c in Z.items():
        z_by_degree.setdefault(poly_degree(k), {})[k] = c
    for v in A.variables:
        op = A.operators[v]
        R: dict = {}
        for delta in range(0, D):
            part = op.degree_part(delta)
            if not part:
                continue
            low = {}
            for d in range(0, D - delta):
                low.update(z_by_degree.get(d, {}))
            R = poly_add(R, apply(part, low))
        degs = sorted({poly_degree(k) for k, c in R.items() if c and poly_degree(k) <= D - 1})
        if degs:
            bad.append({"var": list(v), "degrees": degs})
    lowest = min((d for b in bad for d in b["degrees"]), default=None)
    return {"clean": not bad, "checked_degree": D - 1, "lowest_bad_degree": lowest, "violations": bad}


def structure_from_spec(rho: int, n: int, s: int, Q=None, D_F: int = 6, append: bool = False) -> AiryStructure:
    """Run classification and elimination and return the Airy structure on the
    smallest window that determines F up to degree D_F.

    G is homogeneous: the variable weights u (index times cycle scale) of a
    degree-d term add up to s(d - 2), so only u <= s(D_F - 2) can occur.
    """
    from .classify import AppendedStructure, append_one_cycle, classify, structure_bounds
    from .dilaton import normalize_to_airy_form, root_of_unity_shifts
    from .wmodes import TwistSpec

    if Q is None:
        Q, _ = root_of_unity_shifts(rho, n)
    verdict = classify(rho, n, s, Q)
    if not verdict.admissible:
        raise ValueError(f"not admissible: {verdict.reason}")
    window = Window(max(1, s * (D_F - 2)), D_F)
    spec = TwistSpec(rho, n, s, tuple(Q))
    bounds = structure_bounds(rho, n, s)
    meta = {"rho": rho, "n": n, "s": s, "appended": append, "partition": verdict.partition.to_json()}
    if not append:
        ops = normalize_to_airy_form(spec, bounds, window)
        return AiryStructure(ops, window, spec.r, meta)
    av = append_one_cycle(verdict.partition, [s] * n, spec.Q, bounds)
    if not av.accepted:
        raise ValueError(f"cannot append a one-cycle: {av.reason}")
    ops = AppendedStructure(spec, window).airy_operators(av.bounds)
    meta["partition"] = av.partition.to_json()
    return AiryStructure(ops, window, spec.r + 1, meta)

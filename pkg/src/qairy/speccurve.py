"""Spectral curves attached to the root-of-unity families.

Cycle j with shift Q_j = w^j is parametrized by x = z^rho / rho and
y = -Q_j / z^(rho - s); eliminating z gives the component
rho^(rho-s) x^(rho-s) y^rho = (-Q_j)^rho.  The product over the n cycles is the
full (reducible) curve.  Polynomials are dense dictionaries keyed by
(x-degree, y-degree).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import __version__
from .classify import classify
from .scalar import CycloScalar, make_root_power, rational

__all__ = [
    "NotAdmissible",
    "PlaneCurve",
    "ParametricComponent",
    "curve_for",
    "verify_factorization",
    "component_vanishes",
    "omega01",
    "dilaton_from_omega01",
    "poly_mul2",
    "render",
]


class NotAdmissible(ValueError):
    pass


def _clean(p: dict) -> dict:
    return {k: v for k, v in p.items() if v}


def poly_mul2(a: dict, b: dict) -> dict:
    out: dict = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            k = (i1 + i2, j1 + j2)
            out[k] = out[k] + c1 * c2 if k in out else c1 * c2
    return _clean(out)


def render(p: dict) -> str:
    if not p:
        return "0"
    parts = []
    for (i, j), c in sorted(p.items(), reverse=True):
        mono = "*".join(
            t for t in (
                (f"x^{i}" if i > 1 else "x") if i else "",
                (f"y^{j}" if j > 1 else "y") if j else "",
            ) if t
        )
        parts.append(f"({c})" + (f"*{mono}" if mono else ""))
    return " + ".join(parts)


@dataclass(frozen=True)
class ParametricComponent:
    """x(z) = z^rho / rho, y(z) = -Q / z^(rho - s)."""

    rho: int
    s: int
    Q: CycloScalar

    def __post_init__(self):
        if self.rho < 1 or self.s < 1:
            raise ValueError("rho and s must be positive")

    def equation(self) -> dict:
        """rho^(rho-s) x^(rho-s) y^rho - (-Q)^rho."""
        e = self.rho - self.s
        if e < 0:
            raise NotAdmissible(f"rho - s = {e} < 0 gives no polynomial component")
        one = self.Q * 0 + 1
        return _clean({(e, self.rho): one * (self.rho ** e), (0, 0): -((-self.Q) ** self.rho)})


@dataclass
class PlaneCurve:
    polynomial: dict
    factors: list = field(default_factory=list)
    components: list = field(default_factory=list)
    rho: int = 1
    n: int = 1
    s: int = 1

    def to_json(self) -> dict:
        def enc(p):
            return [{"x": i, "y": j, "coeff": c.to_json()} for (i, j), c in sorted(p.items())]

        return {
            "version": __version__,
            "rho": self.rho,
            "n": self.n,
            "s": self.s,
            "polynomial": enc(self.polynomial),
            "text": render(self.polynomial),
            "factors": [enc(f) for f in self.factors],
            "verified": verify_factorization(self),
        }


def curve_for(rho: int, n: int, s: int) -> PlaneCurve:
    """The curve of the (rho, n, s) family with shifts Q_j = w^j, w = exp(2 pi i / (n rho))."""
    r = n * rho
    if s == 1:
        if n >= 2 and not classify(rho, n, s).admissible:
            raise NotAdmissible(f"(rho={rho}, n={n}, s=1) is not admissible")
        xdeg = r - n
    elif s == 2 and n == 2 and rho >= 3 and rho % 2:
        xdeg = r - 4
    else:
        raise NotAdmissible(f"no spectral curve for (rho={rho}, n={n}, s={s})")
    one = make_root_power(r, 0)
    poly = _clean({(xdeg, r): one * (rho ** xdeg), (0, 0): one * (-((-1) ** r))})
    comps = [ParametricComponent(rho, s, make_root_power(r, j)) for j in range(1, n + 1)]
    return PlaneCurve(poly, [c.equation() for c in comps], comps, rho, n, s)


def verify_factorization(c: PlaneCurve) -> bool:
    """Exact expansion of the factors compared with the polynomial."""
    if not c.factors:
        return False
    prod = c.factors[0]
    for f in c.factors[1:]:
        prod = poly_mul2(prod, f)
    return _clean(prod) == _clean(c.polynomial)


def component_vanishes(pc: ParametricComponent, p: dict) -> bool:
    """Whether p(x(z), y(z)) is identically zero as a Laurent polynomial in z."""
    acc: dict = {}
    for (i, j), c in p.items():
        val = c * rational(1) / (pc.rho ** i) * ((-pc.Q) ** j)
        e = pc.rho * i - (pc.rho - pc.s) * j
        acc[e] = acc[e] + val if e in acc else val
    return not any(acc.values())


def omega01(pc: ParametricComponent) -> tuple:
    """y dx = -Q z^(s-1) dz, returned as (coefficient, exponent)."""
    return -pc.Q, pc.s - 1


def dilaton_from_omega01(coefficient, exponent: int) -> tuple:
    """Recover (s, Q) from y dx = coefficient * z^exponent dz."""
    if exponent < 0:
        raise ValueError("exponent must be nonnegative")
    return exponent + 1, -coefficient

"""Which twisted W(gl_r) modules yield higher quantum Airy structures.

The decision procedure computes, for each mode index i, the smallest m for
which the shifted mode H^i_m has no constant term, turns those bounds into a
lambda-profile, and searches for a partition realizing it.  Concrete shift
vectors are then checked for nonvanishing and for an invertible shift matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

from .dilaton import (
    ShiftedModes,
    Singular,
    eliminate_blocks,
    invert_matrix,
    root_of_unity_shifts,
    shift_matrix,
)
from .partitions import (
    Partition,
    find_partition_with_profile,
    lambda_of,
    partitions_of,
)
from .scalar import CycloScalar, rational
from .weyl import GradedOperator, Window, normal_order_product
from .wmodes import TwistSpec

__all__ = [
    "ClassificationVerdict",
    "subalgebra_bound",
    "structure_bounds",
    "classify",
    "enumerate_admissible",
    "classification_table",
    "forbidden_partition_witness",
    "AppendVerdict",
    "append_one_cycle",
    "AppendedStructure",
]

REQUIREMENTS = ("sum_K0_zero", "shift_matrix_invertible")


def subalgebra_bound(rho: int, s: int, k: int, l: int) -> int:
    """Smallest m for which H^{k + l rho}_m has no constant term."""
    return l * (rho - s) + k - 1 - (s * (k - 1)) // rho + (1 if k == 1 else 0)


def structure_bounds(rho: int, n: int, s: int, zero_slot: bool = True) -> dict[int, int]:
    """Bounds for i = 1..n rho; with ``zero_slot`` the vanishing H^1_0 is admitted."""
    spec_r = n * rho
    out = {}
    for i in range(1, spec_r + 1):
        k, l = (i - 1) % rho + 1, (i - 1) // rho
        out[i] = subalgebra_bound(rho, s, k, l)
    if zero_slot:
        out[1] = 0
    return out


@dataclass
class ClassificationVerdict:
    admissible: bool
    case_label: str
    partition: Partition | None
    requirements: list = field(default_factory=list)
    reason: str | None = None
    rho: int = 1
    n: int = 1
    s: int = 1

    def to_json(self) -> dict:
        return {
            "rho": self.rho,
            "n": self.n,
            "s": self.s,
            "admissible": self.admissible,
            "case_label": self.case_label,
            "partition": self.partition.to_json() if self.partition else None,
            "requirements": list(self.requirements),
            "reason": self.reason,
        }


def _case_label(rho: int, s: int) -> str:
    if s == 1:
        return "a" if rho == 1 else "b"
    if s == 2:
        if rho == 1:
            return "c"
        if rho % 2:
            return "d"
    return "none"


def _as_scalars(Q) -> tuple:
    return tuple(q if isinstance(q, CycloScalar) else rational(q) for q in Q)


def classify(rho: int, n: int, s: int, Q: Sequence | None = None) -> ClassificationVerdict:
    """Decide whether (rho, n, s, Q) gives a higher quantum Airy structure.

    ``Q`` defaults to the root-of-unity shifts Q_j = w^j.
    """
    if rho < 1 or n < 1 or s < 1:
        raise ValueError("rho, n and s must be positive")
    if Q is None:
        Q, _ = root_of_unity_shifts(rho, n)
    Q = _as_scalars(Q)
    if len(Q) != n:
        raise ValueError(f"expected {n} shifts, got {len(Q)}")

    def reject(reason, partition=None):
        return ClassificationVerdict(False, "none", partition, [], reason, rho, n, s)

    if rho > 1 and gcd(s, rho) != 1:
        return reject("NonCoprime")
    bounds = structure_bounds(rho, n, s)
    r = n * rho
    profile = {i: i - bounds[i] for i in range(1, r + 1)}
    partition = find_partition_with_profile(r, profile)
    if partition is None:
        return reject("STooLarge" if s >= 3 else "NoLambdaGoodPartition")
    label = _case_label(rho, s)
    if label == "none":
        return reject("UnlistedCase", partition)
    requirements = list(REQUIREMENTS)
    if rho > 1:
        requirements.append("all_Q_nonzero")
        if any(not q for q in Q):
            return reject("ZeroShift", partition)
    if isinstance(invert_matrix(shift_matrix(rho, Q)), Singular):
        return reject("SingularShiftMatrix", partition)
    return ClassificationVerdict(True, label, partition, requirements, None, rho, n, s)


def classification_table(r_max: int) -> list[ClassificationVerdict]:
    """Verdicts for every rho >= 1, n >= 2 with n rho <= r_max and 1 <= s <= r_max,
    using root-of-unity shifts, ordered by (rho, n, s)."""
    out = []
    for rho in range(1, r_max // 2 + 1):
        for n in range(2, r_max // rho + 1):
            for s in range(1, r_max + 1):
                out.append(classify(rho, n, s))
    return out


def enumerate_admissible(r_max: int) -> list[tuple]:
    """Admissible (rho, n, s, case, partition) rows with n rho <= r_max."""
    return [
        (v.rho, v.n, v.s, v.case_label, v.partition.parts)
        for v in classification_table(r_max)
        if v.admissible
    ]


def forbidden_partition_witness(rho: int, s: int) -> dict:
    """Why no lambda-good partition exists for 3 <= s < rho coprime.

    The bounds force parts A_1, A_2..A_{s-1}, A_s + 1, A_1 - 1, A_2, ... with
    A_j = ceil(rho j / s) - ceil(rho (j - 1) / s).  Weakly decreasing parts need
    A_2 = ... = A_{s-1} = A_1 - 1 = A_s + 1, which would give a*s = rho.
    """
    if not (3 <= s <= rho - 1 and gcd(s, rho) == 1):
        raise ValueError("needs 3 <= s <= rho - 1 with gcd(s, rho) = 1")

    def ceil_div(a, b):
        return -(-a // b)

    A = [ceil_div(rho * j, s) - ceil_div(rho * (j - 1), s) for j in range(1, s + 1)]
    a = A[0] - 1
    failed = None
    for j in range(2, s):
        if A[j - 1] != a:
            failed = f"A_{j} = A_1 - 1"
            break
    if failed is None and A[-1] + 1 != a:
        failed = "A_s + 1 = A_1 - 1"
    parts = A[:-1] + [A[-1] + 1, A[0] - 1] + A[1:-1]
    ascent = next((k for k in range(len(parts) - 1) if parts[k] < parts[k + 1]), None)
    return {
        "rho": rho,
        "s": s,
        "A": A,
        "sum_A": sum(A),
        "a": a,
        "failed": failed,
        "parts_prefix": parts,
        "first_ascent": ascent,
        "a_times_s_equals_rho": a * s == rho,
    }


# ---------------------------------------------------------------------------
# appending a one-cycle without a shift
# ---------------------------------------------------------------------------

@dataclass
class AppendVerdict:
    accepted: bool
    reason: str | None
    partition: Partition | None
    bounds: dict | None
    base_partition: Partition
    sum_s: int
    witness: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "accepted": self.accepted,
            "reason": self.reason,
            "partition": self.partition.to_json() if self.partition else None,
            "bounds": {str(k): v for k, v in sorted(self.bounds.items())} if self.bounds else None,
            "base_partition": self.base_partition.to_json(),
            "sum_s": self.sum_s,
            "witness": self.witness,
        }


def append_one_cycle(base_partition: Partition, s_list: Sequence[int], Q: Sequence,
                     base_bounds: dict | None = None) -> AppendVerdict:
    """Decide whether an unshifted one-cycle can be appended to a structure
    with partition ``base_partition`` and per-cycle shifts (s_j, Q_j).

    On rejection for lack of a partition extension, ``witness`` lists every
    partition of r+1 that agrees with the base profile on 1..r together with its
    value at r+1.
    """
    r = base_partition.r
    sum_s = sum(s_list)
    if base_bounds is None:
        base_bounds = {i: i - lambda_of(base_partition, i) for i in range(1, r + 1)}
    Q = _as_scalars(Q)
    if any(not q for q in Q):
        return AppendVerdict(False, "ZeroShift", None, None, base_partition, sum_s)
    profile = {i: lambda_of(base_partition, i) for i in range(1, r + 1)}
    profile[r + 1] = sum_s
    found = find_partition_with_profile(r + 1, profile)
    if found is None:
        witness = []
        for p in partitions_of(r + 1):
            if all(lambda_of(p, i) == profile[i] for i in range(1, r + 1)):
                witness.append({"partition": p.to_json(), "lambda_r_plus_1": lambda_of(p, r + 1)})
        return AppendVerdict(False, "NoPartitionExtension", None, None, base_partition, sum_s, witness)
    bounds = dict(base_bounds)
    bounds[r + 1] = r + 1 - sum_s
    return AppendVerdict(True, None, found, bounds, base_partition, sum_s)


class AppendedStructure:
    """Modes of the structure obtained by appending an unshifted one-cycle.

    With H^i the shifted modes of the base (and H^0 = 1, H^{r+1} = 0), the
    appended modes are the natural composition
    H~^i_m = H^i_m + sum_{m1 + m2 = m - 1} K^new_{m1} H^{i-1}_{m2}.
    The base is built over a scalar ring with one extra zero-mode symbol so
    that sum_j C_j = 0 includes the new cycle.
    """

    def __init__(self, spec: TwistSpec, window: Window):
        self.base_spec = TwistSpec(spec.rho, spec.n, spec.s, spec.Q, nsym=spec.n + 1)
        self.window = window
        self.new = spec.n + 1
        self.r = spec.r
        self.base = ShiftedModes(self.base_spec, window)
        self.ring = self.base_spec.ring
        self._cache: dict = {}

    def _new_mode(self, q: int) -> GradedOperator:
        return GradedOperator.mode(self.new, q, self.ring, self.window)

    def __call__(self, i: int, m: int) -> GradedOperator:
        key = (i, m)
        if key in self._cache:
            return self._cache[key]
        win = self.window
        out = GradedOperator.zero(self.ring, win)
        if i <= self.r:
            out = out + self.base(i, m)
        if i == 1:
            out = out + self._new_mode(m).with_window(win)
        else:
            for m1 in range(-win.W, win.W + 1):
                lower = self.base(i - 1, m - 1 - m1)
                if lower:
                    out = out + normal_order_product(self._new_mode(m1), lower, truncate=True, window=win)
        self._cache[key] = out
        return out

    def airy_operators(self, bounds: dict) -> dict:
        spec = self.base_spec
        scales = {j: 1 for j in range(1, spec.n + 1)}
        scales[self.new] = spec.rho
        return eliminate_blocks(self, spec.rho, spec.s, bounds, scales, self.window.W,
                                min(self.r + 1, self.window.D))

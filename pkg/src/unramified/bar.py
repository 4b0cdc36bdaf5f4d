"""Normalized bar-resolution cohomology orders: the independent ground truth.

Cochains are restricted to tuples of non-identity elements, so C^n has
(|G| - 1)^n coordinates and the same cohomology as the full complex.  With
coefficients Z/q for q = p^k and trivial action, the differential matrix of

    (delta f)(g_1, ..., g_{n+1}) = f(g_2, ..., g_{n+1})
        + sum_i (-1)^i f(..., g_i g_{i+1}, ...) + (-1)^{n+1} f(g_1, ..., g_n)

has at most n + 2 nonzeros per row (terms whose merged entry is the
identity drop out).  |H^n(G, Z/q)| = |ker delta^n| / |im delta^{n-1}|, both
read off the elementary divisors of the two sparse matrices.

Deriving Q/Z orders.  Take q = |G| = p^k, so q kills every positive-degree
cohomology group.  The exact sequence 0 -> Z -> Z -> Z/q -> 0 (mult. by q)
then splits into

    0 -> H^i(G, Z) -> H^i(G, Z/q) -> H^{i+1}(G, Z) -> 0   (i >= 1),

because multiplication by q is zero on both ends, so for i >= 1

    |H^{i+1}(G, Z)| = |H^i(G, Z/q)| / |H^i(G, Z)|,   |H^1(G, Z)| = 1.

Finally 0 -> Z -> Q -> Q/Z -> 0 with H^i(G, Q) = 0 for i >= 1 gives
|H^i(G, Q/Z)| = |H^{i+1}(G, Z)| for i >= 1.  The recursion is exact
integer arithmetic; a non-integral quotient cannot happen and would abort.

p-torsion structure check.  For any finite G and j >= 1,

    |H^i(G, Z/p^j)| = |H^i(G, Z)/p^j| * |H^{i+1}(G, Z)[p^j]|,

and both factors are nondecreasing in j, strictly until p^j reaches the
exponent.  Hence the integral cohomology through degree d is killed by p
iff |H^i(G, Z/p)| = |H^i(G, Z/|G|)| for all i <= d, which is how the
elementary-abelian p-annihilation check is run (divisor data only).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .divisors import ElementaryDivisors, elementary_divisors
from .errors import GuardExceededError, InternalInconsistencyError
from .groups import GroupSpec
from .cochains import tables_for
from .results import VerificationResult

Array = np.ndarray

GUARANTEED_ROWS = 20_000       # largest differential assembled without opt-in
HEAVY_ROWS = 600_000           # hard cap even with --allow-heavy
DEFAULT_TIME_LIMIT = 600.0


def _plog(value: int, p: int) -> int:
    e = 0
    while value % p == 0 and value > 1:
        value //= p
        e += 1
    if value != 1:
        raise ValueError(f"{value * p ** e} is not a power of {p}")
    return e


def bar_matrix(spec: GroupSpec, n: int, modulus: int) -> tuple[int, int, list]:
    """Sparse matrix of delta^n: C^n -> C^{n+1} over Z/modulus.

    Returns (rows, cols, entries) with entries a list of (row, col, value);
    rows = (N-1)^{n+1}, cols = (N-1)^n in the normalized complex.
    """
    t = tables_for(spec)
    N = t.size
    q = modulus
    M = N - 1
    rows, cols = M ** (n + 1), M ** n
    if n == 0:
        return rows, 1, []  # trivial action: delta^0 = 0
    # decode all row tuples; digits in 0..M-1 stand for elements 1..M
    ridx = np.arange(rows)
    digits = np.empty((rows, n + 1), dtype=np.int64)
    for pos in range(n + 1):
        digits[:, pos] = (ridx // M ** (n - pos)) % M
    elems = digits + 1
    weights = M ** np.arange(n - 1, -1, -1, dtype=np.int64)

    out_r, out_c, out_v = [], [], []

    def emit(rowsel: Array, coltuples: Array, coeff: int) -> None:
        out_r.append(rowsel)
        out_c.append((coltuples - 1) @ weights)
        out_v.append(np.full(rowsel.shape[0], coeff % q, dtype=np.int64))

    emit(ridx, elems[:, 1:], 1)                          # drop g_1
    mul = t.mul
    for i in range(1, n + 1):
        merged = mul[elems[:, i - 1], elems[:, i]]
        keep = merged != 0                              # normalized: e drops
        tup = np.concatenate(
            [elems[:, :i - 1], merged[:, None], elems[:, i + 1:]], axis=1)
        emit(ridx[keep], tup[keep], (-1) ** i)
    emit(ridx, elems[:, :n], (-1) ** (n + 1))            # drop g_{n+1}

    r = np.concatenate(out_r)
    c = np.concatenate(out_c)
    v = np.concatenate(out_v)
    # combine duplicate coordinates
    key = r * cols + c
    order = np.argsort(key, kind="stable")
    key, r, c, v = key[order], r[order], c[order], v[order]
    uniq, start = np.unique(key, return_index=True)
    sums = np.add.reduceat(v, start) % q
    keep = sums != 0
    rr = (uniq // cols)[keep]
    cc = (uniq % cols)[keep]
    vv = sums[keep]
    return rows, cols, list(zip(rr.tolist(), cc.tolist(), vv.tolist()))


def _tier_check(spec: GroupSpec, degree: int, allow_heavy: bool) -> None:
    N = spec.order
    rows = (N - 1) ** (degree + 1)
    if rows <= GUARANTEED_ROWS:
        return
    if not allow_heavy:
        raise GuardExceededError(
            f"degree {degree} at |G| = {N} needs the opt-in heavy tier "
            f"({rows} rows); pass allow_heavy", required=rows)
    if rows > HEAVY_ROWS:
        raise GuardExceededError(
            f"degree {degree} at |G| = {N} exceeds the heavy cap "
            f"({rows} > {HEAVY_ROWS} rows)", required=rows)


@dataclass(frozen=True)
class CohomologyOrders:
    """Per-degree |H^n(G, Z/p^k)| and derived |H^n(G, Q/Z)| (as p-exponents)."""

    spec_name: str
    group_order: int
    p: int
    k: int
    degmax: int
    mod_exps: tuple[int, ...]       # |H^n(G, Z/p^k)| = p ** mod_exps[n-1]
    qz_exps: tuple[int, ...]        # |H^n(G, Q/Z)|  = p ** qz_exps[n-1]
    divisors: tuple[tuple[int, ...], ...] = field(default=())  # of delta^n

    def mod_order(self, n: int) -> int:
        return self.p ** self.mod_exps[n - 1]

    def qz_order(self, n: int) -> int:
        return self.p ** self.qz_exps[n - 1]

    def to_json_dict(self) -> dict:
        return {
            "group": self.spec_name,
            "order": self.group_order,
            "p": self.p,
            "modulus": self.p ** self.k,
            "degmax": self.degmax,
            "mod_orders": {str(i + 1): self.p ** e
                           for i, e in enumerate(self.mod_exps)},
            "qz_orders": {str(i + 1): self.p ** e
                          for i, e in enumerate(self.qz_exps)},
            "divisor_exponents": {str(i): list(d)
                                  for i, d in enumerate(self.divisors)},
        }


def differential_divisors(spec: GroupSpec, n: int, k: int,
                          allow_heavy: bool = False,
                          time_limit: float = DEFAULT_TIME_LIMIT) -> ElementaryDivisors:
    """Elementary divisors of delta^n over Z/p^k."""
    _tier_check(spec, n, allow_heavy)
    q = spec.p ** k
    rows, cols, entries = bar_matrix(spec, n, q)
    deadline = time.monotonic() + time_limit if time_limit else None
    return elementary_divisors(rows, cols, entries, spec.p, k, deadline=deadline)


def cohomology_order_exp(spec: GroupSpec, n: int, k: int,
                         allow_heavy: bool = False,
                         time_limit: float = DEFAULT_TIME_LIMIT,
                         _cache: dict | None = None) -> int:
    """p-exponent of |H^n(G, Z/p^k)| = |ker delta^n| / |im delta^{n-1}|."""
    if n < 1:
        raise ValueError("degree must be >= 1")

    def divs(deg: int) -> ElementaryDivisors:
        if _cache is not None and deg in _cache:
            return _cache[deg]
        d = differential_divisors(spec, deg, k, allow_heavy, time_limit)
        if _cache is not None:
            _cache[deg] = d
        return d

    upper = divs(n)
    lower_im = divs(n - 1).image_exp if n > 1 else 0  # delta^0 = 0
    exp = upper.kernel_exp - lower_im
    if exp < 0:
        raise InternalInconsistencyError(
            f"negative cohomology exponent at degree {n}")
    return exp


def cohomology_order_mod(spec: GroupSpec, n: int, modulus: int,
                         allow_heavy: bool = False,
                         time_limit: float = DEFAULT_TIME_LIMIT) -> int:
    """|H^n(G, Z/modulus)| for modulus a power of p."""
    k = _plog(modulus, spec.p)
    return spec.p ** cohomology_order_exp(spec, n, k, allow_heavy, time_limit)


def qz_orders(spec: GroupSpec, degmax: int = 3,
              allow_heavy: bool = False,
              time_limit: float = DEFAULT_TIME_LIMIT) -> CohomologyOrders:
    """Derived |H^i(G, Q/Z)| for i <= degmax via the integral recursion."""
    if not 1 <= degmax <= 3:
        raise ValueError("degmax must be between 1 and 3")
    p = spec.p
    k = spec.n + spec.m            # p^k = |G|
    cache: dict[int, ElementaryDivisors] = {}
    mod_exps = [cohomology_order_exp(spec, i, k, allow_heavy, time_limit,
                                     _cache=cache)
                for i in range(1, degmax + 1)]
    z_exp = 0                      # |H^1(G, Z)| = 1
    qz_exps = []
    for i in range(1, degmax + 1):
        e = mod_exps[i - 1] - z_exp
        if e < 0:
            raise InternalInconsistencyError(
                f"recursion broke at degree {i}: |H^{i}(Z/p^k)| < |H^{i}(Z)|")
        qz_exps.append(e)          # |H^i(Q/Z)| = |H^{i+1}(Z)|
        z_exp = e
    divisors = tuple(tuple(cache[d].exponents) for d in sorted(cache))
    return CohomologyOrders(spec.name or "custom", spec.order, p, k, degmax,
                            tuple(mod_exps), tuple(qz_exps), divisors)


def abelianization_exp(spec: GroupSpec) -> int:
    """|G^ab| = p ** (n + m - rank gamma), computed away from the bar complex."""
    from .linalg import rank_mod
    return spec.n + spec.m - rank_mod(spec.gamma, spec.p)


def verify_p_annihilation(spec: GroupSpec, degmax: int = 3,
                          allow_heavy: bool = False,
                          time_limit: float = DEFAULT_TIME_LIMIT) -> VerificationResult:
    """For elementary abelian E: p * H^i(E, Q/Z) = 0 through degmax.

    Checked structurally: |H^i(E, Z/p)| must equal |H^i(E, Z/|E|)| for all
    i <= degmax (see module docstring).
    """
    if spec.m != 0:
        return VerificationResult("p_annihilation", True, 0,
                                  note="skipped: requires m = 0 (abelian)",
                                  skipped=True)
    k = spec.n
    checked = 0
    for i in range(1, degmax + 1):
        cache1: dict = {}
        cachek: dict = {}
        e1 = cohomology_order_exp(spec, i, 1, allow_heavy, time_limit, cache1)
        ek = cohomology_order_exp(spec, i, k, allow_heavy, time_limit, cachek) \
            if k > 1 else e1
        checked += 1
        if e1 != ek:
            return VerificationResult(
                "p_annihilation", False, checked,
                counterexample=f"degree {i}: |H(Z/p)| = p^{e1} != "
                               f"|H(Z/p^{k})| = p^{ek}")
    return VerificationResult("p_annihilation", True, checked)


def sparse_matmul_is_zero(a: tuple[int, int, list],
                          b: tuple[int, int, list], q: int) -> bool:
    """Is A @ B = 0 over Z/q for COO (rows, cols, entries) matrices?"""
    rows_a, cols_a, ea = a
    rows_b, cols_b, eb = b
    if cols_a != rows_b:
        raise ValueError("shape mismatch")
    brows: dict[int, list] = {}
    for r, c, v in eb:
        brows.setdefault(r, []).append((c, v))
    acc: dict[tuple[int, int], int] = {}
    for r, c, v in ea:
        for c2, v2 in brows.get(c, ()):
            key = (r, c2)
            acc[key] = (acc.get(key, 0) + v * v2) % q
    return all(v % q == 0 for v in acc.values())

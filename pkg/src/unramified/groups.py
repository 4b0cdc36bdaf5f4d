"""Central extensions 0 -> V -> G -> U -> 0 of exponent p.

A group is specified by an odd prime p, dimensions n = dim U, m = dim V and
a matrix gamma: Lambda^2 U -> V (m rows, C(n, 2) columns, lex pair order).
Elements are pairs (u, v); the group law uses the alternating 2-cocycle

    (u1, v1) * (u2, v2) = (u1 + u2, v1 + v2 + (1/2) gamma(u1 ^ u2)),

whose defining property is the commutator identity
[ (u1, *), (u2, *) ] = (0, gamma(u1 ^ u2)); it forces exponent p and fixes
the extension up to isomorphism.  The section s(u) = (u, 0) satisfies
g * s(pi(g))^-1 = (0, v-part of g).

Element enumeration is lexicographic on the concatenated (u, v) digit
string, so the identity has index 0 and all derived tables are
deterministic.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import (
    DimensionMismatchError,
    GuardExceededError,
    NontrivialRadicalError,
    NotSurjectiveError,
    SpecError,
)
from .exterior import subset_index, subsets
from .linalg import Subspace, check_odd_prime, half_mod, kernel, rank_mod

Array = np.ndarray

DEFAULT_ENUM_BOUND = 1 << 20


@dataclass(frozen=True)
class GroupSpec:
    """(p, dim U, dim V, gamma) with gamma an m x C(n,2) matrix over F_p."""

    p: int
    n: int
    m: int
    gamma: Array = field(compare=False)
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        check_odd_prime(self.p)
        if self.n < 0 or self.m < 0:
            raise SpecError("dimensions must be nonnegative")
        g = np.asarray(self.gamma, dtype=np.int64) % self.p
        if g.shape != (self.m, comb(self.n, 2)):
            raise SpecError(
                f"gamma must be {self.m} x {comb(self.n, 2)}, got {g.shape}")
        g.setflags(write=False)
        object.__setattr__(self, "gamma", g)

    def __eq__(self, other) -> bool:
        return (isinstance(other, GroupSpec)
                and (self.p, self.n, self.m) == (other.p, other.n, other.m)
                and bool(np.array_equal(self.gamma, other.gamma)))

    def __hash__(self) -> int:
        return hash((self.p, self.n, self.m, self.gamma.tobytes()))

    @property
    def order(self) -> int:
        return self.p ** (self.n + self.m)

    @property
    def half(self) -> int:
        return half_mod(self.p)

    def gamma_forms(self) -> Array:
        """Antisymmetric matrices A_k with gamma(u ^ w)_k = u . A_k . w."""
        A = np.zeros((self.m, self.n, self.n), dtype=np.int64)
        for s, (i, j) in enumerate(subsets(self.n, 2)):
            A[:, i - 1, j - 1] = self.gamma[:, s]
            A[:, j - 1, i - 1] = (-self.gamma[:, s]) % self.p
        return A

    def gamma_of(self, u, w) -> Array:
        """gamma(u ^ w) in V; u, w may be batched with leading axes."""
        A = self.gamma_forms()
        u = np.asarray(u, dtype=np.int64) % self.p
        w = np.asarray(w, dtype=np.int64) % self.p
        return np.einsum('...i,kij,...j->...k', u, A, w) % self.p


@dataclass(frozen=True)
class GroupElement:
    u: tuple[int, ...]
    v: tuple[int, ...]

    @classmethod
    def make(cls, u, v) -> "GroupElement":
        return cls(tuple(int(x) for x in u), tuple(int(x) for x in v))

    def arrays(self) -> tuple[Array, Array]:
        return (np.array(self.u, dtype=np.int64),
                np.array(self.v, dtype=np.int64))


def identity(spec: GroupSpec) -> GroupElement:
    return GroupElement.make((0,) * spec.n, (0,) * spec.m)


def section(spec: GroupSpec, u) -> GroupElement:
    """The set-theoretic section s(u) = (u, 0)."""
    return GroupElement.make(u, (0,) * spec.m)


def _check_element(spec: GroupSpec, g: GroupElement) -> None:
    if len(g.u) != spec.n or len(g.v) != spec.m:
        raise DimensionMismatchError(
            f"element shape ({len(g.u)}, {len(g.v)}) for spec ({spec.n}, {spec.m})")


def mul(spec: GroupSpec, g1: GroupElement, g2: GroupElement) -> GroupElement:
    _check_element(spec, g1)
    _check_element(spec, g2)
    u1, v1 = g1.arrays()
    u2, v2 = g2.arrays()
    u = (u1 + u2) % spec.p
    v = (v1 + v2 + spec.half * spec.gamma_of(u1, u2)) % spec.p
    return GroupElement.make(u, v)


def inverse(spec: GroupSpec, g: GroupElement) -> GroupElement:
    _check_element(spec, g)
    u, v = g.arrays()
    return GroupElement.make((-u) % spec.p, (-v) % spec.p)


def power(spec: GroupSpec, g: GroupElement, k: int) -> GroupElement:
    """g^k; since gamma(u ^ u) = 0 this is (k u, k v), so g^p = e."""
    _check_element(spec, g)
    u, v = g.arrays()
    return GroupElement.make((k * u) % spec.p, (k * v) % spec.p)


def commutator(spec: GroupSpec, g1: GroupElement, g2: GroupElement) -> GroupElement:
    """[g1, g2] = g1 g2 g1^-1 g2^-1 = (0, gamma(u1 ^ u2))."""
    a = mul(spec, g1, g2)
    b = mul(spec, g2, g1)
    return mul(spec, a, inverse(spec, b))


def group_op(spec: GroupSpec, mode: str, *args, k: int | None = None):
    """Dispatcher over {mul, inv, pow, commutator} for CLI-style callers."""
    if mode == "mul":
        return mul(spec, *args)
    if mode == "inv":
        return inverse(spec, *args)
    if mode == "pow":
        return power(spec, args[0], spec.p if k is None else k)
    if mode == "commutator":
        return commutator(spec, *args)
    raise ValueError(f"unknown group operation {mode!r}")


# -- structure ---------------------------------------------------------------

def radical_subspace(spec: GroupSpec) -> Subspace:
    """{u in U : gamma(u ^ w) = 0 for all w}; trivial iff Z(G) = [G, G]."""
    if spec.n == 0:
        return Subspace.zero(spec.p, 0)
    A = spec.gamma_forms()  # (m, n, n)
    M = A.reshape(spec.m * spec.n, spec.n) if spec.m else \
        np.zeros((0, spec.n), dtype=np.int64)
    if spec.m == 0:
        return Subspace.full(spec.p, spec.n)
    return kernel(M, spec.p)


def center_and_derived(spec: GroupSpec) -> tuple[int, int]:
    """(dim radical(gamma), rank gamma) = (dim Z(G) - m, dim [G, G])."""
    return radical_subspace(spec).dim, rank_mod(spec.gamma, spec.p)


@dataclass(frozen=True)
class ValidationReport:
    p: int
    n: int
    m: int
    gamma_rank: int
    radical_dim: int
    strict: bool = field(default=True, compare=False)

    @property
    def surjective(self) -> bool:
        return self.gamma_rank == self.m

    @property
    def trivial_radical(self) -> bool:
        return self.radical_dim == 0

    @property
    def hypotheses_ok(self) -> bool:
        return self.surjective and self.trivial_radical


def validate_spec(spec: GroupSpec, strict: bool = True) -> ValidationReport:
    """Check p and, in strict mode, V = [G,G] and Z(G) = [G,G].

    Always raises for p even / composite (already enforced at construction);
    strict mode raises NotSurjectiveError / NontrivialRadicalError.
    """
    check_odd_prime(spec.p)
    rad, rank = center_and_derived(spec)
    report = ValidationReport(spec.p, spec.n, spec.m, rank, rad, strict)
    if strict:
        if not report.surjective:
            raise NotSurjectiveError(
                f"gamma has rank {rank} < m = {spec.m}: V != [G, G]")
        if not report.trivial_radical:
            raise NontrivialRadicalError(
                f"gamma has radical of dim {rad} > 0: Z(G) != [G, G]")
    return report


# -- enumeration and index tables -------------------------------------------

def enumerate_elements(spec: GroupSpec, bound: int = DEFAULT_ENUM_BOUND):
    """All p^(n+m) elements, lex on the (u, v) digit string."""
    if spec.order > bound:
        raise GuardExceededError(
            f"|G| = {spec.order} exceeds the enumeration bound {bound}",
            required=spec.order)
    for digits in itertools.product(range(spec.p), repeat=spec.n + spec.m):
        yield GroupElement.make(digits[:spec.n], digits[spec.n:])


def element_index(spec: GroupSpec, g: GroupElement) -> int:
    idx = 0
    for d in list(g.u) + list(g.v):
        idx = idx * spec.p + int(d) % spec.p
    return idx


@dataclass(frozen=True)
class GroupTables:
    """Dense index tables for an enumerable group (identity has index 0)."""

    spec: GroupSpec
    size: int
    mul: Array          # (N, N) product indices
    inv: Array          # (N,)
    udigits: Array      # (N, n)
    vdigits: Array      # (N, m)

    def u_eval(self, functional) -> Array:
        """Values of a U-functional (coeff vector) at every element."""
        c = np.asarray(functional, dtype=np.int64) % self.spec.p
        return (self.udigits @ c) % self.spec.p

    def v_eval(self, functional) -> Array:
        c = np.asarray(functional, dtype=np.int64) % self.spec.p
        return (self.vdigits @ c) % self.spec.p

    def biform(self, form2: Array) -> Array:
        """B[g, h] = (2-form on U)(ubar_g ^ ubar_h) for all pairs."""
        return (self.udigits @ form2 @ self.udigits.T) % self.spec.p


def antisym_matrix(p: int, n: int, coeffs) -> Array:
    """Antisymmetric n x n matrix of a Lambda^2-functional (lex pair coords)."""
    A = np.zeros((n, n), dtype=np.int64)
    for s, (i, j) in enumerate(subsets(n, 2)):
        c = int(coeffs[s]) % p
        A[i - 1, j - 1] = c
        A[j - 1, i - 1] = (-c) % p
    return A


def build_tables(spec: GroupSpec, bound: int = DEFAULT_ENUM_BOUND) -> GroupTables:
    N = spec.order
    if N > bound or N * N > 1 << 26:
        raise GuardExceededError(
            f"tables for |G| = {N} exceed the bound", required=N)
    p, n, m = spec.p, spec.n, spec.m
    digits = np.zeros((N, n + m), dtype=np.int64)
    idx = np.arange(N)
    for pos in range(n + m):
        digits[:, pos] = (idx // p ** (n + m - 1 - pos)) % p
    ud, vd = digits[:, :n], digits[:, n:]
    weights = p ** np.arange(n + m - 1, -1, -1, dtype=np.int64)
    # product digits for all pairs
    usum = (ud[:, None, :] + ud[None, :, :]) % p
    vsum = (vd[:, None, :] + vd[None, :, :]) % p
    if m and n:
        A = spec.gamma_forms()
        gv = np.einsum('ai,kij,bj->abk', ud, A, ud) % p
        vsum = (vsum + spec.half * gv) % p
    prod = np.concatenate([usum, vsum], axis=2)
    multab = np.einsum('abj,j->ab', prod, weights)
    inv_digits = (-digits) % p
    invtab = inv_digits @ weights
    return GroupTables(spec, N, multab.astype(np.int64),
                       invtab.astype(np.int64), ud, vd)


# -- spec JSON ---------------------------------------------------------------

def spec_to_json_dict(spec: GroupSpec) -> dict:
    terms = []
    for s, (i, j) in enumerate(subsets(spec.n, 2)):
        col = spec.gamma[:, s]
        if col.any():
            terms.append({"i": i, "j": j, "v": [int(x) for x in col]})
    return {"p": spec.p, "dimU": spec.n, "dimV": spec.m, "gamma": terms}


def spec_from_json_dict(data: dict, name: str | None = None) -> GroupSpec:
    try:
        p = int(data["p"])
        n = int(data["dimU"])
        m = int(data["dimV"])
        terms = data.get("gamma", [])
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"malformed spec: {exc}") from exc
    gamma = np.zeros((m, comb(n, 2)), dtype=np.int64)
    idx = subset_index(n, 2)
    for t, term in enumerate(terms, start=1):
        try:
            i, j = int(term["i"]), int(term["j"])
            v = [int(x) for x in term["v"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecError(f"gamma term {t}: malformed entry ({exc})") from exc
        if not (1 <= i <= n and 1 <= j <= n):
            raise SpecError(f"gamma term {t}: indices must lie in 1..{n}")
        if i >= j:
            raise SpecError(f"gamma term {t}: i<j required")
        if len(v) != m:
            raise SpecError(f"gamma term {t}: v must have length {m}")
        if any(x < 0 or x >= p for x in v):
            raise SpecError(f"gamma term {t}: coefficients must lie in [0, {p - 1}]")
        gamma[:, idx[(i, j)]] = (gamma[:, idx[(i, j)]] + v) % p
    return GroupSpec(p, n, m, gamma, name=name)


def load_spec(path: str) -> GroupSpec:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError(f"spec file is not valid JSON: {exc}") from exc
    return spec_from_json_dict(data, name=path)


# -- spec transforms and random specs ----------------------------------------

def permute_basis(spec: GroupSpec, perm) -> GroupSpec:
    """Conjugate gamma by a permutation of the U basis.

    perm is a sequence with perm[i] = image of basis index i (0-based);
    the new form satisfies gamma'(e_a ^ e_b) = gamma(e_perm(a) ^ e_perm(b)).
    """
    perm = list(perm)
    idx = subset_index(spec.n, 2)
    g = np.zeros_like(spec.gamma)
    for s, (i, j) in enumerate(subsets(spec.n, 2)):
        a, b = perm[i - 1] + 1, perm[j - 1] + 1
        sign = 1
        if a > b:
            a, b = b, a
            sign = -1
        g[:, s] = (sign * spec.gamma[:, idx[(a, b)]]) % spec.p
    return GroupSpec(spec.p, spec.n, spec.m, g,
                     name=(spec.name or "spec") + "-permuted")


def random_strict_spec(rng: np.random.Generator, p: int,
                       n_min: int = 2, n_max: int = 5,
                       max_tries: int = 1000) -> GroupSpec:
    """A seeded random spec with gamma surjective and trivial radical."""
    for _ in range(max_tries):
        n = int(rng.integers(n_min, n_max + 1))
        d2 = comb(n, 2)
        m = int(rng.integers(1, d2 + 1))
        gamma = rng.integers(0, p, size=(m, d2))
        spec = GroupSpec(p, n, m, gamma)
        rad, rank = center_and_derived(spec)
        if rank == m and rad == 0:
            return spec
    raise RuntimeError("could not find a strict spec; widen the search")

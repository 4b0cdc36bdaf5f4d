"""Exact linear algebra over F_p with canonical subspace representations.

Matrices are numpy ``int64`` arrays holding reduced residues; a subspace of
F_p^N is always stored as the reduced row-echelon basis of its row space, so
two equal subspaces have byte-identical basis tables and ``==`` / ``hash``
are exact.  Only odd primes are accepted: 1/2 = (p+1)/2 is needed everywhere
downstream.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegeneratePairingError,
    DimensionMismatchError,
    EvenPrimeError,
    NotPrimeError,
)

Array = np.ndarray


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def check_odd_prime(p: int) -> int:
    """Validate the scalar modulus; the whole pipeline needs 2 invertible."""
    if not is_prime(p):
        raise NotPrimeError(f"modulus {p} is not prime")
    if p == 2:
        raise EvenPrimeError("p = 2 is not supported; 1/2 must exist mod p")
    return p


def inv_mod(a: int, p: int) -> int:
    a = int(a) % p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(a, p - 2, p)


def half_mod(p: int) -> int:
    """The element 1/2 = (p+1)/2 of F_p."""
    return (p + 1) // 2


def as_matrix(rows, cols: int | None = None) -> Array:
    """Coerce nested lists / arrays to a 2-d int64 matrix."""
    A = np.array(rows, dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(1, -1) if A.size else A.reshape(0, cols or 0)
    if A.size == 0 and cols is not None:
        A = np.zeros((0, cols), dtype=np.int64)
    return A


def rref_mod(A: Array, p: int) -> tuple[Array, list[int]]:
    """Reduced row echelon form over F_p.

    Returns (R, pivot_columns) where R keeps only the nonzero rows, pivots
    are 1 and their columns are cleared, and pivot columns increase.
    """
    A = np.array(A, dtype=np.int64) % p
    m, n = A.shape
    r = 0
    pivots: list[int] = []
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = (A[r] * inv_mod(A[r, c], p)) % p
        other = np.nonzero(A[:, c])[0]
        for j in other:
            if j != r:
                A[j] = (A[j] - A[j, c] * A[r]) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank_mod(A: Array, p: int) -> int:
    return len(rref_mod(A, p)[1])


def kernel_basis(A: Array, p: int) -> Array:
    """Basis (as rows) of {x : A x = 0} over F_p."""
    A = np.asarray(A, dtype=np.int64)
    m, n = A.shape
    R, pivots = rref_mod(A, p)
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    if not free:
        return np.zeros((0, n), dtype=np.int64)
    B = np.zeros((len(free), n), dtype=np.int64)
    for row, f in enumerate(free):
        B[row, f] = 1
        for i, c in enumerate(pivots):
            B[row, c] = (-R[i, f]) % p
    return B


def solve_mod(A: Array, b: Array, p: int) -> Array | None:
    """One solution of A x = b over F_p, or None if inconsistent."""
    A = np.asarray(A, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64).reshape(-1) % p
    m, n = A.shape
    R, pivots = rref_mod(np.hstack([A, b[:, None]]), p)
    for i in range(R.shape[0]):
        if not R[i, :n].any() and R[i, n]:
            return None
    x = np.zeros(n, dtype=np.int64)
    for i, c in enumerate(pivots):
        if c == n:
            return None
        x[c] = R[i, n]
    return x


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_p^N in canonical reduced-row-echelon form."""

    p: int
    ambient: int
    basis: Array = field(compare=False)

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=np.int64)
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_generators(cls, gens, p: int, ambient: int) -> "Subspace":
        M = as_matrix(gens, ambient)
        if M.shape[0] == 0:
            return cls.zero(p, ambient)
        if M.shape[1] != ambient:
            raise DimensionMismatchError(
                f"generators live in dim {M.shape[1]}, expected {ambient}")
        R, _ = rref_mod(M, p)
        return cls(p, ambient, R)

    @classmethod
    def zero(cls, p: int, ambient: int) -> "Subspace":
        return cls(p, ambient, np.zeros((0, ambient), dtype=np.int64))

    @classmethod
    def full(cls, p: int, ambient: int) -> "Subspace":
        return cls(p, ambient, np.eye(ambient, dtype=np.int64))

    # -- basic queries -----------------------------------------------------

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subspace)
                and self.p == other.p
                and self.ambient == other.ambient
                and self.basis.shape == other.basis.shape
                and bool(np.array_equal(self.basis, other.basis)))

    def __hash__(self) -> int:
        return hash((self.p, self.ambient, self.basis.tobytes()))

    def _check_compatible(self, other: "Subspace") -> None:
        if self.p != other.p or self.ambient != other.ambient:
            raise DimensionMismatchError(
                f"ambient mismatch: F_{self.p}^{self.ambient} vs "
                f"F_{other.p}^{other.ambient}")

    def contains(self, vec) -> bool:
        v = np.asarray(vec, dtype=np.int64).reshape(-1) % self.p
        if v.shape[0] != self.ambient:
            raise DimensionMismatchError(
                f"vector of dim {v.shape[0]} in F^{self.ambient}")
        for i in range(self.dim):
            row = self.basis[i]
            c = int(np.nonzero(row)[0][0])
            if v[c]:
                v = (v - v[c] * row) % self.p
        return not v.any()

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check_compatible(other)
        return all(self.contains(r) for r in other.basis)

    # -- lattice operations ------------------------------------------------

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        return Subspace.from_generators(
            np.vstack([self.basis, other.basis]), self.p, self.ambient)

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: rref [S|S ; T|0], rows with zero left half span S∩T."""
        self._check_compatible(other)
        N = self.ambient
        top = np.hstack([self.basis, self.basis])
        bot = np.hstack([other.basis, np.zeros_like(other.basis)])
        R, _ = rref_mod(np.vstack([top, bot]), self.p)
        rows = [R[i, N:] for i in range(R.shape[0]) if not R[i, :N].any()]
        return Subspace.from_generators(rows, self.p, N)

    def orthogonal(self, pairing: Array | None = None) -> "Subspace":
        """{x : <s, x> = 0 for all s in self} for <s, x> = s @ pairing @ x."""
        N = self.ambient
        if pairing is None:
            M = self.basis
        else:
            P = np.asarray(pairing, dtype=np.int64) % self.p
            if P.shape != (N, N):
                raise DimensionMismatchError(
                    f"pairing shape {P.shape}, expected ({N}, {N})")
            if rank_mod(P, self.p) != N:
                raise DegeneratePairingError("pairing matrix is degenerate")
            M = (self.basis @ P) % self.p
        if self.dim == 0:
            return Subspace.full(self.p, N)
        return Subspace.from_generators(kernel_basis(M, self.p), self.p, N)

    # -- enumeration (for brute-force oracles) ------------------------------

    def vectors(self):
        """All p^dim elements, deterministic order (lex in coefficients)."""
        if self.dim == 0:
            yield np.zeros(self.ambient, dtype=np.int64)
            return
        for coeffs in itertools.product(range(self.p), repeat=self.dim):
            yield (np.array(coeffs, dtype=np.int64) @ self.basis) % self.p


def subspace_op(S: Subspace, T: Subspace | None = None, mode: str = "sum",
                vector=None):
    """Dispatcher over {sum, intersect, contains_vector, equals}."""
    if mode == "sum":
        return S + T
    if mode == "intersect":
        return S.intersect(T)
    if mode == "contains_vector":
        return S.contains(vector)
    if mode == "equals":
        S._check_compatible(T)
        return S == T
    raise ValueError(f"unknown subspace operation {mode!r}")


def rref(M, p: int) -> tuple[Subspace, int]:
    """Row space of M in canonical form, plus its rank."""
    A = as_matrix(M)
    S = Subspace.from_generators(A, p, A.shape[1] if A.ndim == 2 else 0)
    return S, S.dim


def kernel(M, p: int) -> Subspace:
    """{x : M x = 0} as a canonical subspace."""
    A = as_matrix(M)
    return Subspace.from_generators(kernel_basis(A, p), p, A.shape[1])

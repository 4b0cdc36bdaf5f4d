"""Exterior powers of F_p^n and their duals.

Basis convention, fixed globally: the basis of Lambda^k(F_p^n) is indexed
by the strictly increasing k-subsets of {1, ..., n} in lexicographic order,
and the dual wedge basis of Lambda^k((F_p^n)^dual) is indexed the same way.
The duality pairing is normalized so that on pure wedges

    <f_1 ^ ... ^ f_k, v_1 ^ ... ^ v_k> = det(f_i(v_j))

(no 1/k! factor), which makes the two bases literally dual: the pairing
matrix is the identity, and orthogonal complements reduce to plain kernels.

Degrees with k > n are carried as the zero space of dimension C(n, k) = 0
so that degree-3 computations run uniformly for small n.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from .errors import DimensionMismatchError
from .linalg import Subspace, half_mod, kernel

Array = np.ndarray


@lru_cache(maxsize=None)
def subsets(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Strictly increasing k-subsets of {1..n}, lex order."""
    return tuple(itertools.combinations(range(1, n + 1), k))


@lru_cache(maxsize=None)
def subset_index(n: int, k: int) -> dict[tuple[int, ...], int]:
    return {s: i for i, s in enumerate(subsets(n, k))}


def merge_sign(S: tuple[int, ...], T: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Sign and sorted union of disjoint index tuples; sign 0 on overlap."""
    if set(S) & set(T):
        return 0, ()
    inversions = sum(1 for s in S for t in T if s > t)
    merged = tuple(sorted(S + T))
    return (-1) ** inversions, merged


@dataclass(frozen=True)
class ExtVector:
    """An element of Lambda^k(F_p^n) (or of its dual, same coordinates)."""

    p: int
    n: int
    k: int
    coeffs: Array = field(compare=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.int64) % self.p
        if c.shape != (comb(self.n, self.k),):
            raise DimensionMismatchError(
                f"Lambda^{self.k}(F^{self.n}) has dim {comb(self.n, self.k)}, "
                f"got {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, p: int, n: int, k: int) -> "ExtVector":
        return cls(p, n, k, np.zeros(comb(n, k), dtype=np.int64))

    @classmethod
    def basis_element(cls, p: int, n: int, k: int, subset) -> "ExtVector":
        c = np.zeros(comb(n, k), dtype=np.int64)
        c[subset_index(n, k)[tuple(subset)]] = 1
        return cls(p, n, k, c)

    @classmethod
    def from_vector(cls, p: int, n: int, v) -> "ExtVector":
        return cls(p, n, 1, np.asarray(v, dtype=np.int64))

    def __eq__(self, other) -> bool:
        return (isinstance(other, ExtVector)
                and (self.p, self.n, self.k) == (other.p, other.n, other.k)
                and bool(np.array_equal(self.coeffs, other.coeffs)))

    def __hash__(self) -> int:
        return hash((self.p, self.n, self.k, self.coeffs.tobytes()))

    def __add__(self, other: "ExtVector") -> "ExtVector":
        self._check(other, same_degree=True)
        return ExtVector(self.p, self.n, self.k,
                         (self.coeffs + other.coeffs) % self.p)

    def __sub__(self, other: "ExtVector") -> "ExtVector":
        self._check(other, same_degree=True)
        return ExtVector(self.p, self.n, self.k,
                         (self.coeffs - other.coeffs) % self.p)

    def scale(self, c: int) -> "ExtVector":
        return ExtVector(self.p, self.n, self.k, (c * self.coeffs) % self.p)

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def _check(self, other: "ExtVector", same_degree: bool = False) -> None:
        if self.p != other.p or self.n != other.n:
            raise DimensionMismatchError("mismatched ambient spaces")
        if same_degree and self.k != other.k:
            raise DimensionMismatchError(
                f"degree mismatch: {self.k} vs {other.k}")


def wedge(x: ExtVector, y: ExtVector) -> ExtVector:
    """Bilinear extension of e_S ^ e_T = sign(S, T) e_{S u T}."""
    x._check(y)
    p, n = x.p, x.n
    k = x.k + y.k
    if k > n:
        return ExtVector.zero(p, n, k)  # zero space of dim C(n, k) = 0
    out = np.zeros(comb(n, k), dtype=np.int64)
    idx = subset_index(n, k)
    Sx, Sy = subsets(n, x.k), subsets(n, y.k)
    xi = np.nonzero(x.coeffs)[0]
    yi = np.nonzero(y.coeffs)[0]
    for i in xi:
        ci = int(x.coeffs[i])
        for j in yi:
            sign, merged = merge_sign(Sx[i], Sy[j])
            if sign:
                out[idx[merged]] += sign * ci * int(y.coeffs[j])
    return ExtVector(p, n, k, out % p)


def duality_pairing(f: ExtVector, x: ExtVector) -> int:
    """<f, x> for f in the dual exterior power; identity matrix in dual bases."""
    f._check(x, same_degree=True)
    return int((f.coeffs @ x.coeffs) % f.p)


def pairing_matrix(n: int, k: int) -> Array:
    """The duality pairing of the wedge bases is the identity by construction."""
    return np.eye(comb(n, k), dtype=np.int64)


def wedge_by_vector_matrix(p: int, n: int, k: int, v) -> Array:
    """Matrix of (omega -> omega ^ v): Lambda^k -> Lambda^{k+1}, rows = source basis."""
    v = np.asarray(v, dtype=np.int64) % p
    src = subsets(n, k)
    dim_t = comb(n, k + 1) if k + 1 <= n else 0
    M = np.zeros((len(src), dim_t), dtype=np.int64)
    if dim_t == 0:
        return M
    idx = subset_index(n, k + 1)
    nz = np.nonzero(v)[0]
    for i, S in enumerate(src):
        for j in nz:
            sign, merged = merge_sign(S, (int(j) + 1,))
            if sign:
                M[i, idx[merged]] = (M[i, idx[merged]] + sign * int(v[j])) % p
    return M


def flag_subspace(p: int, n: int, k: int, v) -> Subspace:
    """{omega ^ v : omega in Lambda^k(F_p^n)} as a subspace of Lambda^{k+1}.

    Has dimension C(n-1, k) for v != 0; also equals ker(^ v) on Lambda^{k+1}.
    """
    v = np.asarray(v, dtype=np.int64) % p
    if not v.any():
        raise ValueError("flag_subspace requires a nonzero vector")
    M = wedge_by_vector_matrix(p, n, k, v)
    return Subspace.from_generators(M, p, M.shape[1])


# -- the multiplication map S^2(Lambda^2 U*) -> Lambda^4 U* ------------------

@lru_cache(maxsize=None)
def sym2_pairs(d: int) -> tuple[tuple[int, int], ...]:
    """Basis of S^2 of a d-dim space: index pairs (i, j), i <= j, lex order."""
    return tuple((i, j) for i in range(d) for j in range(i, d))


def sym2_product(x: Array, y: Array, p: int) -> Array:
    """Coordinates of x.y in the {e_i e_j : i <= j} basis of S^2."""
    d = x.shape[0]
    out = np.zeros(len(sym2_pairs(d)), dtype=np.int64)
    for t, (i, j) in enumerate(sym2_pairs(d)):
        out[t] = (x[i] * y[j] + x[j] * y[i]) % p if i != j else (x[i] * y[i]) % p
    return out


def mult_map_matrix(n: int, p: int) -> Array:
    """Matrix of S^2(Lambda^2 U*) -> Lambda^4 U*, rows = S^2 basis elements."""
    d2 = comb(n, 2)
    d4 = comb(n, 4) if n >= 4 else 0
    pairs = sym2_pairs(d2)
    M = np.zeros((len(pairs), d4), dtype=np.int64)
    if d4 == 0:
        return M
    S2 = subsets(n, 2)
    idx4 = subset_index(n, 4)
    for t, (i, j) in enumerate(pairs):
        sign, merged = merge_sign(S2[i], S2[j])
        if sign:
            M[t, idx4[merged]] = sign % p
    return M


def square_kernel_generators(n: int, p: int) -> list[Array]:
    """Images of (1/2)(u^v . w^x + u^w . v^x) over all basis 4-tuples.

    These span the kernel of the multiplication map; coordinates are in the
    S^2(Lambda^2) basis of sym2_pairs.
    """
    half = half_mod(p)
    d2 = comb(n, 2)
    idx2 = subset_index(n, 2)

    def wedge2(a: int, b: int) -> Array:
        out = np.zeros(d2, dtype=np.int64)
        if a == b:
            return out
        s = 1 if a < b else -1
        out[idx2[(min(a, b), max(a, b))]] = s % p
        return out

    gens = []
    for u, v, w, x in itertools.product(range(1, n + 1), repeat=4):
        g = (half * (sym2_product(wedge2(u, v), wedge2(w, x), p)
                     + sym2_product(wedge2(u, w), wedge2(v, x), p))) % p
        gens.append(g)
    return gens


def mult_map_s2l2_to_l4(n: int, p: int) -> tuple[Array, list[Array]]:
    """The multiplication-map matrix together with its kernel generators."""
    return mult_map_matrix(n, p), square_kernel_generators(n, p)


def mult_map_kernel(n: int, p: int) -> Subspace:
    """ker(S^2(Lambda^2 U*) -> Lambda^4 U*) computed from the matrix."""
    M = mult_map_matrix(n, p)
    # rows act on the left; kernel of the transposed action
    return kernel(M.T, p)


# -- tensor-space embedding (degree-4 tensors) -------------------------------

def tensor4_of_sym2(vec: Array, n: int, p: int) -> Array:
    """Embed S^2(Lambda^2 U*) into (U*)^(x4), flat index (a,b,c,d) base n.

    e_S . e_T -> (1/2)(w_S x w_T + w_T x w_S) with w_(i,j) = (1/2)(e_i x e_j
    - e_j x e_i); combined with the generator normalization this realizes the
    1/16-scaled square symmetrizer.
    """
    half = half_mod(p)
    T = np.zeros((n,) * 4, dtype=np.int64)
    S2 = subsets(n, 2)

    def w2(S):
        out = np.zeros((n, n), dtype=np.int64)
        a, b = S[0] - 1, S[1] - 1
        out[a, b] = half
        out[b, a] = (-half) % p
        return out

    for t, (i, j) in enumerate(sym2_pairs(comb(n, 2))):
        c = int(vec[t])
        if not c:
            continue
        A, B = w2(S2[i]), w2(S2[j])
        sym = np.einsum('ab,cd->abcd', A, B) + np.einsum('ab,cd->abcd', B, A)
        T = (T + c * half * sym) % p
    return T % p


def square_symmetrizer_tensor(n: int, p: int, u: int, v: int, w: int, x: int) -> Array:
    """Sum over sigma in <(12),(34)> of eps(sigma) sigma (sum over <(14),(23)> of sigma' t).

    t = e_u x e_v x e_w x e_x (1-based indices); returns a flat (n,n,n,n) array.
    """
    plus = [(0, 1, 2, 3), (3, 1, 2, 0), (0, 2, 1, 3), (3, 2, 1, 0)]
    minus_group = [((0, 1, 2, 3), 1), ((1, 0, 2, 3), -1),
                   ((0, 1, 3, 2), -1), ((1, 0, 3, 2), 1)]
    base = (u - 1, v - 1, w - 1, x - 1)
    T = np.zeros((n,) * 4, dtype=np.int64)
    for perm_m, sign in minus_group:
        for perm_p in plus:
            # slot i of the result receives base[perm_p[perm_m[i]]]
            word = tuple(base[perm_p[perm_m[i]]] for i in range(4))
            T[word] = (T[word] + sign) % p
    return T


# -- text rendering ----------------------------------------------------------

def _balanced(c: int, p: int) -> int:
    return c if c <= p // 2 else c - p


def render_multivector(coeffs, n: int, k: int, p: int, symbol: str = "u") -> str:
    """Canonical text form, e.g. 'u[1,2,3] + u[3,4,5] - u[1,5,6]'.

    Coefficients are balanced to (-p/2, p/2]; unit coefficients are omitted.
    Basis terms appear in lex order of their index subsets.
    """
    coeffs = np.asarray(coeffs, dtype=np.int64) % p
    terms = []
    for i, S in enumerate(subsets(n, k)):
        c = _balanced(int(coeffs[i]), p)
        if c == 0:
            continue
        body = f"{symbol}[{','.join(map(str, S))}]"
        mag = abs(c)
        text = body if mag == 1 else f"{mag}{body}"
        terms.append((c < 0, text))
    if not terms:
        return "0"
    out = []
    for i, (neg, text) in enumerate(terms):
        if i == 0:
            out.append(("-" if neg else "") + text)
        else:
            out.append(("- " if neg else "+ ") + text)
    return " ".join(out)

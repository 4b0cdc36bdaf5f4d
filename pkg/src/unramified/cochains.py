"""Explicit inhomogeneous cochains with values in the p-torsion of Q/Z.

A degree-d cochain on an enumerable group G is a dense table G^d -> Z/p,
where the numerator t stands for t/p in (1/p)Z/Z.  All the identities in
scope take values killed by p, so arithmetic is mod p throughout with
1/2 = (p+1)/2 and 1/4 = inverse of 4.  The action is trivial and

    (delta f)(g_1, ..., g_{d+1}) = f(g_2, ..., g_{d+1})
        + sum_{i=1..d} (-1)^i f(..., g_i g_{i+1}, ...)
        + (-1)^{d+1} f(g_1, ..., g_d).

Named cochains (ubar = image of g in U, vpart = g s(ubar(g))^{-1} in V):

    h_rho(g)              = rho(vpart(g))
    f_{rho,lam}(g1,g2,g3) = (1/2) rho(vpart(g1)) lam(ubar(g2) ^ ubar(g3))
    tau23[u,v,w,x]        = u(ubar g1) v(ubar g2) w(ubar g2) x(ubar g3)
    tau13[u,v,w,x]        = u(g1)v(g2)w(g2)x(g3) + u(g1)w(g1)v(g2)x(g3)
                            + w(g1)v(g2)u(g2)x(g3)
    mu[u,v,w,x]           = u(ubar g1) v(ubar g2) w(ubar g3) x(ubar g4)

The middle term of tau13 carries a plus sign: that is the unique
(1,3)-symmetric multilinear choice whose coboundary satisfies
delta tau13[t] = mu[t + (13)t], the defining square identity (the
analogous delta tau23[t] = mu[t + (23)t] holds as printed).  With a minus
sign the square fails and the lifting is not even a cocycle shift; see
tests/test_cochains.py for the machine check.

Identity suite:

    dh:          delta h_rho = -(1/2) (rho o gamma)(ubar ^ ubar)
    df:          delta f_{rho,lam} = -(1/4) (rho o gamma)(g1^g2) lam(g3^g4)
    tau_squares: the two square identities above, all basis 4-tuples
    tau_agree:   tau13 - tau23 on the generators u x u x u x v of the
                 triply-symmetric part is a coboundary.  This is decided by
                 an exact linear solve against im(delta: C^2 -> C^3).  It
                 holds for p >= 5 (witness k(a) = -a^3/6) and FAILS for
                 p = 3, where the difference (1/2)(a b^2 + a^2 b) v(g3),
                 a = u(g1), b = u(g2), represents the nonzero class
                 beta(u) cup v in H^3(U, Z/p) (and stays nonzero with
                 Z/p^k values for any k: 6 is not invertible).
    ssquare_kernel: the degree-4 tensor generators span the kernel of
                 S^2(Lambda^2 U*) -> Lambda^4 U*.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from .errors import DimensionMismatchError, GuardExceededError
from .exterior import mult_map_kernel, square_kernel_generators
from .groups import GroupSpec, GroupTables, antisym_matrix, build_tables
from .linalg import Subspace, half_mod, inv_mod
from .results import VerificationResult

Array = np.ndarray

DEFAULT_GUARD_BYTES = 1 << 29


@lru_cache(maxsize=32)
def tables_for(spec: GroupSpec) -> GroupTables:
    return build_tables(spec)


@lru_cache(maxsize=32)
def u_projection(spec: GroupSpec) -> GroupSpec:
    """The abelianized carrier U as an m = 0 spec (one code path for taus)."""
    if spec.m == 0:
        return spec
    return GroupSpec(spec.p, spec.n, 0,
                     np.zeros((0, comb(spec.n, 2)), dtype=np.int64),
                     name=(spec.name or "spec") + "-U")


def _check_guard(cells: int, guard_bytes: int, what: str,
                 itemsize: int = 2) -> None:
    need = cells * itemsize
    if need > guard_bytes:
        raise GuardExceededError(
            f"{what} needs {need} bytes > guard {guard_bytes}", required=need)


@dataclass(frozen=True)
class Cochain:
    """Dense table G^degree -> (1/p)Z/Z, the value stored as a numerator."""

    spec: GroupSpec
    degree: int
    values: Array = field(compare=False)  # shape (N,) * degree

    def __post_init__(self):
        N = self.spec.order
        v = (np.asarray(self.values) % self.spec.p).astype(np.int16)
        if v.shape != (N,) * self.degree:
            raise DimensionMismatchError(
                f"table shape {v.shape} for degree {self.degree}, |G| = {N}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Cochain) and self.spec == other.spec
                and self.degree == other.degree
                and bool(np.array_equal(self.values, other.values)))

    def __hash__(self) -> int:
        return hash((self.spec, self.degree, self.values.tobytes()))

    def __add__(self, other: "Cochain") -> "Cochain":
        return Cochain(self.spec, self.degree,
                       (self.values + other.values) % self.spec.p)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return Cochain(self.spec, self.degree,
                       (self.values - other.values) % self.spec.p)

    def scale(self, c: int) -> "Cochain":
        return Cochain(self.spec, self.degree, (c * self.values) % self.spec.p)

    def is_zero(self) -> bool:
        return not self.values.any()

    def __call__(self, *gs: int) -> int:
        return int(self.values[tuple(gs)])


def coboundary(f: Cochain, guard_bytes: int = DEFAULT_GUARD_BYTES) -> Cochain:
    """The standard inhomogeneous coboundary with trivial action."""
    spec = f.spec
    N = spec.order
    d = f.degree
    _check_guard(N ** (d + 1), guard_bytes, f"degree-{d + 1} table")
    if d == 0:
        return Cochain(spec, 1, np.zeros(N, dtype=np.int64))
    mul = tables_for(spec).mul
    F = f.values
    out = np.broadcast_to(F[None, ...], (N,) * (d + 1)).astype(np.int16).copy()
    for i in range(1, d + 1):
        t = np.take(F, mul, axis=i - 1)
        out += t if i % 2 == 0 else -t
    if (d + 1) % 2 == 0:
        out += F[..., None]
    else:
        out -= F[..., None]
    return Cochain(spec, d + 1, out % spec.p)


# -- named cochains -----------------------------------------------------------

def h_rho(spec: GroupSpec, rho) -> Cochain:
    """h(g) = rho(vpart(g)); equals rho(g s(ubar g)^{-1}) for s(u) = (u, 0)."""
    t = tables_for(spec)
    return Cochain(spec, 1, t.v_eval(rho))


def f_rho_lambda(spec: GroupSpec, rho, lam) -> Cochain:
    """f(g1,g2,g3) = (1/2) rho(vpart g1) lam(ubar g2 ^ ubar g3)."""
    t = tables_for(spec)
    rv = t.v_eval(rho)
    L = t.biform(antisym_matrix(spec.p, spec.n, lam))
    vals = (half_mod(spec.p)
            * np.einsum('a,bc->abc', rv, L)) % spec.p
    return Cochain(spec, 3, vals)


def _u_char(t: GroupTables, c) -> Array:
    return t.u_eval(c)


def tau23(spec: GroupSpec, u, v, w, x) -> Cochain:
    t = tables_for(spec)
    p = spec.p
    U, V, W, X = (_u_char(t, c) for c in (u, v, w, x))
    vals = np.einsum('a,b,c->abc', U, (V * W) % p, X) % p
    return Cochain(spec, 3, vals)


def tau13(spec: GroupSpec, u, v, w, x) -> Cochain:
    t = tables_for(spec)
    p = spec.p
    U, V, W, X = (_u_char(t, c) for c in (u, v, w, x))
    vals = (np.einsum('a,b,c->abc', U, (V * W) % p, X)
            + np.einsum('a,b,c->abc', (U * W) % p, V, X)
            + np.einsum('a,b,c->abc', W, (V * U) % p, X)) % p
    return Cochain(spec, 3, vals)


def mu(spec: GroupSpec, u, v, w, x,
       guard_bytes: int = DEFAULT_GUARD_BYTES) -> Cochain:
    t = tables_for(spec)
    N = spec.order
    _check_guard(N ** 4, guard_bytes, "degree-4 table")
    U, V, W, X = (_u_char(t, c) for c in (u, v, w, x))
    vals = np.einsum('a,b,c,d->abcd', U, V, W, X) % spec.p
    return Cochain(spec, 4, vals)


def build_named(spec: GroupSpec, kind: str, **params) -> Cochain:
    """Dispatcher over {h_rho, f_rho_lambda, tau23, tau13, mu}."""
    if kind == "h_rho":
        return h_rho(spec, params["rho"])
    if kind == "f_rho_lambda":
        return f_rho_lambda(spec, params["rho"], params["lam"])
    if kind in ("tau23", "tau13", "mu"):
        args = (params["u"], params["v"], params["w"], params["x"])
        fn = {"tau23": tau23, "tau13": tau13, "mu": mu}[kind]
        return fn(u_projection(spec), *args)
    raise ValueError(f"unknown cochain kind {kind!r}")


# -- verification -------------------------------------------------------------

def render_element(t: GroupTables, g: int) -> str:
    u = ",".join(str(int(x)) for x in t.udigits[g])
    v = ",".join(str(int(x)) for x in t.vdigits[g])
    return f"(u=({u});v=({v}))"


def _first_mismatch(diff: Array) -> tuple[int, ...]:
    flat = int(np.flatnonzero(diff)[0])
    return tuple(int(i) for i in np.unravel_index(flat, diff.shape))


def verify_dh(spec: GroupSpec) -> VerificationResult:
    """delta h_rho(g1,g2) = -(1/2)(rho o gamma)(ubar g1 ^ ubar g2), all rho."""
    if spec.m == 0:
        return VerificationResult("dh", True, 0, note="skipped: requires m >= 1",
                                  skipped=True)
    t = tables_for(spec)
    p = spec.p
    half = half_mod(p)
    checked = 0
    for rindex in range(spec.m):
        rho = np.eye(spec.m, dtype=np.int64)[rindex]
        dh = coboundary(h_rho(spec, rho)).values
        form = antisym_matrix(p, spec.n, (rho @ spec.gamma) % p)
        rhs = (-half * t.biform(form)) % p
        checked += dh.size
        if not np.array_equal(dh, rhs):
            g1, g2 = _first_mismatch((dh - rhs) % p)
            return VerificationResult(
                "dh", False, checked,
                counterexample=f"rho=e{rindex + 1}*, "
                               f"({render_element(t, g1)}, {render_element(t, g2)})")
    return VerificationResult("dh", True, checked)


def verify_df(spec: GroupSpec,
              guard_bytes: int = DEFAULT_GUARD_BYTES) -> VerificationResult:
    """delta f = -(1/4) (rho o gamma)(g1^g2) lam(g3^g4) over all 4-tuples.

    Evaluated slice-by-slice in g1 so only |G|^3 tables are resident.
    """
    if spec.m == 0:
        return VerificationResult("df", True, 0, note="skipped: requires m >= 1",
                                  skipped=True)
    t = tables_for(spec)
    p = spec.p
    N = spec.order
    _check_guard(5 * N ** 3, guard_bytes, "df slice tables")
    inv4 = inv_mod(4, p)
    mul = t.mul
    checked = 0
    d2 = comb(spec.n, 2)
    for rindex in range(spec.m):
        rho = np.eye(spec.m, dtype=np.int64)[rindex]
        G = t.biform(antisym_matrix(p, spec.n, (rho @ spec.gamma) % p))
        for lindex in range(d2):
            lam = np.eye(d2, dtype=np.int64)[lindex]
            L = t.biform(antisym_matrix(p, spec.n, lam))
            F = f_rho_lambda(spec, rho, lam).values.astype(np.int64)
            for g1 in range(N):
                s = (F
                     - np.take(F, mul[g1], axis=0)
                     + np.take(F[g1], mul, axis=0)
                     - np.take(F[g1], mul, axis=1)
                     + F[g1][:, :, None]) % p
                rhs = (-inv4 * G[g1][:, None, None] * L[None, :, :]) % p
                checked += s.size
                if not np.array_equal(s, rhs):
                    g2, g3, g4 = _first_mismatch((s - rhs) % p)
                    gs = ", ".join(render_element(t, g)
                                   for g in (g1, g2, g3, g4))
                    return VerificationResult(
                        "df", False, checked,
                        counterexample=f"rho=e{rindex + 1}*, "
                                       f"lam=basis{lindex}, ({gs})")
    return VerificationResult("df", True, checked)


def verify_tau_squares(spec: GroupSpec,
                       guard_bytes: int = DEFAULT_GUARD_BYTES) -> VerificationResult:
    """delta tau23[t] = mu[t + (23)t] and delta tau13[t] = mu[t + (13)t]."""
    import itertools

    us = u_projection(spec)
    n, p = us.n, us.p
    t = tables_for(us)
    basis = [tuple(np.eye(n, dtype=np.int64)[i]) for i in range(n)]
    checked = 0
    for a, b, c, d in itertools.product(basis, repeat=4):
        d23 = coboundary(tau23(us, a, b, c, d), guard_bytes).values
        rhs23 = (mu(us, a, b, c, d, guard_bytes).values
                 + mu(us, a, c, b, d, guard_bytes).values) % p
        checked += d23.size
        if not np.array_equal(d23, rhs23):
            gs = ", ".join(render_element(t, g)
                           for g in _first_mismatch((d23 - rhs23) % p))
            return VerificationResult(
                "tau_squares", False, checked,
                counterexample=f"tau23 square at (u,v,w,x)={(a, b, c, d)}, ({gs})")
        d13 = coboundary(tau13(us, a, b, c, d), guard_bytes).values
        rhs13 = (mu(us, a, b, c, d, guard_bytes).values
                 + mu(us, c, b, a, d, guard_bytes).values) % p
        checked += d13.size
        if not np.array_equal(d13, rhs13):
            gs = ", ".join(render_element(t, g)
                           for g in _first_mismatch((d13 - rhs13) % p))
            return VerificationResult(
                "tau_squares", False, checked,
                counterexample=f"tau13 square at (u,v,w,x)={(a, b, c, d)}, ({gs})")
    return VerificationResult("tau_squares", True, checked)


@lru_cache(maxsize=8)
def _coboundary_image(spec: GroupSpec) -> Subspace:
    """im(delta: C^2(U) -> C^3(U)) as a canonical subspace of F_p^(N^3)."""
    N = spec.order
    p = spec.p
    _check_guard(N ** 2 * N ** 3, DEFAULT_GUARD_BYTES, "coboundary image")
    cols = []
    for a in range(N):
        for b in range(N):
            E = np.zeros((N, N), dtype=np.int64)
            E[a, b] = 1
            cols.append(coboundary(Cochain(spec, 2, E)).values.reshape(-1))
    return Subspace.from_generators(cols, p, N ** 3)


def _u_lines(p: int, n: int):
    import itertools
    for lead in range(n):
        for rest in itertools.product(range(p), repeat=n - lead - 1):
            v = np.zeros(n, dtype=np.int64)
            v[lead] = 1
            v[lead + 1:] = rest
            yield v


def verify_tau_agree(spec: GroupSpec) -> VerificationResult:
    """tau13 - tau23 on the generators u x u x u x v must be a coboundary.

    True for p >= 5, false for p = 3 (see module docstring); the verifier
    reports whatever the exact linear algebra says.
    """
    us = u_projection(spec)
    p, n = us.p, us.n
    half = half_mod(p)
    image = _coboundary_image(us)
    checked = 0
    basis = [np.eye(n, dtype=np.int64)[i] for i in range(n)]
    for u in _u_lines(p, n):
        for v in basis:
            diff = (half * (tau13(us, u, u, u, v).values.astype(np.int64)
                            - tau23(us, u, u, u, v).values)) % p
            checked += 1
            if not image.contains(diff.reshape(-1)):
                uu = ",".join(map(str, u))
                vv = ",".join(map(str, v))
                return VerificationResult(
                    "tau_agree", False, checked,
                    counterexample=f"u=({uu}), v=({vv}): "
                                   "difference class is nonzero in H^3")
    return VerificationResult("tau_agree", True, checked)


def verify_ssquare_kernel(spec: GroupSpec) -> VerificationResult:
    """Generator span equals ker(S^2(Lambda^2 U*) -> Lambda^4 U*)."""
    n, p = spec.n, spec.p
    ker = mult_map_kernel(n, p)
    gens = square_kernel_generators(n, p)
    span = Subspace.from_generators(gens, p, ker.ambient)
    ok = span == ker
    return VerificationResult(
        "ssquare_kernel", ok, len(gens),
        counterexample=None if ok else
        f"span dim {span.dim} != kernel dim {ker.dim}")


IDENTITIES = ("dh", "df", "tau_squares", "tau_agree", "ssquare_kernel")


def verify_identity(spec: GroupSpec, which: str,
                    guard_bytes: int = DEFAULT_GUARD_BYTES) -> VerificationResult:
    if which == "dh":
        return verify_dh(spec)
    if which == "df":
        return verify_df(spec, guard_bytes)
    if which == "tau_squares":
        return verify_tau_squares(spec, guard_bytes)
    if which == "tau_agree":
        return verify_tau_agree(spec)
    if which == "ssquare_kernel":
        return verify_ssquare_kernel(spec)
    raise ValueError(f"unknown identity {which!r}")

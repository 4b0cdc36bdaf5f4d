"""The obstruction pipeline.

For a spec with form gamma: Lambda^2 U -> V the chain is, per degree
i in {2, 3}:

    K^2 = image of gamma* : V* -> Lambda^2 U*      (row space of gamma)
    K^3 = K^2 ^ U*                                 (inside Lambda^3 U*)
    S^i = (K^i)^perp                               (inside Lambda^i U)
    S^i_dec = span of the elements of S^i of the form omega ^ v, v in U
    K^i_max = (S^i_dec)^perp                       (back inside Lambda^i U*)

    b0_dim = dim K^2_max - dim K^2     (trivial iff the unramified Brauer
                                        group of the invariant field is 0)
    h3_dim = dim K^3_max - dim K^3     (a lower bound for the degree-3
                                        unramified cohomology)

All complements use the identity pairing of the dual wedge bases.  The
decomposable accumulation iterates over projective lines [v] only: for a
fixed v the elements of S with factor v form the linear space
S  intersect  ker(^ v), and every partially decomposable element has some
factor line, so the union of those intersections spans S_dec.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import GuardExceededError, SpecError
from .exterior import (
    ExtVector,
    render_multivector,
    wedge,
    wedge_by_vector_matrix,
)
from .groups import GroupSpec, ValidationReport, spec_from_json_dict, \
    spec_to_json_dict, validate_spec
from .linalg import Subspace, kernel_basis

Array = np.ndarray

DEFAULT_BRUTE_WORK = 10 ** 7


def projective_lines(p: int, n: int):
    """Canonical line representatives: first nonzero coordinate equals 1."""
    for lead in range(n):
        tail = n - lead - 1
        for rest in itertools.product(range(p), repeat=tail):
            v = np.zeros(n, dtype=np.int64)
            v[lead] = 1
            v[lead + 1:] = rest
            yield v


def compute_k2(spec: GroupSpec) -> Subspace:
    """Image of gamma*: row space of gamma, read in Lambda^2 U* coordinates."""
    return Subspace.from_generators(spec.gamma, spec.p, comb(spec.n, 2))


def compute_k3(spec: GroupSpec, k2: Subspace) -> Subspace:
    """K^2 ^ U* = span{kappa ^ e_j* : kappa in basis(K^2), 1 <= j <= n}."""
    p, n = spec.p, spec.n
    ambient = comb(n, 3)
    gens = []
    for row in k2.basis:
        kappa = ExtVector(p, n, 2, row)
        for j in range(1, n + 1):
            ej = ExtVector.basis_element(p, n, 1, (j,))
            gens.append(wedge(kappa, ej).coeffs)
    return Subspace.from_generators(gens, p, ambient)


def dec_subgroup(S: Subspace, k: int, n: int) -> Subspace:
    """Span of the partially decomposable elements of S (degree-k side).

    Per line [v]: {x in S : x ^ v = 0} = S intersect {omega ^ v}, using the
    contraction homotopy identity im(^v) = ker(^v).  Early exit once the
    accumulated span reaches S itself.
    """
    if k not in (2, 3):
        raise ValueError("dec_subgroup is defined for degrees 2 and 3")
    p = S.p
    if S.ambient != comb(n, k):
        raise SpecError(f"subspace ambient {S.ambient} != C({n},{k})")
    if S.dim == 0 or n == 0:
        return Subspace.zero(p, S.ambient)
    acc = Subspace.zero(p, S.ambient)
    for v in projective_lines(p, n):
        W = wedge_by_vector_matrix(p, n, k, v)  # Lambda^k -> Lambda^{k+1}
        constraint = (S.basis @ W) % p          # rows: images of S basis
        coeffs = kernel_basis(constraint.T, p) if constraint.shape[1] else \
            np.eye(S.dim, dtype=np.int64)
        if coeffs.shape[0] == 0:
            continue
        hits = (coeffs @ S.basis) % p
        acc = acc + Subspace.from_generators(hits, p, S.ambient)
        if acc.dim == S.dim:
            return S
    return acc


def dec_subgroup_bruteforce(S: Subspace, k: int, n: int,
                            max_work: int = DEFAULT_BRUTE_WORK) -> Subspace:
    """Independent oracle: enumerate each flag space and test membership.

    Work is lines * p^C(n-1, k-1) membership tests; guarded by max_work.
    """
    if k not in (2, 3):
        raise ValueError("dec_subgroup_bruteforce is defined for degrees 2 and 3")
    p = S.p
    if S.ambient != comb(n, k):
        raise SpecError(f"subspace ambient {S.ambient} != C({n},{k})")
    if S.dim == 0 or n == 0:
        return Subspace.zero(p, S.ambient)
    n_lines = (p ** n - 1) // (p - 1)
    flag_dim = comb(n - 1, k - 1)
    work = n_lines * p ** flag_dim
    if work > max_work:
        raise GuardExceededError(
            f"brute-force work {work} exceeds bound {max_work}", required=work)
    # membership in S via its rref structure, vectorized over candidates
    pivots = [int(np.nonzero(row)[0][0]) for row in S.basis]
    coeff_grid = np.array(
        list(itertools.product(range(p), repeat=flag_dim)), dtype=np.int64) \
        if flag_dim else np.zeros((1, 0), dtype=np.int64)
    acc = Subspace.zero(p, S.ambient)
    for v in projective_lines(p, n):
        W = wedge_by_vector_matrix(p, n, k - 1, v)
        basis = Subspace.from_generators(W, p, S.ambient).basis
        if basis.shape[0] == 0:
            continue
        cands = (coeff_grid[:, :basis.shape[0]] @ basis) % p \
            if basis.shape[0] <= flag_dim else None
        if cands is None:
            raise AssertionError("flag space larger than C(n-1, k-1)")
        if S.dim:
            recon = (cands[:, pivots] @ S.basis) % p
            mask = np.all(recon == cands, axis=1)
        else:
            mask = ~cands.any(axis=1)
        hits = cands[mask]
        if hits.size:
            acc = acc + Subspace.from_generators(hits, p, S.ambient)
    return acc


@dataclass(frozen=True)
class DegreeReport:
    """Dims and bases for one degree i in {2, 3}."""

    i: int
    ki: Subspace        # K^i in Lambda^i U*
    si: Subspace        # S^i = (K^i)^perp in Lambda^i U
    si_dec: Subspace    # decomposable part of S^i
    ki_max: Subspace    # (S^i_dec)^perp

    @property
    def obstruction_dim(self) -> int:
        return self.ki_max.dim - self.ki.dim


@dataclass(frozen=True)
class ObstructionReport:
    spec: GroupSpec
    validation: ValidationReport
    deg2: DegreeReport
    deg3: DegreeReport

    @property
    def b0_dim(self) -> int:
        return self.deg2.obstruction_dim

    @property
    def h3_dim(self) -> int:
        return self.deg3.obstruction_dim

    @property
    def brauer_trivial(self) -> bool:
        return self.b0_dim == 0

    @property
    def degree3_obstruction_nonzero(self) -> bool:
        return self.h3_dim > 0

    @property
    def hypotheses_ok(self) -> bool:
        return self.validation.hypotheses_ok

    def verdict_line(self) -> str:
        parts = [
            "unramified Brauer group trivial" if self.brauer_trivial
            else f"unramified Brauer group of dimension {self.b0_dim}",
            "degree-3 unramified obstruction nonzero" if self.h3_dim
            else "degree-3 unramified obstruction zero (this test)",
        ]
        if self.brauer_trivial and self.degree3_obstruction_nonzero:
            parts.append("invariant field NOT rational")
        elif not self.brauer_trivial:
            parts.append("invariant field NOT rational")
        line = "; ".join(parts)
        if not self.hypotheses_ok:
            line += " [hypotheses violated: computed anyway]"
        return line


def analyze(spec: GroupSpec, strict: bool = True) -> ObstructionReport:
    """Run the full degree-2 and degree-3 pipeline."""
    validation = validate_spec(spec, strict=strict)
    p, n = spec.p, spec.n

    k2 = compute_k2(spec)
    s2 = k2.orthogonal()
    s2_dec = dec_subgroup(s2, 2, n)
    k2_max = k2 if s2_dec == s2 else s2_dec.orthogonal()
    deg2 = DegreeReport(2, k2, s2, s2_dec, k2_max)

    k3 = compute_k3(spec, k2)
    s3 = k3.orthogonal()
    s3_dec = dec_subgroup(s3, 3, n)
    k3_max = k3 if s3_dec == s3 else s3_dec.orthogonal()
    deg3 = DegreeReport(3, k3, s3, s3_dec, k3_max)

    for deg in (deg2, deg3):
        if not deg.ki_max.contains_subspace(deg.ki):
            raise AssertionError(f"K^{deg.i} not inside K^{deg.i}_max")
        if not deg.si.contains_subspace(deg.si_dec):
            raise AssertionError(f"S^{deg.i}_dec not inside S^{deg.i}")
    return ObstructionReport(spec, validation, deg2, deg3)


# -- serialization -----------------------------------------------------------

def _subspace_json(S: Subspace, n: int, k: int, symbol: str) -> dict:
    return {
        "dim": S.dim,
        "basis": [[int(x) for x in row] for row in S.basis],
        "text": [render_multivector(row, n, k, S.p, symbol=symbol)
                 for row in S.basis],
    }


def _degree_json(d: DegreeReport, n: int) -> dict:
    i = d.i
    return {
        f"k{i}": _subspace_json(d.ki, n, i, "u*"),
        f"s{i}": _subspace_json(d.si, n, i, "u"),
        f"s{i}_dec": _subspace_json(d.si_dec, n, i, "u"),
        f"k{i}_max": _subspace_json(d.ki_max, n, i, "u*"),
    }


def report_to_json_dict(rep: ObstructionReport, seed: int | None = None) -> dict:
    spec = rep.spec
    out = {
        "spec": spec_to_json_dict(spec),
        "name": spec.name,
        "hypotheses_ok": rep.hypotheses_ok,
        "gamma_rank": rep.validation.gamma_rank,
        "radical_dim": rep.validation.radical_dim,
        "b0_dim": rep.b0_dim,
        "h3_dim": rep.h3_dim,
        "brauer_trivial": rep.brauer_trivial,
        "degree3_obstruction_nonzero": rep.degree3_obstruction_nonzero,
        "verdict": rep.verdict_line(),
    }
    out.update(_degree_json(rep.deg2, spec.n))
    out.update(_degree_json(rep.deg3, spec.n))
    if seed is not None:
        out["seed"] = seed
    return out


def report_from_json_dict(data: dict) -> ObstructionReport:
    """Rebuild a report from its JSON form (round-trip support)."""
    spec = spec_from_json_dict(data["spec"], name=data.get("name"))
    p, n = spec.p, spec.n

    def sub(name: str, k: int) -> Subspace:
        return Subspace.from_generators(
            np.array(data[name]["basis"], dtype=np.int64).reshape(-1, comb(n, k)),
            p, comb(n, k))

    validation = ValidationReport(p, n, spec.m, data["gamma_rank"],
                                  data["radical_dim"])
    deg2 = DegreeReport(2, sub("k2", 2), sub("s2", 2),
                        sub("s2_dec", 2), sub("k2_max", 2))
    deg3 = DegreeReport(3, sub("k3", 3), sub("s3", 3),
                        sub("s3_dec", 3), sub("k3_max", 3))
    return ObstructionReport(spec, validation, deg2, deg3)


def report_text(rep: ObstructionReport) -> str:
    spec = rep.spec
    n = spec.n
    lines = [
        f"group: {spec.name or 'custom'}  p={spec.p}  dim U={spec.n}  "
        f"dim V={spec.m}  |G|=p^{spec.n + spec.m}",
        f"gamma rank {rep.validation.gamma_rank}, radical dim "
        f"{rep.validation.radical_dim}"
        + ("" if rep.hypotheses_ok else "  [hypotheses violated]"),
    ]
    for d in (rep.deg2, rep.deg3):
        i = d.i
        lines.append(f"-- degree {i} --")
        lines.append(f"dim K^{i} = {d.ki.dim}; dim S^{i} = {d.si.dim}; "
                     f"dim S^{i}_dec = {d.si_dec.dim}; "
                     f"dim K^{i}_max = {d.ki_max.dim}")
        for row in d.si.basis:
            lines.append(f"  S^{i} basis: "
                         + render_multivector(row, n, i, spec.p))
        for row in d.si_dec.basis:
            lines.append(f"  S^{i}_dec basis: "
                         + render_multivector(row, n, i, spec.p))
    lines.append(f"b0_dim = {rep.b0_dim}; h3_dim = {rep.h3_dim}")
    lines.append("verdict: " + rep.verdict_line())
    return "\n".join(lines)

"""The obstruction pipeline against hand-checkable and enumerated truth."""

import itertools
from math import comb

import numpy as np
import pytest

from unramified.catalog import builtin
from unramified.exterior import ExtVector, duality_pairing, subset_index
from unramified.groups import GroupSpec, permute_basis, random_strict_spec
from unramified.linalg import Subspace
from unramified.obstruction import (
    analyze,
    compute_k2,
    compute_k3,
    dec_subgroup,
    dec_subgroup_bruteforce,
    projective_lines,
    report_from_json_dict,
    report_to_json_dict,
)


def dual_bivector(p, n, *terms):
    """Sum of signed dual-basis bivectors, e.g. (1,2,+1), (4,5,-1)."""
    out = np.zeros(comb(n, 2), dtype=np.int64)
    idx = subset_index(n, 2)
    for i, j, c in terms:
        out[idx[(i, j)]] = c % p
    return out


def trivector(p, n, *subsets_):
    out = np.zeros(comb(n, 3), dtype=np.int64)
    idx = subset_index(n, 3)
    for s in subsets_:
        out[idx[s]] = (out[idx[s]] + 1) % p
    return out


# -- K^2 ----------------------------------------------------------------------

def test_k2_peyre6_matches_listed_generators():
    spec = builtin("peyre6")
    k2 = compute_k2(spec)
    assert k2.dim == 6
    expected = Subspace.from_generators([
        dual_bivector(3, 6, (1, 2, 1), (4, 5, -1)),
        dual_bivector(3, 6, (2, 3, 1), (5, 6, -1)),
        dual_bivector(3, 6, (1, 4, 1)),
        dual_bivector(3, 6, (2, 5, 1)),
        dual_bivector(3, 6, (3, 6, 1)),
        dual_bivector(3, 6, (4, 6, 1)),
    ], 3, comb(6, 2))
    assert k2 == expected


def test_k2_heisenberg_is_everything():
    k2 = compute_k2(builtin("heisenberg3"))
    assert k2.dim == 1 and k2.ambient == 1


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_k2_functional_consistency_seed(seed):
    # every element rho* of K^2 satisfies <rho*, x> = rho(gamma(x))
    p, n, m = 3, 3, 2
    rng = np.random.default_rng(seed)
    while True:
        gamma = rng.integers(0, p, size=(m, comb(n, 2)))
        spec = GroupSpec(p, n, m, gamma)
        from unramified.linalg import rank_mod
        if rank_mod(gamma, p) == m:
            break
    k2 = compute_k2(spec)
    assert k2.dim == m
    for rho in np.eye(m, dtype=np.int64):
        dual = ExtVector(p, n, 2, (rho @ spec.gamma) % p)
        for _ in range(100):
            x = ExtVector(p, n, 2, rng.integers(0, p, size=comb(n, 2)))
            lhs = duality_pairing(dual, x)
            rhs = int((rho @ ((spec.gamma @ x.coeffs) % p)) % p)
            assert lhs == rhs


# -- K^3 ----------------------------------------------------------------------

def test_k3_heisenberg_is_zero_space_of_zero_ambient():
    spec = builtin("heisenberg3")
    k3 = compute_k3(spec, compute_k2(spec))
    assert k3.ambient == 0 and k3.dim == 0


def test_k3_peyre6_dimension_and_perp():
    spec = builtin("peyre6")
    k3 = compute_k3(spec, compute_k2(spec))
    assert k3.dim == 18
    s3 = k3.orthogonal()
    expected = Subspace.from_generators([
        trivector(3, 6, (1, 2, 3), (3, 4, 5), (1, 5, 6)),
        trivector(3, 6, (1, 3, 5)),
    ], 3, comb(6, 3))
    assert s3 == expected


@pytest.mark.parametrize("seed", [0, 1])
def test_s3_matches_exhaustive_orthogonal_enumeration_seed(seed):
    # oracle: S^3 recomputed by enumerating all of Lambda^3(F_3^4)
    p, n = 3, 4
    rng = np.random.default_rng(seed)
    spec = GroupSpec(p, n, 2, rng.integers(0, p, size=(2, comb(n, 2))))
    k3 = compute_k3(spec, compute_k2(spec))
    s3 = k3.orthogonal()
    hits = []
    for x in itertools.product(range(p), repeat=comb(n, 3)):
        xv = np.array(x, dtype=np.int64)
        if all(int((row @ xv) % p) == 0 for row in k3.basis):
            hits.append(xv)
    assert s3 == Subspace.from_generators(hits, p, comb(n, 3))


# -- decomposable subgroups ----------------------------------------------------

def test_dec_full_bivector_space_is_fixed():
    p, n = 3, 4
    S = Subspace.full(p, comb(n, 2))
    assert dec_subgroup(S, 2, n) == S


def test_dec_single_decomposable_trivector_is_fixed():
    p, n = 3, 5
    S = Subspace.from_generators([trivector(p, n, (1, 2, 3))], p, comb(n, 3))
    assert dec_subgroup(S, 3, n) == S


def test_dec_zero_space():
    S = Subspace.zero(3, comb(4, 3))
    assert dec_subgroup(S, 3, 4).dim == 0
    assert dec_subgroup_bruteforce(S, 3, 4).dim == 0


def test_dec_peyre6_degree3_is_u135():
    rep = analyze(builtin("peyre6"))
    assert rep.deg3.si_dec == Subspace.from_generators(
        [trivector(3, 6, (1, 3, 5))], 3, comb(6, 3))


@pytest.mark.parametrize("seed,p,n,k", [
    (0, 3, 4, 2), (1, 3, 4, 2), (2, 3, 4, 3), (3, 3, 4, 3),
    (4, 5, 3, 2), (5, 5, 4, 3), (6, 3, 5, 3),
])
def test_dec_fast_equals_bruteforce_seed(seed, p, n, k):
    rng = np.random.default_rng(seed)
    amb = comb(n, k)
    S = Subspace.from_generators(rng.integers(0, p, size=(3, amb)), p, amb)
    fast = dec_subgroup(S, k, n)
    brute = dec_subgroup_bruteforce(S, k, n)
    assert fast == brute
    assert S.contains_subspace(fast)


def test_projective_line_count():
    assert len(list(projective_lines(3, 6))) == (3 ** 6 - 1) // 2
    assert len(list(projective_lines(5, 3))) == (5 ** 3 - 1) // 4


# -- analyze ------------------------------------------------------------------

def test_analyze_peyre6_headline_numbers():
    rep = analyze(builtin("peyre6"))
    assert rep.deg2.ki.dim == 6
    assert rep.deg2.si.dim == 9
    assert rep.deg2.ki_max == rep.deg2.ki
    assert rep.b0_dim == 0
    assert rep.deg3.ki.dim == 18
    assert rep.deg3.ki_max.dim == 19
    assert rep.h3_dim == 1
    assert rep.brauer_trivial and rep.degree3_obstruction_nonzero
    assert rep.verdict_line() == ("unramified Brauer group trivial; "
                                  "degree-3 unramified obstruction nonzero; "
                                  "invariant field NOT rational")


def test_analyze_heisenberg_trivial():
    rep = analyze(builtin("heisenberg3"))
    assert rep.b0_dim == 0 and rep.h3_dim == 0
    assert rep.deg2.si.dim == 0
    assert rep.deg3.ki.ambient == 0


@pytest.mark.parametrize("seed", list(range(10)))
def test_low_dimension_collapse_sample_seed(seed):
    # every trivector in dim <= 5 has a vector factor, so h3 = 0
    p = 3 if seed % 2 else 5
    rng = np.random.default_rng(seed)
    spec = random_strict_spec(rng, p, n_max=5)
    rep = analyze(spec)
    assert rep.h3_dim == 0


def test_chain_inclusions_and_perp_consistency():
    for name in ("peyre6", "heisenberg3", "heisenberg5"):
        rep = analyze(builtin(name))
        for deg in (rep.deg2, rep.deg3):
            assert deg.ki_max.contains_subspace(deg.ki)
            assert deg.si.contains_subspace(deg.si_dec)
            assert deg.ki.orthogonal() == deg.si
            assert deg.si.orthogonal() == deg.ki
            assert deg.ki.dim + deg.si.dim == deg.ki.ambient


def test_b0_zero_for_tiny_n():
    # n <= 2: Lambda^2 is at most a line, S^2 has no room for
    # non-decomposable elements
    for name in ("heisenberg3", "heisenberg5"):
        assert analyze(builtin(name)).b0_dim == 0


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_obstruction_dims_are_basis_permutation_invariant_seed(seed):
    rng = np.random.default_rng(seed)
    spec = builtin("peyre6")
    rep = analyze(spec)
    perm = rng.permutation(6)
    rep2 = analyze(permute_basis(spec, perm))
    assert (rep.b0_dim, rep.h3_dim) == (rep2.b0_dim, rep2.h3_dim)
    small = random_strict_spec(rng, 3, n_max=4)
    rep3 = analyze(small)
    rep4 = analyze(permute_basis(small, rng.permutation(small.n)))
    assert (rep3.b0_dim, rep3.h3_dim) == (rep4.b0_dim, rep4.h3_dim)


def test_nonstrict_analysis_is_stamped():
    rep = analyze(builtin("elem9"), strict=False)
    assert not rep.hypotheses_ok
    assert "hypotheses violated" in rep.verdict_line()
    assert rep.b0_dim == 0 and rep.h3_dim == 0


def test_report_json_round_trip():
    rep = analyze(builtin("peyre6"))
    data = report_to_json_dict(rep, seed=0)
    back = report_from_json_dict(data)
    assert back == rep
    assert report_to_json_dict(back, seed=0) == data


def test_analyze_tiny_carriers():
    # n = 1: no bivectors at all; everything degenerates to zero spaces
    rep = analyze(builtin("elem3"), strict=False)
    assert rep.deg2.ki.ambient == 0 and rep.b0_dim == 0 and rep.h3_dim == 0
    # n = 0: the trivial group
    trivial = GroupSpec(3, 0, 0, np.zeros((0, 0), dtype=np.int64))
    rep = analyze(trivial, strict=True)
    assert rep.b0_dim == 0 and rep.h3_dim == 0


def _enumerate_span(vectors, p, length):
    """Closure of a set of vectors under the F_p span, by plain sets."""
    span = {(0,) * length}
    frontier = [tuple(int(x) for x in v) for v in vectors]
    for v in frontier:
        if v in span:
            continue
        additions = []
        for c in range(1, p):
            for s in list(span):
                w = tuple((c * a + b) % p for a, b in zip(v, s))
                additions.append(w)
        span.update(additions)
    return span


@pytest.mark.parametrize("seed", [0, 1, 2, 3, 4, 5, 6, 7])
def test_full_pipeline_matches_raw_enumeration_seed(seed):
    """Recompute b0/h3 with sets and loops only; no shared code with analyze."""
    p = 3
    rng = np.random.default_rng(300 + seed)
    n = int(rng.integers(2, 5))
    m = int(rng.integers(0, 3))
    spec = GroupSpec(p, n, m, rng.integers(0, p, size=(m, comb(n, 2))))
    rep = analyze(spec, strict=False)

    d2, d3 = comb(n, 2), comb(n, 3)
    idx2 = subset_index(n, 2)
    idx3 = subset_index(n, 3)

    def wedge2(u, v):
        out = [0] * d2
        for (i, j), t in idx2.items():
            out[t] = (u[i - 1] * v[j - 1] - u[j - 1] * v[i - 1]) % p
        return tuple(out)

    vectors = list(itertools.product(range(p), repeat=n))
    k2 = _enumerate_span(spec.gamma, p, d2)
    s2 = {x for x in itertools.product(range(p), repeat=d2)
          if all(sum(a * b for a, b in zip(f, x)) % p == 0 for f in k2)}
    dec2 = {wedge2(u, v) for u in vectors for v in vectors}
    s2dec = _enumerate_span([x for x in s2 if x in dec2], p, d2)
    k2max = {f for f in itertools.product(range(p), repeat=d2)
             if all(sum(a * b for a, b in zip(f, x)) % p == 0 for x in s2dec)}

    def log_p(size):
        e = 0
        while size > 1:
            size //= p
            e += 1
        return e

    assert rep.deg2.ki.dim == log_p(len(k2))
    assert rep.deg2.si.dim == log_p(len(s2))
    assert rep.deg2.si_dec.dim == log_p(len(s2dec))
    assert rep.b0_dim == log_p(len(k2max)) - log_p(len(k2))
    assert {tuple(int(x) for x in v) for v in rep.deg2.si_dec.vectors()} == s2dec

    k3 = _enumerate_span(_k3_generators(spec, idx2, p, d3), p, d3)
    s3 = {x for x in itertools.product(range(p), repeat=d3)
          if all(sum(a * b for a, b in zip(f, x)) % p == 0 for f in k3)}
    bivectors = {tuple(int(x) for x in b)
                 for b in itertools.product(range(p), repeat=d2)}
    dec3 = set()
    for ucoef in bivectors:
        for v in vectors:
            dec3.add(_wedge_2_1(ucoef, v, idx2, idx3, n, p, d3))
    s3dec = _enumerate_span([x for x in s3 if x in dec3], p, d3)
    k3max = {f for f in itertools.product(range(p), repeat=d3)
             if all(sum(a * b for a, b in zip(f, x)) % p == 0 for x in s3dec)}
    assert rep.deg3.ki.dim == log_p(len(k3))
    assert rep.deg3.si.dim == log_p(len(s3))
    assert rep.deg3.si_dec.dim == log_p(len(s3dec))
    assert rep.h3_dim == log_p(len(k3max)) - log_p(len(k3))


def _k3_generators(spec, idx2, p, d3):
    """K^3 generators by definition: gamma-dual rows wedged with duals e_j*."""
    n = spec.n
    idx3 = subset_index(n, 3)
    gens = []
    for row in spec.gamma:
        for j in range(1, n + 1):
            out = [0] * d3
            for (a, b), t2 in idx2.items():
                cval = int(row[t2])
                if not cval or j in (a, b):
                    continue
                S = tuple(sorted((a, b, j)))
                # sign of sorting (a, b, j): one inversion iff a < j < b
                sign = -1 if a < j < b else 1
                out[idx3[S]] = (out[idx3[S]] + sign * cval) % p
            gens.append(tuple(out))
    return gens


def _wedge_2_1(bcoef, v, idx2, idx3, n, p, d3):
    out = [0] * d3
    for (a, b), t2 in idx2.items():
        c = int(bcoef[t2])
        if not c:
            continue
        for j in range(1, n + 1):
            if not v[j - 1] or j in (a, b):
                continue
            S = tuple(sorted((a, b, j)))
            sign = -1 if a < j < b else 1
            out[idx3[S]] = (out[idx3[S]] + sign * c * v[j - 1]) % p
    return tuple(out)


def dual_trivector(p, n, *terms):
    out = np.zeros(comb(n, 3), dtype=np.int64)
    idx = subset_index(n, 3)
    for subset, c in terms:
        out[idx[subset]] = (out[idx[subset]] + c) % p
    return out


def test_k3_peyre6_matches_listed_generator_table():
    # the 18 stated generators of K^3 for the headline example
    spec = builtin("peyre6")
    k3 = compute_k3(spec, compute_k2(spec))
    g = dual_trivector
    p, n = 3, 6
    expected = Subspace.from_generators([
        g(p, n, ((1, 2, 3), 1), ((1, 5, 6), -1)),
        g(p, n, ((1, 2, 3), 1), ((3, 4, 5), -1)),
        g(p, n, ((1, 2, 4), 1)),
        g(p, n, ((1, 2, 5), 1)),
        g(p, n, ((1, 2, 6), 1)),
        g(p, n, ((1, 3, 4), 1)),
        g(p, n, ((1, 3, 6), 1)),
        g(p, n, ((1, 4, 5), 1)),
        g(p, n, ((1, 4, 6), 1)),
        g(p, n, ((2, 3, 4), 1)),
        g(p, n, ((2, 3, 5), 1)),
        g(p, n, ((2, 3, 6), 1)),
        g(p, n, ((2, 4, 5), 1)),
        g(p, n, ((2, 4, 6), 1)),
        g(p, n, ((2, 5, 6), 1)),
        g(p, n, ((3, 4, 6), 1)),
        g(p, n, ((3, 5, 6), 1)),
        g(p, n, ((4, 5, 6), 1)),
    ], p, comb(n, 3))
    assert k3 == expected


def test_report_text_renders_bases():
    from unramified.obstruction import report_text
    text = report_text(analyze(builtin("peyre6")))
    assert "dim K^2 = 6; dim S^2 = 9" in text
    assert "S^3_dec basis: u[1,3,5]" in text
    assert "b0_dim = 0; h3_dim = 1" in text

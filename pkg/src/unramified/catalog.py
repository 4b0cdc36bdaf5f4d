"""Builtin group specifications.

``peyre6`` is the order-3^12 headline example: U and V of dimension 6 over
F_3 with

    gamma(u1^u2) = v1    gamma(u4^u5) = -v1
    gamma(u2^u3) = v2    gamma(u5^u6) = -v2
    gamma(u1^u4) = v3    gamma(u2^u5) = v4
    gamma(u3^u6) = v5    gamma(u4^u6) = v6

It is embedded source-level (not as a data file) because it anchors the
repository's main regression: trivial unramified Brauer group together with
a nonzero degree-3 obstruction.
"""

from __future__ import annotations

from math import comb

import numpy as np

from .exterior import subset_index
from .groups import GroupSpec


def _spec_from_pairs(p: int, n: int, m: int, pairs, name: str) -> GroupSpec:
    gamma = np.zeros((m, comb(n, 2)), dtype=np.int64)
    idx = subset_index(n, 2)
    for (i, j, k, c) in pairs:
        gamma[k - 1, idx[(i, j)]] = c % p
    return GroupSpec(p, n, m, gamma, name=name)


def peyre6() -> GroupSpec:
    pairs = [
        (1, 2, 1, 1), (4, 5, 1, -1),
        (2, 3, 2, 1), (5, 6, 2, -1),
        (1, 4, 3, 1),
        (2, 5, 4, 1),
        (3, 6, 5, 1),
        (4, 6, 6, 1),
    ]
    return _spec_from_pairs(3, 6, 6, pairs, "peyre6")


def heisenberg(p: int) -> GroupSpec:
    """The exponent-p group of order p^3: gamma(u1^u2) = v1."""
    return _spec_from_pairs(p, 2, 1, [(1, 2, 1, 1)], f"heisenberg{p}")


def elementary(p: int, n: int, name: str) -> GroupSpec:
    """(Z/p)^n as an extension with V = 0."""
    return GroupSpec(p, n, 0, np.zeros((0, comb(n, 2)), dtype=np.int64),
                     name=name)


BUILTINS = {
    "peyre6": peyre6,
    "heisenberg3": lambda: heisenberg(3),
    "heisenberg5": lambda: heisenberg(5),
    "elem3": lambda: elementary(3, 1, "elem3"),
    "elem9": lambda: elementary(3, 2, "elem9"),
    "elem27": lambda: elementary(3, 3, "elem27"),
    "elem25": lambda: elementary(5, 2, "elem25"),
}

BUILTIN_NOTES = {
    "peyre6": "p=3, dim U = dim V = 6; see module docstring for gamma",
    "heisenberg3": "p=3, n=2, m=1, gamma(u1^u2) = v1 (order 27, exponent 3)",
    "heisenberg5": "p=5, n=2, m=1, gamma(u1^u2) = v1 (order 125, exponent 5)",
    "elem3": "Z/3 (n=1, m=0, gamma = 0)",
    "elem9": "(Z/3)^2 (n=2, m=0, gamma = 0)",
    "elem27": "(Z/3)^3 (n=3, m=0, gamma = 0)",
    "elem25": "(Z/5)^2 (n=2, m=0, gamma = 0)",
}


def builtin(name: str) -> GroupSpec:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise KeyError(
            f"unknown builtin {name!r}; known: {', '.join(sorted(BUILTINS))}")

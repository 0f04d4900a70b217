"""Generators for the concrete structure families used throughout.

All digraph families share the single binary relation E; the lower-bound
families carry their own signatures (k unary relations, or E plus one
unary U).
"""

from __future__ import annotations

from .errors import FormatError
from .structures import Signature, Structure

DIGRAPH = Signature((("E", 2),))


def clique(i: int, reflexive: bool = False) -> Structure:
    """K_i (irreflexive) or K_i* (reflexive): all pairs, loops per flag."""
    if i < 1:
        raise FormatError("clique size must be >= 1")
    edges = [(x, y) for x in range(i) for y in range(i) if reflexive or x != y]
    return Structure.build(DIGRAPH, i, {"E": edges})


def k1s(n: int) -> Structure:
    """n disjoint loopless vertices (n * K_1)."""
    if n < 1:
        raise FormatError("k1s needs n >= 1")
    return Structure.build(DIGRAPH, n, {"E": []})


def path(alpha: str) -> Structure:
    """The path on len(alpha) vertices with a self-loop wherever the bit is 1.

    Vertices are labelled "1".."n" to match the 1-based convention of the
    path families P_alpha.
    """
    if not alpha or any(ch not in "01" for ch in alpha):
        raise FormatError("path parameter must be a nonempty bit-string")
    n = len(alpha)
    edges = []
    for i in range(n):
        if i + 1 < n:
            edges += [(i, i + 1), (i + 1, i)]
        if alpha[i] == "1":
            edges.append((i, i))
    labels = [str(i + 1) for i in range(n)]
    return Structure.build(DIGRAPH, n, {"E": edges}, labels=labels)


def p01() -> Structure:
    """Vertices {0,1}, edges {(0,1),(1,0),(1,1)}: non-loop 0 dominated by 1."""
    return Structure.build(
        DIGRAPH, 2, {"E": [(0, 1), (1, 0), (1, 1)]}, labels=["0", "1"]
    )


def dp1_star() -> Structure:
    """Vertex set {1,2}, edge set {(1,1),(1,2),(2,2)}: the 2-element order."""
    return Structure.build(
        DIGRAPH, 2, {"E": [(0, 0), (0, 1), (1, 1)]}, labels=["1", "2"]
    )


def linear_order(m: int) -> Structure:
    """([m]; <=) as a digraph: edge (i,j) iff i <= j."""
    if m < 1:
        raise FormatError("linear_order needs m >= 1")
    edges = [(i, j) for i in range(m) for j in range(m) if i <= j]
    labels = [str(i + 1) for i in range(m)]
    return Structure.build(DIGRAPH, m, {"E": edges}, labels=labels)


def h2() -> Structure:
    """The 4-vertex graph K_4 minus the edge {0,3}, with symmetric edges."""
    und = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]
    edges = [(x, y) for x, y in und] + [(y, x) for x, y in und]
    return Structure.build(DIGRAPH, 4, {"E": edges})


def a_k_unary(k: int) -> Structure:
    """Domain [k] over k unary relations with U_i := [k] \\ {i}."""
    if k < 2:
        raise FormatError("a_k_unary needs k >= 2")
    sig = Signature(tuple((f"U{i}", 1) for i in range(1, k + 1)))
    tuples = {
        f"U{i}": [(x,) for x in range(k) if x != i - 1]
        for i in range(1, k + 1)
    }
    labels = [str(i + 1) for i in range(k)]
    return Structure.build(sig, k, tuples, labels=labels)


def b_unary(k: int) -> Structure:
    """The 2-element companion of a_k_unary: 1 in every U_i, 0 in none."""
    if k < 2:
        raise FormatError("b_unary needs k >= 2")
    sig = Signature(tuple((f"U{i}", 1) for i in range(1, k + 1)))
    tuples = {f"U{i}": [(1,)] for i in range(1, k + 1)}
    return Structure.build(sig, 2, tuples, labels=["0", "1"])


CYCLE_SIG = Signature((("E", 2), ("U", 1)))


def a_k_cycle(k: int) -> Structure:
    """The directed k-cycle with U on every vertex except the last."""
    if k < 2:
        raise FormatError("a_k_cycle needs k >= 2")
    edges = [(i, (i + 1) % k) for i in range(k)]
    return Structure.build(
        CYCLE_SIG, k, {"E": edges, "U": [(i,) for i in range(k - 1)]}
    )


def b_cycle() -> Structure:
    """The 2-element companion of a_k_cycle: two loops, U = {1}."""
    return Structure.build(
        CYCLE_SIG, 2, {"E": [(0, 0), (1, 1)], "U": [(1,)]}, labels=["0", "1"]
    )


_FAMILIES = {
    "clique": clique,
    "path": path,
    "a_k_unary": a_k_unary,
    "a_k_cycle": a_k_cycle,
    "dp1_star": dp1_star,
    "linear_order": linear_order,
    "p01": p01,
    "h2": h2,
    "k1s": k1s,
}


def generate(family: str, *params, **kwparams) -> Structure:
    """Dispatch to a named family; unknown names or bad params raise."""
    try:
        fn = _FAMILIES[family]
    except KeyError:
        raise FormatError(
            f"unknown family {family!r}; choose from {sorted(_FAMILIES)}"
        )
    try:
        return fn(*params, **kwparams)
    except TypeError as e:
        raise FormatError(f"bad parameters for {family}: {e}")

"""Homomorphism search between finite relational structures.

Plain backtracking with per-tuple lookahead.  Variables (source elements)
are ordered by descending degree, values ascending, so results are
deterministic.  Constants, when present, pin their source element to the
matching target element before the search starts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import SignatureMismatchError
from .structures import Structure, power


@dataclass(frozen=True)
class HomWitness:
    mapping: tuple[int, ...]
    surjective: bool

    def __call__(self, x):
        return self.mapping[x]


def _check_signatures(a: Structure, b: Structure):
    if a.signature.reduct() != b.signature.reduct():
        raise SignatureMismatchError(
            f"signatures differ: {a.signature.relations} vs {b.signature.relations}"
        )
    if a.signature.constant_count != b.signature.constant_count:
        raise SignatureMismatchError(
            f"constant counts differ: {a.signature.constant_count}"
            f" vs {b.signature.constant_count}"
        )


def verify_hom(a: Structure, b: Structure, mapping) -> bool:
    """Check a candidate mapping directly against every fact of ``a``."""
    _check_signatures(a, b)
    if len(mapping) != a.size:
        return False
    if any(not 0 <= v < b.size for v in mapping):
        return False
    for ca, cb in zip(a.constants, b.constants):
        if mapping[ca] != cb:
            return False
    for tset_a, tset_b in zip(a.tuples, b.tuples):
        for t in tset_a:
            if tuple(mapping[x] for x in t) not in tset_b:
                return False
    return True


def _degree(a: Structure):
    deg = [0] * a.size
    for tset in a.tuples:
        for t in tset:
            for x in t:
                deg[x] += 1
    return deg


def _incident(a: Structure):
    """For each element, the list of (relation index, tuple) facts touching it."""
    inc = [[] for _ in range(a.size)]
    for ri, tset in enumerate(a.tuples):
        for t in tset:
            for x in set(t):
                inc[x].append((ri, t))
    return inc


def find_hom(a: Structure, b: Structure, partial=None, surjective=False):
    """Search for a homomorphism a -> b; returns a HomWitness or None.

    ``partial`` is an optional dict {source element: forced target element}.
    With ``surjective=True`` only surjections are accepted, with a pruning
    bound on how many targets the unassigned elements can still cover.
    """
    _check_signatures(a, b)
    if surjective and a.size < b.size:
        return None
    if b.size == 0:
        if a.size == 0:
            return HomWitness((), True)
        return None
    # Quick reject: a fact in a relation that is empty in b.
    for tset_a, tset_b in zip(a.tuples, b.tuples):
        if tset_a and not tset_b:
            return None

    assignment = [-1] * a.size
    forced = dict(partial or {})
    for ca, cb in zip(a.constants, b.constants):
        if forced.get(ca, cb) != cb:
            return None
        forced[ca] = cb
    for x, v in forced.items():
        if not (0 <= x < a.size and 0 <= v < b.size):
            return None

    # Per-element candidate sets, pre-filtered by unary relations.
    candidates = [set(range(b.size)) for _ in range(a.size)]
    for (name, arity), tset_a, tset_b in zip(a.signature.relations, a.tuples, b.tuples):
        if arity != 1:
            continue
        allowed = {t[0] for t in tset_b}
        for (x,) in tset_a:
            candidates[x] &= allowed
    for x, v in forced.items():
        if v not in candidates[x]:
            return None
        candidates[x] = {v}
    if any(not c for c in candidates):
        return None

    inc = _incident(a)
    deg = _degree(a)
    order = sorted(range(a.size), key=lambda x: (-deg[x], x))
    order.sort(key=lambda x: x not in forced)  # stable: forced elements first

    used = [0] * b.size

    def consistent(x, v):
        assignment[x] = v
        ok = True
        for ri, t in inc[x]:
            if any(assignment[y] == -1 for y in t):
                continue
            if tuple(assignment[y] for y in t) not in b.tuples[ri]:
                ok = False
                break
        assignment[x] = -1
        return ok

    n = a.size
    if n == 0:
        return HomWitness((), b.size == 0)

    # Iterative backtracking (sources can be far deeper than the Python
    # recursion limit allows).
    ordered = [sorted(candidates[x]) for x in order]
    covered = 0
    success = False
    frames = [iter(ordered[0])]

    def undo(depth):
        nonlocal covered
        x = order[depth]
        v = assignment[x]
        used[v] -= 1
        if used[v] == 0:
            covered -= 1
        assignment[x] = -1

    while frames:
        depth = len(frames) - 1
        x = order[depth]
        v = next(frames[-1], None)
        if v is None:
            frames.pop()
            if frames:
                undo(depth - 1)
            continue
        if not consistent(x, v):
            continue
        assignment[x] = v
        used[v] += 1
        if used[v] == 1:
            covered += 1
        if depth + 1 == n:
            if not surjective or covered == b.size:
                success = True
                break
            undo(depth)
        elif surjective and covered + (n - depth - 1) < b.size:
            undo(depth)
        else:
            frames.append(iter(ordered[depth + 1]))

    if success:
        mapping = tuple(assignment)
        return HomWitness(mapping, len(set(mapping)) == b.size)
    return None


def find_surjective_hom(a: Structure, b: Structure, partial=None):
    return find_hom(a, b, partial=partial, surjective=True)


def automorphisms(a: Structure, size_cap: int = 8):
    """All automorphisms of ``a``, by brute force over permutations."""
    if a.size > size_cap:
        raise ValueError(f"automorphism enumeration capped at size {size_cap}")
    out = []
    for perm in itertools.permutations(range(a.size)):
        if verify_hom(a, a, perm) and verify_hom(a, a, _invert(perm)):
            out.append(perm)
    return out


def _invert(perm):
    inv = [0] * len(perm)
    for i, v in enumerate(perm):
        inv[v] = i
    return tuple(inv)


def orbit_count(a: Structure, k: int, size_cap: int = 8) -> int:
    """Number of orbits of k-tuples of ``a`` under its automorphism group."""
    autos = automorphisms(a, size_cap=size_cap)
    seen = set()
    count = 0
    for t in itertools.product(range(a.size), repeat=k):
        if t in seen:
            continue
        count += 1
        for g in autos:
            seen.add(tuple(g[x] for x in t))
    return count


def find_majority_polymorphism(a: Structure):
    """Search for a majority polymorphism of ``a``: a homomorphism
    m : a^3 -> a with m(x,x,y) = m(x,y,x) = m(y,x,x) = x."""
    if a.signature.constant_count != 0:
        raise SignatureMismatchError("majority search expects a constant-free structure")
    cube = power(a, 3)
    n = a.size
    partial = {}
    for x in range(n):
        for y in range(n):
            for triple in ((x, x, y), (x, y, x), (y, x, x)):
                i, j, k = triple
                partial[(i * n + j) * n + k] = x
    return find_hom(cube, a, partial=partial)

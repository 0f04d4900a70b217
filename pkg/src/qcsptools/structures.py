"""Finite relational structures and the product/power/union/expansion operators.

Domain elements are dense indices 0..n-1; labels are display-only.  Products
use the pair encoding x*|b|+y, so iterated powers index tuples big-endian in
base |a|.  Relation symbols are kept sorted by name so that structures built
independently over "the same" signature compare equal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import reduce
from itertools import product as iproduct

from .errors import FormatError, ResourceLimitError, SignatureMismatchError

DEFAULT_SIZE_CAP = 10**6


@dataclass(frozen=True)
class Signature:
    """Relation names with arities, plus a number of constant symbols."""

    relations: tuple[tuple[str, int], ...]
    constant_count: int = 0

    def __post_init__(self):
        rels = tuple(sorted((str(n), int(a)) for n, a in self.relations))
        object.__setattr__(self, "relations", rels)
        names = [n for n, _ in rels]
        if len(set(names)) != len(names):
            raise FormatError(f"duplicate relation names in signature: {names}")
        for n, a in rels:
            if a < 1:
                raise FormatError(f"relation {n!r} has arity {a} < 1")
        if self.constant_count < 0:
            raise FormatError("constant_count must be >= 0")

    def arity(self, name: str) -> int:
        for n, a in self.relations:
            if n == name:
                return a
        raise KeyError(name)

    @property
    def relation_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.relations)

    def with_constants(self, m: int) -> "Signature":
        return Signature(self.relations, m)

    def reduct(self) -> "Signature":
        return Signature(self.relations, 0)


@dataclass(frozen=True)
class Structure:
    """A finite structure: domain {0..size-1}, tuple sets per relation.

    ``tuples`` is stored parallel to ``signature.relations``; use
    :meth:`rel` for access by name.  ``constants[i]`` interprets the
    constant symbol c_{i+1}.
    """

    signature: Signature
    size: int
    tuples: tuple[frozenset, ...]
    constants: tuple[int, ...] = ()
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.size < 0:
            raise FormatError("size must be >= 0")
        if len(self.tuples) != len(self.signature.relations):
            raise FormatError("tuple sets do not match the signature")
        for (name, arity), tset in zip(self.signature.relations, self.tuples):
            for t in tset:
                if len(t) != arity:
                    raise FormatError(f"tuple {t} has wrong arity for {name}")
                if any(not (0 <= x < self.size) for x in t):
                    raise FormatError(f"tuple {t} of {name} is out of range")
        if len(self.constants) != self.signature.constant_count:
            raise FormatError("every constant symbol must be interpreted")
        for c in self.constants:
            if not (0 <= c < self.size):
                raise FormatError(f"constant interpretation {c} out of range")
        if self.labels is not None and len(self.labels) != self.size:
            raise FormatError("label list must have one entry per element")

    @staticmethod
    def build(signature, size, tuples=None, constants=(), labels=None):
        """Construct from a {relation name: iterable of tuples} mapping."""
        tuples = dict(tuples or {})
        unknown = set(tuples) - set(signature.relation_names)
        if unknown:
            raise FormatError(f"unknown relations: {sorted(unknown)}")
        packed = tuple(
            frozenset(tuple(t) for t in tuples.get(name, ()))
            for name in signature.relation_names
        )
        lab = tuple(labels) if labels is not None else None
        return Structure(signature, size, packed, tuple(constants), lab)

    def rel(self, name: str) -> frozenset:
        return self.tuples[self.signature.relation_names.index(name)]

    def element_names(self) -> tuple[str, ...]:
        if self.labels is not None:
            return self.labels
        return tuple(str(i) for i in range(self.size))

    def tuple_count(self) -> int:
        return sum(len(t) for t in self.tuples)

    def relabel(self, perm: list[int]) -> "Structure":
        """Image under a domain bijection; element i becomes perm[i]."""
        if sorted(perm) != list(range(self.size)):
            raise FormatError("relabel requires a permutation of the domain")
        packed = tuple(
            frozenset(tuple(perm[x] for x in t) for t in tset)
            for tset in self.tuples
        )
        labels = None
        if self.labels is not None:
            labels = tuple(
                self.labels[perm.index(i)] for i in range(self.size)
            )
        return Structure(
            self.signature, self.size, packed,
            tuple(perm[c] for c in self.constants), labels,
        )


def _check_same_signature(a: Structure, b: Structure):
    if a.signature != b.signature:
        raise SignatureMismatchError(
            f"signature mismatch: {a.signature} vs {b.signature}"
        )


def product(a: Structure, b: Structure) -> Structure:
    """Direct (categorical) product; pair (x, y) gets index x*|b|+y."""
    _check_same_signature(a, b)
    nb = b.size
    packed = []
    for ta, tb in zip(a.tuples, b.tuples):
        packed.append(frozenset(
            tuple(x * nb + y for x, y in zip(sa, sb))
            for sa in ta for sb in tb
        ))
    constants = tuple(ca * nb + cb for ca, cb in zip(a.constants, b.constants))
    la, lb = a.element_names(), b.element_names()
    labels = tuple(f"({la[x]},{lb[y]})" for x in range(a.size) for y in range(nb))
    return Structure(a.signature, a.size * nb, tuple(packed), constants, labels)


def power(a: Structure, r: int, size_cap: int = DEFAULT_SIZE_CAP) -> Structure:
    """Iterated product of ``a`` with itself, r >= 1."""
    if r < 1:
        raise FormatError("power exponent must be >= 1")
    if a.size ** r > size_cap:
        raise ResourceLimitError(
            f"power of size {a.size}^{r} exceeds the cap of {size_cap}"
        )
    return reduce(product, [a] * r)


def disjoint_union(a: Structure, b: Structure) -> Structure:
    """Disjoint union; undefined for structures carrying constants."""
    _check_same_signature(a, b)
    if a.signature.constant_count != 0:
        raise FormatError("disjoint union is undefined in the presence of constants")
    off = a.size
    packed = tuple(
        ta | frozenset(tuple(x + off for x in t) for t in tb)
        for ta, tb in zip(a.tuples, b.tuples)
    )
    la, lb = a.element_names(), b.element_names()
    labels = tuple(f"a:{x}" for x in la) + tuple(f"b:{y}" for y in lb)
    return Structure(a.signature, a.size + b.size, packed, (), labels)


def expansion(a: Structure, lam: list[int]) -> Structure:
    """Expand a constant-free structure by constants c_i := lam[i-1]."""
    if a.signature.constant_count != 0:
        raise FormatError("expansion requires a constant-free structure")
    lam = tuple(lam)
    for x in lam:
        if not (0 <= x < a.size):
            raise FormatError(f"constant target {x} out of range")
    return Structure(
        a.signature.with_constants(len(lam)), a.size, a.tuples, lam, a.labels
    )


def superprodukt(a: Structure, m: int, size_cap: int = DEFAULT_SIZE_CAP) -> Structure:
    """Product of all constant expansions of ``a`` over assignments of m
    constants, enumerated lexicographically; domain size |a|^(|a|^m)."""
    if m < 1:
        raise FormatError("superprodukt requires m >= 1")
    if a.signature.constant_count != 0:
        raise FormatError("superprodukt requires a constant-free structure")
    if a.size == 0:
        raise FormatError("superprodukt of the empty structure is undefined")
    total = a.size ** (a.size ** m)
    if total > size_cap:
        raise ResourceLimitError(
            f"superprodukt of size {a.size}^({a.size}^{m}) exceeds the cap of {size_cap}"
        )
    factors = [expansion(a, lam) for lam in iproduct(range(a.size), repeat=m)]
    return reduce(product, factors)


def substructure(a: Structure, keep_elements, keep_tuples=None) -> Structure:
    """Weak substructure: keep a subset of elements and, optionally, only a
    subset of the tuples among them (relation tuples may be dropped)."""
    keep = sorted(set(keep_elements))
    for x in keep:
        if not (0 <= x < a.size):
            raise FormatError(f"element {x} out of range")
    index = {x: i for i, x in enumerate(keep)}
    keepset = set(keep)
    packed = []
    for (name, _), tset in zip(a.signature.relations, a.tuples):
        if keep_tuples is None:
            chosen = [t for t in tset if all(x in keepset for x in t)]
        else:
            chosen = [tuple(t) for t in keep_tuples.get(name, ())]
            for t in chosen:
                if t not in tset:
                    raise FormatError(f"tuple {t} of {name} not present in the parent")
                if any(x not in keepset for x in t):
                    raise FormatError(f"tuple {t} of {name} dangles outside the kept set")
        packed.append(frozenset(tuple(index[x] for x in t) for t in chosen))
    constants = []
    for c in a.constants:
        if c not in keepset:
            raise FormatError(f"constant on dropped element {c}")
        constants.append(index[c])
    labels = None
    if a.labels is not None:
        labels = tuple(a.labels[x] for x in keep)
    return Structure(a.signature, len(keep), tuple(packed), tuple(constants), labels)


def is_induced_substructure_of(sub: Structure, parent: Structure, keep_elements) -> bool:
    """Whether ``sub`` keeps every parent tuple among ``keep_elements``."""
    induced = substructure(parent, keep_elements)
    return induced.tuples == sub.tuples


# ---------------------------------------------------------------------------
# Text format (JSON-compatible; see README for the schema)

_TOP_KEYS = {"name", "elements", "relations", "constants"}
_REL_KEYS = {"arity", "tuples"}


def structure_to_dict(a: Structure, name: str = "") -> dict:
    names = a.element_names()
    rels = {}
    for (rname, arity), tset in zip(a.signature.relations, a.tuples):
        rels[rname] = {
            "arity": arity,
            "tuples": sorted([names[x] for x in t] for t in tset),
        }
    out = {"name": name, "elements": list(names), "relations": rels}
    if a.constants:
        out["constants"] = {
            f"c{i + 1}": names[c] for i, c in enumerate(a.constants)
        }
    return out


def structure_from_dict(data: dict) -> Structure:
    if not isinstance(data, dict):
        raise FormatError("structure file must contain a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise FormatError(f"unknown keys in structure file: {sorted(unknown)}")
    try:
        elements = list(data["elements"])
        relations = dict(data["relations"])
    except KeyError as e:
        raise FormatError(f"missing key {e.args[0]!r} in structure file")
    if len(set(elements)) != len(elements):
        raise FormatError("element names must be pairwise distinct")
    index = {str(e): i for i, e in enumerate(elements)}
    sig_rels, tuples = [], {}
    for rname, spec in relations.items():
        if not isinstance(spec, dict) or set(spec) - _REL_KEYS:
            raise FormatError(f"malformed relation entry {rname!r}")
        arity = int(spec["arity"])
        sig_rels.append((rname, arity))
        tset = []
        for t in spec["tuples"]:
            if len(t) != arity:
                raise FormatError(f"tuple {t} of {rname} has wrong arity")
            try:
                tset.append(tuple(index[str(x)] for x in t))
            except KeyError as e:
                raise FormatError(f"unknown element {e.args[0]!r} in {rname}")
        tuples[rname] = tset
    constants = []
    cmap = data.get("constants", {})
    for i in range(1, len(cmap) + 1):
        key = f"c{i}"
        if key not in cmap:
            raise FormatError(f"constants must be named c1..c{len(cmap)}; missing {key}")
        if str(cmap[key]) not in index:
            raise FormatError(f"constant {key} names unknown element {cmap[key]!r}")
        constants.append(index[str(cmap[key])])
    sig = Signature(tuple(sig_rels), len(constants))
    return Structure.build(
        sig, len(elements), tuples, constants, [str(e) for e in elements]
    )


def loads(text: str) -> Structure:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON: {e}")
    return structure_from_dict(data)


def dumps(a: Structure, name: str = "") -> str:
    return json.dumps(structure_to_dict(a, name), indent=2)

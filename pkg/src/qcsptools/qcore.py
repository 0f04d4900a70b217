"""Q-cores: minimal weak substructures with the same positive Horn theory.

Candidates are enumerated by (domain size, tuple count, lexicographic),
so the first equivalent one found is automatically inclusion-minimal:
any proper weakening of it sits earlier in the order and has already
failed.  "Weak" means both elements and individual relation tuples may
be dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .containment import ContainmentVerdict, INCONCLUSIVE, decide_containment
from .errors import FormatError
from .hom import find_surjective_hom, verify_hom
from .structures import Structure, expansion, power, substructure

DEFAULT_SIZE_LIMIT = 5
DEFAULT_R_CAP = 4


@dataclass(frozen=True)
class QcoreReport:
    core: Structure | None
    kept_elements: tuple
    is_induced: bool
    forward: ContainmentVerdict | None   # core contained in input
    backward: ContainmentVerdict | None  # input contained in core
    minimality: tuple  # (description, failed direction verdict) pairs
    inconclusive: bool = False
    reason: str = ""


def _all_tuples_of(a: Structure, keep):
    keepset = set(keep)
    out = []
    for (name, _), tset in zip(a.signature.relations, a.tuples):
        for t in sorted(tset):
            if all(x in keepset for x in t):
                out.append((name, t))
    return out


def _candidate(a, keep, chosen):
    keep_tuples = {}
    for name, t in chosen:
        keep_tuples.setdefault(name, []).append(t)
    return substructure(a, keep, keep_tuples)


def _equivalence(cand, a, cap):
    """(verdict cand ⊆ a, verdict a ⊆ cand); short-circuits on a "no"."""
    fwd = decide_containment(cand, a, cap=cap)
    if fwd.outcome == "no":
        return fwd, None
    bwd = decide_containment(a, cand, cap=cap)
    return fwd, bwd


def _candidates(a: Structure):
    """Weak substructures in (size, tuple count, lexicographic) order."""
    for size in range(1, a.size + 1):
        for keep in combinations(range(a.size), size):
            available = _all_tuples_of(a, keep)
            for count in range(len(available) + 1):
                for chosen in combinations(available, count):
                    yield keep, chosen


def find_qcore(a: Structure, cap: int = DEFAULT_R_CAP,
               size_limit: int = DEFAULT_SIZE_LIMIT) -> QcoreReport:
    """First pH-equivalent weak substructure in enumeration order, with
    equivalence certificates and a certificate that every immediate
    weakening (one tuple or one element dropped) fails."""
    if a.signature.constant_count != 0:
        raise FormatError("q-cores are defined for constant-free structures")
    if a.size > size_limit:
        raise FormatError(
            f"input has {a.size} elements, over the limit of {size_limit}"
        )
    for keep, chosen in _candidates(a):
        cand = _candidate(a, keep, chosen)
        fwd, bwd = _equivalence(cand, a, cap)
        if fwd.outcome == "yes" and bwd and bwd.outcome == "yes":
            minimality, inconclusive = _minimality_certificate(
                a, keep, chosen, cap
            )
            induced = chosen == tuple(_all_tuples_of(a, keep))
            return QcoreReport(
                core=cand, kept_elements=keep, is_induced=induced,
                forward=fwd, backward=bwd, minimality=tuple(minimality),
                inconclusive=inconclusive,
                reason="an immediate weakening was inconclusive" if inconclusive else "",
            )
        if fwd.outcome == INCONCLUSIVE or (bwd and bwd.outcome == INCONCLUSIVE):
            return QcoreReport(
                core=None, kept_elements=keep, is_induced=False,
                forward=fwd, backward=bwd, minimality=(),
                inconclusive=True,
                reason="equivalence undecided for an enumeration-early candidate",
            )
    raise FormatError("no equivalent substructure found; input invalid")


def _minimality_certificate(a, keep, chosen, cap):
    """Re-check every immediate weakening of the found core: drop one
    tuple, or drop one element with its incident tuples."""
    out = []
    inconclusive = False
    for i, (name, t) in enumerate(chosen):
        weaker = _candidate(a, keep, chosen[:i] + chosen[i + 1:])
        fwd, bwd = _equivalence(weaker, a, cap)
        verdict = bwd if fwd.outcome == "yes" and bwd is not None else fwd
        if verdict.outcome == "yes":
            raise AssertionError("an immediate weakening is still equivalent")
        inconclusive |= verdict.outcome == INCONCLUSIVE
        out.append((f"drop {name}{t}", verdict))
    for x in keep:
        smaller = [e for e in keep if e != x]
        if not smaller:
            continue
        kept = [(name, t) for name, t in chosen if x not in t]
        weaker = _candidate(a, smaller, kept)
        fwd, bwd = _equivalence(weaker, a, cap)
        verdict = bwd if fwd.outcome == "yes" and bwd is not None else fwd
        if verdict.outcome == "yes":
            raise AssertionError("an immediate weakening is still equivalent")
        inconclusive |= verdict.outcome == INCONCLUSIVE
        out.append((f"drop element {x}", verdict))
    return out, inconclusive


def check_idempotency_obstruction(h: Structure, nonloop: int, dominating: int) -> bool:
    """Whether the square of (h; nonloop, dominating) maps surjectively
    onto (h; dominating, dominating) preserving the two constants.

    The dominating element must carry a self-loop and be adjacent both
    ways to every element; the other element must be loop-free."""
    if h.signature.constant_count != 0 or "E" not in h.signature.relation_names:
        raise FormatError("expects a constant-free structure with a binary E")
    if nonloop == dominating:
        raise FormatError("the two distinguished elements must differ")
    edges = h.rel("E")
    if (nonloop, nonloop) in edges:
        raise FormatError(f"element {nonloop} has a self-loop")
    for y in range(h.size):
        if (dominating, y) not in edges or (y, dominating) not in edges:
            raise FormatError(f"element {dominating} does not dominate {y}")
    source = power(expansion(h, [nonloop, dominating]), 2)
    target = expansion(h, [dominating, dominating])
    witness = find_surjective_hom(source, target)
    if witness is None:
        return False
    assert verify_hom(source, target, witness.mapping) and witness.surjective
    return True

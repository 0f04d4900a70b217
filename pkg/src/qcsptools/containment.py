"""Model containment for positive Horn theories.

``QCSP(A) ⊆ QCSP(B)`` holds exactly when some finite power of A maps
surjectively onto B, and the exponent never needs to exceed
min(|A|^|B|, number of orbits of |B|-tuples of A).  We search exponents
upward, with two sound shortcuts for early "no": a missing plain
homomorphism A -> B (a power surjection composed with the diagonal would
give one), and a failed product-structure check at a small number of
universal variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .errors import FormatError, ResourceLimitError, SignatureMismatchError
from .hom import HomWitness, find_hom, find_surjective_hom, orbit_count
from .sentences import PhSentence, structure_to_sentence
from .structures import (
    DEFAULT_SIZE_CAP,
    Structure,
    expansion,
    power,
    superprodukt,
)

YES = "yes"
NO = "no"
INCONCLUSIVE = "inconclusive"

# Automorphism groups are only enumerated for sources this small.
ORBIT_SIZE_CAP = 8
# Element budget for materialized product structures.
SUPERPRODUKT_ELEMENT_CAP = 4096


@dataclass(frozen=True)
class ContainmentVerdict:
    outcome: str
    r: int | None = None
    witness: HomWitness | None = None
    bound: int | None = None
    bound_kind: str | None = None
    reason: str = ""

    def __bool__(self):
        return self.outcome == YES


def _check_inputs(a: Structure, b: Structure):
    if a.signature != b.signature:
        raise SignatureMismatchError("containment requires a common signature")
    if a.signature.constant_count != 0:
        raise FormatError("containment is defined for constant-free structures")
    if a.size == 0 or b.size == 0:
        raise FormatError("containment requires nonempty structures")


def exponent_bound(a: Structure, b: Structure):
    """min(|A|^|B|, orbits of |B|-tuples of A), with the orbit count only
    attempted on small sources; returns (bound, kind)."""
    cardinality = a.size ** b.size
    if a.size <= ORBIT_SIZE_CAP:
        orbits = orbit_count(a, b.size, size_cap=ORBIT_SIZE_CAP)
        if orbits < cardinality:
            return orbits, "orbit"
    return cardinality, "cardinality"


def _factor_hom_exists(a: Structure, b: Structure, mu) -> bool:
    """Cheap positive certificate: a homomorphism from the single factor
    (a, lam) to (b, mu) lifts through the product by projecting onto
    that factor."""
    for lam in iproduct(range(a.size), repeat=len(mu)):
        partial = {}
        ok = True
        for x, v in zip(lam, mu):
            if partial.setdefault(x, v) != v:
                ok = False
                break
        if ok and find_hom(a, b, partial=partial) is not None:
            return True
    return False


def pi2_containment(a: Structure, b: Structure, m: int,
                    element_cap: int = SUPERPRODUKT_ELEMENT_CAP) -> bool:
    """Whether every m-universal Pi_2 sentence true on ``a`` holds on
    ``b``: the product of all m-constant expansions of ``a`` must map
    into every m-constant expansion of ``b`` (constants to constants).

    The product is only materialized for expansions not already settled
    by a single-factor projection."""
    _check_inputs(a, b)
    sp = None
    for mu in iproduct(range(b.size), repeat=m):
        if _factor_hom_exists(a, b, mu):
            continue
        if sp is None:
            sp = superprodukt(a, m, size_cap=element_cap)
        if find_hom(sp, expansion(b, mu)) is None:
            return False
    return True


def decide_containment(a: Structure, b: Structure, cap: int | None = None,
                       bound_override=None,
                       size_cap: int = DEFAULT_SIZE_CAP) -> ContainmentVerdict:
    """Decide QCSP(a) ⊆ QCSP(b).

    ``cap`` limits how many exponents are probed; ``bound_override`` may
    be "cardinality", "orbit", or an explicit integer bound.  A power too
    large for ``size_cap`` yields Inconclusive rather than an error,
    unless a sound negative shortcut settles the question first.
    """
    _check_inputs(a, b)

    if bound_override == "cardinality":
        bound, bound_kind = a.size ** b.size, "cardinality"
    elif bound_override == "orbit":
        bound, bound_kind = orbit_count(a, b.size, size_cap=ORBIT_SIZE_CAP), "orbit"
    elif bound_override is not None:
        bound, bound_kind = int(bound_override), "override"
    else:
        bound, bound_kind = exponent_bound(a, b)

    if find_hom(a, b) is None:
        return ContainmentVerdict(
            NO, bound=bound, bound_kind=bound_kind,
            reason="no homomorphism a -> b, so no power of a maps onto b",
        )

    # Cheap negative oracle before touching large powers: a 1-universal
    # sentence of a that fails on b refutes containment outright.
    try:
        if not pi2_containment(a, b, 1):
            return ContainmentVerdict(
                NO, bound=bound, bound_kind=bound_kind,
                reason="a 1-universal sentence of a fails on b",
            )
    except ResourceLimitError:
        pass

    limit = bound if cap is None else min(cap, bound)
    r = 0
    while r < limit:
        r += 1
        try:
            pw = power(a, r, size_cap=size_cap)
        except ResourceLimitError:
            r -= 1
            break
        if pw.size < b.size:
            continue
        witness = find_surjective_hom(pw, b)
        if witness is not None:
            return ContainmentVerdict(
                YES, r=r, witness=witness, bound=bound, bound_kind=bound_kind
            )
    if r == bound:
        return ContainmentVerdict(
            NO, bound=bound, bound_kind=bound_kind,
            reason=f"no surjection from any power up to the bound {bound}",
        )

    # Bound not reached (user cap or power size).  Try to settle "no"
    # soundly with a small product-structure check before giving up.
    for m in (1, 2):
        try:
            if not pi2_containment(a, b, m):
                return ContainmentVerdict(
                    NO, bound=bound, bound_kind=bound_kind,
                    reason=f"a {m}-universal sentence of a fails on b",
                )
        except ResourceLimitError:
            break
    return ContainmentVerdict(
        INCONCLUSIVE, bound=bound, bound_kind=bound_kind,
        reason=f"exponents probed up to {r} of bound {bound}",
    )


def equivalent(a: Structure, b: Structure, cap: int | None = None,
               size_cap: int = DEFAULT_SIZE_CAP):
    """Both containments; returns (truth-or-"inconclusive", verdict_ab,
    verdict_ba)."""
    ab = decide_containment(a, b, cap=cap, size_cap=size_cap)
    if ab.outcome == NO:
        return False, ab, None
    ba = decide_containment(b, a, cap=cap, size_cap=size_cap)
    if ab.outcome == YES and ba.outcome == YES:
        return True, ab, ba
    if ba.outcome == NO:
        return False, ab, ba
    return INCONCLUSIVE, ab, ba


def distinguishing_sentence(a: Structure, b: Structure, m: int,
                            element_cap: int = SUPERPRODUKT_ELEMENT_CAP):
    """A verified Pi_2 sentence (m universal variables) true on ``a`` and
    false on ``b``, or None if the candidate fails to distinguish them."""
    from .game import pi2_truth_via_expansions

    _check_inputs(a, b)
    sp = superprodukt(a, m, size_cap=element_cap)
    phi = structure_to_sentence(sp)
    if pi2_truth_via_expansions(a, phi) and not pi2_truth_via_expansions(b, phi):
        return phi
    return None


def csp_containment(a: Structure, b: Structure) -> bool:
    """The purely existential baseline: CSP(a) ⊆ CSP(b) iff a -> b."""
    return find_hom(a, b) is not None

"""Model checking for prenex positive Horn sentences.

``evaluate`` plays the two-player evaluation game over the quantifier
prefix, memoizing on the projection of the current assignment to the
variables that can still matter (those occurring in an atom together
with a not-yet-bound variable).  Atoms are checked as soon as their last
variable is bound, so dead branches fall out early.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .errors import SentenceError
from .hom import find_hom
from .sentences import (
    EqAtom,
    FORALL,
    PhSentence,
    RelAtom,
    classify,
    sentence_to_structure,
)
from .structures import DEFAULT_SIZE_CAP, Structure, expansion, superprodukt


@dataclass(frozen=True)
class GameResult:
    truth: bool
    states: int
    strategy: dict | None = None


def _atom_holds(atom, a: Structure, val):
    if isinstance(atom, EqAtom):
        return val[atom.left] == val[atom.right]
    return tuple(val[v] for v in atom.args) in a.rel(atom.name)


def _prepare(a: Structure, s: PhSentence):
    flat = s.flat_prefix()
    pos_of = {v: i for i, (_, v) in enumerate(flat)}
    for atom in s.matrix:
        if isinstance(atom, RelAtom):
            if atom.name not in a.signature.relation_names:
                raise SentenceError(f"relation {atom.name!r} not in the structure")
            if a.signature.arity(atom.name) != len(atom.args):
                raise SentenceError(f"arity mismatch on {atom.name!r}")
    # Atoms become checkable once their latest-bound variable is assigned.
    due = [[] for _ in flat]
    for atom in s.matrix:
        due[max(pos_of[v] for v in atom.variables())].append(atom)
    # live[i]: variables bound before position i that still occur in an
    # atom not yet fully checked at position i.
    live = []
    for i in range(len(flat)):
        alive = set()
        for atom in s.matrix:
            ps = [pos_of[v] for v in atom.variables()]
            if max(ps) >= i:
                alive.update(v for v, p in zip(atom.variables(), ps) if p < i)
        live.append(tuple(sorted(alive, key=pos_of.get)))
    return flat, due, live


def evaluate(a: Structure, s: PhSentence, want_strategy: bool = False) -> GameResult:
    """Decide whether the structure satisfies the sentence.

    With ``want_strategy`` the result carries, for each existential
    variable, the value chosen at every winning memo state, replayable
    with ``replay_strategy``.
    """
    flat, due, live = _prepare(a, s)
    memo = {}
    strategy = {v: {} for q, v in flat if q != FORALL} if want_strategy else None
    val = {}
    states = 0

    def play(i):
        nonlocal states
        if i == len(flat):
            return True
        key = (i, tuple(val[v] for v in live[i]))
        if key in memo:
            return memo[key]
        states += 1
        q, v = flat[i]
        outcome = q == FORALL  # empty domain: forall holds, exists fails
        for x in range(a.size):
            val[v] = x
            if all(_atom_holds(atom, a, val) for atom in due[i]) and play(i + 1):
                if q != FORALL:
                    if want_strategy:
                        strategy[v][key[1]] = x
                    outcome = True
                    break
            elif q == FORALL:
                outcome = False
                break
            del val[v]
        val.pop(v, None)
        memo[key] = outcome
        return outcome

    truth = play(0)
    return GameResult(truth, states, strategy if truth and want_strategy else None)


def replay_strategy(a: Structure, s: PhSentence, strategy: dict) -> bool:
    """Independently check a strategy: walk every universal branch, look
    up the existential choices, and test the matrix on each leaf."""
    flat, _, live = _prepare(a, s)

    def walk(i, val):
        if i == len(flat):
            return all(_atom_holds(atom, a, val) for atom in s.matrix)
        q, v = flat[i]
        key = tuple(val[u] for u in live[i])
        if q == FORALL:
            return all(walk(i + 1, {**val, v: x}) for x in range(a.size))
        if key not in strategy.get(v, {}):
            return False
        return walk(i + 1, {**val, v: strategy[v][key]})

    return walk(0, {})


# ---------------------------------------------------------------------------
# Pi_2 truth via product structures


def _pi2_parts(a: Structure, s: PhSentence):
    shape = classify(s)
    if not shape.is_pi2:
        raise SentenceError("a Pi_2 sentence is required")
    if s.has_equality():
        raise SentenceError("an equality-free sentence is required")
    if a.signature.constant_count != 0:
        raise SentenceError("a constant-free structure is required")
    return sentence_to_structure(s, a.signature), len(s.universal_variables())


def evaluate_pi2_via_superprodukt(
    a: Structure, s: PhSentence, size_cap: int = DEFAULT_SIZE_CAP
) -> bool:
    """Pi_2 truth as a single homomorphism question: the sentence holds on
    ``a`` iff its canonical structure maps into the product of all
    m-constant expansions of ``a`` (constants to constants)."""
    d, m = _pi2_parts(a, s)
    if m == 0:
        return find_hom(d, a) is not None
    target = superprodukt(a, m, size_cap=size_cap)
    return find_hom(d, target) is not None


def pi2_truth_via_expansions(a: Structure, s: PhSentence) -> bool:
    """Same question factored: one homomorphism check per expansion,
    avoiding the giant product."""
    d, m = _pi2_parts(a, s)
    if m == 0:
        return find_hom(d, a) is not None
    if a.size == 0:
        return True
    return all(
        find_hom(d, expansion(a, lam)) is not None
        for lam in iproduct(range(a.size), repeat=m)
    )

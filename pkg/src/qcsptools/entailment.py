"""Entailment between positive Horn sentences.

``phi`` entails ``psi`` exactly when ``psi`` holds in the canonical
term model generated from the Skolemization of ``phi`` over countably
many constants.  That model is approximated by its rank-``m``
truncations over ``l`` constants; the truth of ``psi`` there is decided
by a restricted evaluation game in which the universal player picks
constants and the existential player picks terms built only from the
constants already on the board.  A win at any rank is final, and so is
a loss at the rank bound l + e*l^l (l universals, e existentials in
``psi`` after normalization).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product as iproduct

from .errors import ResourceLimitError, SentenceError
from .game import evaluate
from .sentences import (
    EqAtom,
    EXISTS,
    FORALL,
    PhSentence,
    classify,
    is_dummy,
    normalize_strict_alternation,
    propagate_equalities,
)
from .structures import Signature, Structure

ENTAILS = "yes"
NOT_ENTAILS = "no"
RESOURCE_EXCEEDED = "resource-exceeded"

DEFAULT_MAX_TERMS = 10**5
DEFAULT_MAX_FACTS = 10**6
DEFAULT_MAX_STATES = 10**7

# Game memo states are canonicalized under permutations of the constants
# only while the factorial stays small.
PERMUTE_CONSTANT_LIMIT = 4


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Const:
    """The constant c_index (1-based, matching the usual c1, c2, ...)."""

    index: int
    rank: int = field(init=False, compare=False, repr=False, default=0)
    support: frozenset = field(init=False, compare=False, repr=False, default=frozenset())

    def __post_init__(self):
        object.__setattr__(self, "support", frozenset((self.index,)))

    def __str__(self):
        return f"c{self.index}"


@dataclass(frozen=True)
class App:
    symbol: str
    args: tuple

    rank: int = field(init=False, compare=False, repr=False, default=0)
    support: frozenset = field(init=False, compare=False, repr=False, default=frozenset())

    def __post_init__(self):
        object.__setattr__(self, "rank", 1 + max(a.rank for a in self.args))
        object.__setattr__(
            self, "support", frozenset().union(*(a.support for a in self.args))
        )

    def __str__(self):
        return f"{self.symbol}({','.join(str(a) for a in self.args)})"


def term_sort_key(t):
    if isinstance(t, Const):
        return (0, t.index)
    return (1, t.symbol, tuple(term_sort_key(a) for a in t.args))


def substitute(term, old, new):
    """term[old/new]: replace every occurrence of the subterm ``old``."""
    if term == old:
        return new
    if isinstance(term, Const):
        return term
    return App(term.symbol, tuple(substitute(a, old, new) for a in term.args))


def substitute_in_fact(terms, old, new):
    """Apply the same substitution across a fact's argument terms."""
    return tuple(substitute(t, old, new) for t in terms)


def rename_constants(term, perm):
    """Apply a permutation of constant indices (1-based dict) to a term."""
    if isinstance(term, Const):
        return Const(perm[term.index])
    return App(term.symbol, tuple(rename_constants(a, perm) for a in term.args))


# ---------------------------------------------------------------------------
# Skolemization

# Atom-argument templates: a universal variable stays a variable, an
# existential variable becomes an application of its Skolem symbol to
# the universals quantified before it.


@dataclass(frozen=True)
class Var:
    name: str

    # let templates reuse the App machinery
    rank = 0
    support = frozenset()


@dataclass(frozen=True)
class SkolemForm:
    universals: tuple[str, ...]
    symbols: tuple[tuple[str, int], ...]  # (symbol, arity) per existential
    atoms: tuple  # (relation name, tuple of Var/App-over-Var templates)

    @property
    def depth(self):
        return len(self.universals)


def skolemize(phi: PhSentence) -> SkolemForm:
    """One Skolem symbol per existential variable, arity = number of
    universals quantified before it.  A sentence opening with an
    existential gets a dummy universal prepended so arities stay >= 1."""
    if phi.has_equality():
        raise SentenceError("skolemization requires an equality-free sentence")
    flat = phi.flat_prefix()
    if not flat or flat[0][0] != FORALL:
        flat = [(FORALL, "_u0")] + flat
    universals = []
    template = {}
    symbols = []
    for q, v in flat:
        if q == FORALL:
            universals.append(v)
            template[v] = Var(v)
        else:
            symbol = f"f{len(symbols) + 1}"
            symbols.append((symbol, len(universals)))
            template[v] = App(symbol, tuple(Var(u) for u in universals))
    atoms = tuple(
        (a.name, tuple(template[v] for v in a.args)) for a in phi.matrix
    )
    return SkolemForm(tuple(universals), tuple(symbols), atoms)


# ---------------------------------------------------------------------------
# Truncations of the canonical model


@dataclass(frozen=True)
class Truncation:
    skolem: SkolemForm
    l: int
    m: int
    terms: tuple
    facts: dict  # relation name -> frozenset of term-index tuples

    def index_of(self, term):
        return self._index[term]

    @property
    def _index(self):
        idx = getattr(self, "_index_cache", None)
        if idx is None:
            idx = {t: i for i, t in enumerate(self.terms)}
            object.__setattr__(self, "_index_cache", idx)
        return idx

    def to_structure(self) -> Structure:
        """The truncation as a structure: terms become labeled elements,
        the constants c1..cl become the structure's constants."""
        arities = {}
        for name, templates in self.skolem.atoms:
            arities[name] = len(templates)
        sig = Signature(tuple(sorted(arities.items()))).with_constants(self.l)
        tuples = {name: sorted(ts) for name, ts in self.facts.items()}
        labels = tuple(str(t) for t in self.terms)
        constants = [self.index_of(Const(i + 1)) for i in range(self.l)]
        return Structure.build(sig, len(self.terms), tuples, constants, labels)


def build_truncation(phi: PhSentence, l: int, m: int,
                     max_terms: int = DEFAULT_MAX_TERMS,
                     max_facts: int = DEFAULT_MAX_FACTS) -> Truncation:
    """All Skolem terms of rank <= m over constants c1..cl, with every
    fact obtainable by instantiating the quantified atoms inside that
    term set."""
    if l < 1:
        raise SentenceError("a truncation needs at least one constant")
    if m < 0:
        raise SentenceError("the rank bound must be non-negative")
    skf = phi if isinstance(phi, SkolemForm) else skolemize(phi)

    levels = [[Const(i) for i in range(1, l + 1)]]
    total = l
    for rank in range(1, m + 1):
        below = [t for lev in levels for t in lev]
        fresh = set()
        for symbol, arity in skf.symbols:
            for args in iproduct(below, repeat=arity):
                if max(a.rank for a in args) == rank - 1:
                    fresh.add(App(symbol, args))
                    if total + len(fresh) > max_terms:
                        raise ResourceLimitError(
                            f"truncation exceeds {max_terms} terms at rank {rank}"
                        )
        levels.append(sorted(fresh, key=term_sort_key))
        total += len(fresh)
    terms = tuple(t for lev in levels for t in lev)
    index = {t: i for i, t in enumerate(terms)}
    by_max_rank = []
    count = 0
    for lev in levels:
        count += len(lev)
        by_max_rank.append(terms[:count])

    facts = {name: set() for name, _ in skf.atoms}
    fact_count = 0
    for name, templates in skf.atoms:
        inside, top = set(), set()
        for tpl in templates:
            if isinstance(tpl, Var):
                top.add(tpl.name)
            else:
                inside.update(a.name for a in tpl.args)
        bounds = {}
        for v in top | inside:
            bounds[v] = m - 1 if v in inside else m
        if any(r < 0 for r in bounds.values()):
            continue
        names = sorted(bounds)
        pools = [by_max_rank[bounds[v]] for v in names]
        size = 1
        for p in pools:
            size *= len(p)
        fact_count += size
        if fact_count > max_facts:
            raise ResourceLimitError(f"truncation exceeds {max_facts} facts")
        for choice in iproduct(*pools):
            env = dict(zip(names, choice))
            args = tuple(
                env[tpl.name] if isinstance(tpl, Var)
                else App(tpl.symbol, tuple(env[a.name] for a in tpl.args))
                for tpl in templates
            )
            facts[name].add(tuple(index[t] for t in args))
    return Truncation(skf, l, m, terms,
                      {name: frozenset(ts) for name, ts in facts.items()})


# ---------------------------------------------------------------------------
# The restricted evaluation game


def _prepare_game(psi: PhSentence):
    flat = psi.flat_prefix()
    if not flat or flat[0][0] != FORALL:
        raise SentenceError("the game needs a strict-alternation sentence")
    pos_of = {v: i for i, (_, v) in enumerate(flat)}
    due = [[] for _ in flat]
    for atom in psi.matrix:
        due[max(pos_of[v] for v in atom.variables())].append(atom)
    live = []
    for i in range(len(flat)):
        alive = set()
        for atom in psi.matrix:
            ps = [pos_of[v] for v in atom.variables()]
            if max(ps) >= i:
                alive.update(v for v, p in zip(atom.variables(), ps) if p < i)
        live.append(tuple(sorted(alive, key=pos_of.get)))
    return flat, due, live


def solve_rel_cc_game(t: Truncation, psi: PhSentence,
                      max_states: int = DEFAULT_MAX_STATES,
                      want_strategy: bool = False):
    """Play psi on the truncation with the universal player restricted to
    the constants and the existential player restricted to terms whose
    constants have all been played already.

    Returns the truth value, or (truth, strategy) with ``want_strategy``
    (which disables the permutation-canonical memo so the strategy can
    be replayed on raw positions).
    """
    flat, due, live = _prepare_game(psi)
    u_count = sum(1 for q, _ in flat if q == FORALL)
    if u_count > t.l:
        raise SentenceError(
            f"{u_count} universal variables but only {t.l} constants"
        )
    n_terms = len(t.terms)
    support = [t.terms[i].support for i in range(n_terms)]

    perm_maps = [None]  # identity encoded as None
    if t.l <= PERMUTE_CONSTANT_LIMIT and not want_strategy:
        for p in permutations(range(1, t.l + 1)):
            if p == tuple(range(1, t.l + 1)):
                continue
            mapping = dict(zip(range(1, t.l + 1), p))
            perm_maps.append((
                tuple(t.index_of(rename_constants(tm, mapping)) for tm in t.terms),
                mapping,
            ))

    def canonical(i, vals, played):
        best = (vals, played)
        for pm in perm_maps[1:]:
            term_map, cmap = pm
            cand = (
                tuple(term_map[x] for x in vals),
                tuple(sorted(cmap[c] for c in played)),
            )
            if cand < best:
                best = cand
        return (i, best)

    def holds(atom, val):
        if isinstance(atom, EqAtom):
            return val[atom.left] == val[atom.right]
        fs = t.facts.get(atom.name)
        return fs is not None and tuple(val[v] for v in atom.args) in fs

    memo = {}
    strategy = {v: {} for q, v in flat if q == EXISTS} if want_strategy else None
    val = {}
    states = 0

    def moves(i, played):
        q, v = flat[i]
        if q == FORALL:
            return [t.index_of(Const(c)) for c in range(1, t.l + 1)]
        if is_dummy(v):
            # unconstrained; any legal term will do
            first = min(played)
            return [t.index_of(Const(first))]
        return [x for x in range(n_terms) if support[x] <= set(played)]

    def play(i, played):
        nonlocal states
        if i == len(flat):
            return True
        raw = (i, tuple(val[v] for v in live[i]), played)
        key = canonical(i, raw[1], played)
        if key in memo:
            return memo[key]
        states += 1
        if states > max_states:
            raise ResourceLimitError(f"game exceeded {max_states} states")
        q, v = flat[i]
        outcome = q == FORALL
        for x in moves(i, played):
            val[v] = x
            nplayed = played
            if q == FORALL:
                c = t.terms[x].index
                if c not in played:
                    nplayed = tuple(sorted(played + (c,)))
            if all(holds(atom, val) for atom in due[i]) and play(i + 1, nplayed):
                if q == EXISTS:
                    if want_strategy:
                        strategy[v][(raw[1], played)] = x
                    outcome = True
                    break
            elif q == FORALL:
                outcome = False
                break
            del val[v]
        val.pop(v, None)
        memo[key] = outcome
        return outcome

    truth = play(0, ())
    if want_strategy:
        return truth, (strategy if truth else None)
    return truth


def replay_rel_cc_strategy(t: Truncation, psi: PhSentence, strategy) -> bool:
    """Check a recorded strategy against every universal line of play."""
    flat, _, live = _prepare_game(psi)

    def holds_all(val):
        for atom in psi.matrix:
            if isinstance(atom, EqAtom):
                if val[atom.left] != val[atom.right]:
                    return False
            elif tuple(val[v] for v in atom.args) not in t.facts.get(atom.name, ()):
                return False
        return True

    def walk(i, val, played):
        if i == len(flat):
            return holds_all(val)
        q, v = flat[i]
        if q == FORALL:
            for c in range(1, t.l + 1):
                np = played if c in played else tuple(sorted(played + (c,)))
                if not walk(i + 1, {**val, v: t.index_of(Const(c))}, np):
                    return False
            return True
        key = (tuple(val[u] for u in live[i]), played)
        if is_dummy(v):
            return walk(i + 1, {**val, v: t.index_of(Const(min(played)))}, played)
        if key not in strategy.get(v, {}):
            return False
        x = strategy[v][key]
        if not t.terms[x].support <= set(played):
            return False
        return walk(i + 1, {**val, v: x}, played)

    return walk(0, {}, ())


# ---------------------------------------------------------------------------
# The decision procedure


def enumerate_one_element_models(sig: Signature):
    """All structures on {0} over the signature: each relation either
    empty or containing the constant tuple."""
    names = [name for name, _ in sig.reduct().relations]
    out = []
    for mask in range(2 ** len(names)):
        tuples = {
            name: [(0,) * sig.arity(name)]
            for bit, name in enumerate(names) if mask >> bit & 1
        }
        out.append(Structure.build(sig.reduct(), 1, tuples))
    return out


def _joint_signature(phi: PhSentence, psi: PhSentence) -> Signature:
    arities = phi.relation_arities()
    for name, k in psi.relation_arities().items():
        if arities.setdefault(name, k) != k:
            raise SentenceError(f"relation {name!r} used with two arities")
    return Signature(tuple(sorted(arities.items())))


def rank_bound(l: int, e: int) -> int:
    """The truncation rank beyond which a losing game stays lost: the
    existential player can be forced through at most e*l^l fresh
    elements on top of the l constants."""
    return l + e * l**l


def decide_entailment(phi: PhSentence, psi: PhSentence,
                      max_terms: int = DEFAULT_MAX_TERMS,
                      max_facts: int = DEFAULT_MAX_FACTS,
                      max_states: int = DEFAULT_MAX_STATES,
                      report: dict | None = None) -> str:
    """Decide whether every model of phi satisfies psi.

    Returns "yes", "no" or "resource-exceeded".  ``report``, if given,
    is filled with the deciding parameters (l, rank, bound, path).
    """
    info = {} if report is None else report
    if classify(phi).is_degenerate:
        # phi only has one-element models; check psi on those directly.
        sig = _joint_signature(phi, psi)
        info["path"] = "one-element-models"
        for model in enumerate_one_element_models(sig):
            if evaluate(model, phi).truth and not evaluate(model, psi).truth:
                return NOT_ENTAILS
        return ENTAILS

    phi = propagate_equalities(phi) if phi.has_equality() else phi
    if psi.has_equality() and not classify(psi).is_degenerate:
        psi = propagate_equalities(psi)
    psin = normalize_strict_alternation(psi)
    flat = psin.flat_prefix()
    l = sum(1 for q, _ in flat if q == FORALL)
    e = sum(1 for q, v in flat if q == EXISTS and not is_dummy(v))
    m_star = rank_bound(l, e)
    info.update(path="game", l=l, existentials=e, bound=m_star)
    skf = skolemize(phi)
    for m in range(1, m_star + 1):
        try:
            t = build_truncation(skf, l, m, max_terms=max_terms, max_facts=max_facts)
            win = solve_rel_cc_game(t, psin, max_states=max_states)
        except ResourceLimitError as exc:
            info.update(rank=m, detail=str(exc))
            return RESOURCE_EXCEEDED
        if win:
            info["rank"] = m
            return ENTAILS
    info["rank"] = m_star
    return NOT_ENTAILS

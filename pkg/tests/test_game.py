import itertools
import random

import pytest

from qcsptools import generators as gen
from qcsptools.errors import SentenceError
from qcsptools.game import (
    evaluate,
    evaluate_pi2_via_superprodukt,
    pi2_truth_via_expansions,
    replay_strategy,
)
from qcsptools.sentences import (
    EqAtom,
    PhSentence,
    RelAtom,
    parse_sentence,
)
from qcsptools.structures import Structure, product

from conftest import DIGRAPH, random_digraph, symmetric_graph


def brute_force_truth(a, s):
    """Independent oracle: plain quantifier recursion, no memo, no
    incremental checks."""
    flat = s.flat_prefix()

    def ok(val):
        for atom in s.matrix:
            if isinstance(atom, EqAtom):
                if val[atom.left] != val[atom.right]:
                    return False
            elif tuple(val[v] for v in atom.args) not in a.rel(atom.name):
                return False
        return True

    def rec(i, val):
        if i == len(flat):
            return ok(val)
        q, v = flat[i]
        results = (rec(i + 1, {**val, v: x}) for x in range(a.size))
        return all(results) if q == "forall" else any(results)

    return rec(0, {})


def random_sentence(rng, n_vars=4, n_atoms=3, equality=True):
    names = [f"v{i}" for i in range(1, rng.randint(1, n_vars) + 1)]
    prefix = []
    for v in names:
        q = rng.choice(["forall", "exists"])
        if prefix and prefix[-1][0] == q:
            prefix[-1] = (q, prefix[-1][1] + (v,))
        else:
            prefix.append((q, (v,)))
    atoms = []
    for _ in range(rng.randint(1, n_atoms)):
        if equality and rng.random() < 0.2:
            atoms.append(EqAtom(rng.choice(names), rng.choice(names)))
        else:
            atoms.append(RelAtom("E", (rng.choice(names), rng.choice(names))))
    return PhSentence(tuple(prefix), tuple(atoms))


def test_simple_evaluations():
    k3 = gen.clique(3)
    assert evaluate(k3, parse_sentence("forall x exists y : E(x,y)")).truth
    assert not evaluate(k3, parse_sentence("exists y : E(y,y)")).truth
    assert evaluate(k3, parse_sentence("forall x : true")).truth
    assert evaluate(k3, parse_sentence("forall x exists y : x = y")).truth
    assert not evaluate(k3, parse_sentence("exists y forall x : x = y")).truth


def test_one_element_semantics():
    two = gen.k1s(2)
    assert not evaluate(two, parse_sentence("exists x forall y : x = y")).truth
    one = gen.k1s(1)
    assert evaluate(one, parse_sentence("exists x forall y : x = y")).truth


def test_unknown_relation_rejected():
    with pytest.raises(SentenceError):
        evaluate(gen.clique(2), parse_sentence("forall x : R(x)"))


def test_evaluate_matches_brute_force(rng):
    for _ in range(600):
        a = random_digraph(rng)
        s = random_sentence(rng)
        assert evaluate(a, s).truth == brute_force_truth(a, s)


def test_strategy_witness_replays(rng):
    found = 0
    for _ in range(300):
        a = random_digraph(rng)
        s = random_sentence(rng, equality=False)
        res = evaluate(a, s, want_strategy=True)
        if res.truth:
            found += 1
            assert replay_strategy(a, s, res.strategy)
    assert found > 50


def all_structures(size):
    pairs = list(itertools.product(range(size), repeat=2))
    for bits in itertools.product([0, 1], repeat=len(pairs)):
        edges = [p for p, b in zip(pairs, bits) if b]
        yield Structure.build(DIGRAPH, size, {"E": edges})


def pi2_sentences_exhaustive(u, e, max_atoms):
    """All Pi_2 sentences with u universals, e existentials and up to
    max_atoms E-atoms (no equality)."""
    names = [f"x{i}" for i in range(1, u + 1)] + [f"y{i}" for i in range(1, e + 1)]
    prefix = [("forall", tuple(names[:u]))]
    if e:
        prefix.append(("exists", tuple(names[u:])))
    atoms = [RelAtom("E", (a, b)) for a in names for b in names]
    for k in range(1, max_atoms + 1):
        for combo in itertools.combinations(atoms, k):
            yield PhSentence(tuple(prefix), combo)


def test_pi2_oracles_agree_exhaustively_small():
    """Truth via the game, via the big product structure, and via
    per-expansion homomorphisms must coincide: exhaustive over all
    2-element digraphs and Pi_2 sentences with <= 2+2 variables and
    <= 3 atoms."""
    structures = [a for size in (1, 2) for a in all_structures(size)]
    shapes = [(1, 1), (2, 1), (1, 2), (2, 2)]
    checked = 0
    for u, e in shapes:
        for s in pi2_sentences_exhaustive(u, e, max_atoms=3):
            for a in structures:
                truth = evaluate(a, s).truth
                assert pi2_truth_via_expansions(a, s) == truth
                assert evaluate_pi2_via_superprodukt(a, s) == truth
                checked += 1
    assert checked > 10000


def test_pi2_oracles_agree_randomized(rng):
    for _ in range(500):
        a = random_digraph(rng, max_size=2)
        u = rng.randint(1, 2)
        e = rng.randint(0, 2)
        names = [f"x{i}" for i in range(1, u + 1)] + [f"y{i}" for i in range(1, e + 1)]
        prefix = [("forall", tuple(names[:u]))]
        if e:
            prefix.append(("exists", tuple(names[u:])))
        atoms = tuple(
            RelAtom("E", (rng.choice(names), rng.choice(names)))
            for _ in range(rng.randint(1, 4))
        )
        s = PhSentence(tuple(prefix), atoms)
        truth = evaluate(a, s).truth
        assert pi2_truth_via_expansions(a, s) == truth
        assert evaluate_pi2_via_superprodukt(a, s) == truth


def test_product_strategies(rng):
    """If a sentence holds on both factors it holds on the product;
    coordinate-wise existential choices witness it."""
    nonvacuous = 0
    for _ in range(500):
        a = random_digraph(rng)
        b = random_digraph(rng)
        s = random_sentence(rng, equality=False)
        if evaluate(a, s).truth and evaluate(b, s).truth:
            nonvacuous += 1
            assert evaluate(product(a, b), s).truth
    assert nonvacuous >= 100


def test_surjective_preservation(rng):
    """Surjective homomorphic images inherit positive sentences."""
    from qcsptools.hom import verify_hom

    nonvacuous = 0
    for _ in range(500):
        a = random_digraph(rng, max_size=3)
        k = rng.randint(1, a.size)
        mapping = [rng.randrange(k) for _ in range(a.size)]
        for i in range(k):  # force surjectivity
            mapping[rng.randrange(a.size)] = i
        if set(mapping) != set(range(k)):
            continue
        image_edges = {(mapping[x], mapping[y]) for x, y in a.rel("E")}
        b = Structure.build(DIGRAPH, k, {"E": image_edges})
        assert verify_hom(a, b, mapping)
        s = random_sentence(rng, equality=False)
        if evaluate(a, s).truth:
            nonvacuous += 1
            assert evaluate(b, s).truth
    assert nonvacuous >= 100

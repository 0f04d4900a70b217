import itertools

import pytest

from qcsptools import generators as gen
from qcsptools.containment import (
    csp_containment,
    decide_containment,
    distinguishing_sentence,
    equivalent,
    exponent_bound,
    pi2_containment,
)
from qcsptools.errors import FormatError, SignatureMismatchError
from qcsptools.game import evaluate
from qcsptools.hom import find_hom, find_surjective_hom, verify_hom
from qcsptools.sentences import classify
from qcsptools.structures import Structure, disjoint_union, power

from conftest import DIGRAPH, random_digraph, symmetric_graph
from test_game import random_sentence


def test_k3_h2_yes_at_2():
    v = decide_containment(gen.clique(3), gen.h2())
    assert v.outcome == "yes" and v.r == 2
    assert verify_hom(power(gen.clique(3), 2), gen.h2(), v.witness.mapping)
    assert v.witness.surjective


def test_unary_family_yes_at_3_and_forced_no():
    a, b = gen.a_k_unary(3), gen.b_unary(3)
    v = decide_containment(a, b)
    assert v.outcome == "yes" and v.r == 3
    forced = decide_containment(a, b, bound_override=2)
    assert forced.outcome == "no" and forced.bound == 2
    assert forced.bound_kind == "override"


def test_k1_to_two_k1_no_at_bound_1():
    v = decide_containment(gen.k1s(1), gen.k1s(2))
    assert v.outcome == "no" and v.bound == 1


def test_input_validation():
    with pytest.raises(SignatureMismatchError):
        decide_containment(gen.clique(2), gen.a_k_unary(2))
    with pytest.raises(FormatError):
        from qcsptools.structures import expansion

        decide_containment(expansion(gen.clique(2), [0]), expansion(gen.clique(2), [0]))


def test_equivalences():
    assert equivalent(gen.clique(3), gen.h2())[0] is True
    c6 = symmetric_graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)])
    assert equivalent(gen.clique(2), c6)[0] is True
    t, ab, ba = equivalent(gen.clique(2), gen.clique(3))
    assert t is False
    # the failing direction is K3 -> K2, blocked by homomorphism absence
    assert ab.outcome == "yes" and ba.outcome == "no"


def test_distinguishing_sentence_found_and_verified():
    phi = distinguishing_sentence(gen.clique(3), gen.clique(2), 1)
    assert phi is not None
    assert classify(phi).is_pi2
    from qcsptools.game import pi2_truth_via_expansions

    assert pi2_truth_via_expansions(gen.clique(3), phi)
    assert not pi2_truth_via_expansions(gen.clique(2), phi)


def test_distinguishing_sentence_absent_for_equal_and_contained():
    assert distinguishing_sentence(gen.clique(2), gen.clique(2), 1) is None
    # containment holds here, so no sentence can be verified
    assert distinguishing_sentence(gen.a_k_unary(2), gen.b_unary(2), 1) is None


def test_csp_containment():
    assert csp_containment(gen.clique(3), gen.clique(3))
    assert not csp_containment(gen.clique(3), gen.clique(2))


def test_exponent_bound_prefers_orbits():
    bound, kind = exponent_bound(gen.clique(3), gen.h2())
    assert (bound, kind) == (14, "orbit")


def test_pi2_containment_checks():
    assert pi2_containment(gen.clique(3), gen.h2(), 1)
    assert not pi2_containment(gen.clique(3), gen.clique(2), 1)


def _projection_composed(a, r, witness):
    """Witness for power r+1 obtained by dropping the last coordinate."""
    return tuple(witness.mapping[i // a.size] for i in range(a.size ** (r + 1)))


def test_monotonicity_of_yes_verdicts():
    for a, b in [(gen.clique(3), gen.h2()), (gen.a_k_unary(3), gen.b_unary(3))]:
        v = decide_containment(a, b)
        assert v.outcome == "yes"
        composed = _projection_composed(a, v.r, v.witness)
        assert verify_hom(power(a, v.r + 1), b, composed)
        assert set(composed) == set(range(b.size))


def test_yes_verdict_soundness_sampling(rng):
    """When containment holds, every sentence true on the left holds on
    the right (sampled)."""
    c6 = symmetric_graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)])
    pairs = [
        (gen.clique(3), gen.h2()),
        (gen.clique(2), gen.clique(3)),
        (gen.clique(2), c6),
    ]
    for a, b in pairs:
        assert decide_containment(a, b).outcome == "yes"
    transferred = 0
    for i in range(500):
        a, b = pairs[i % len(pairs)]
        s = random_sentence(rng, n_vars=6, n_atoms=4, equality=False)
        if evaluate(a, s).truth:
            transferred += 1
            assert evaluate(b, s).truth
    assert transferred >= 50


def all_undirected_graphs(n):
    pairs = list(itertools.combinations(range(n), 2))
    for bits in itertools.product([0, 1], repeat=len(pairs)):
        yield symmetric_graph(n, [p for p, bit in zip(pairs, bits) if bit])


def brute_three_colorable(g):
    for coloring in itertools.product(range(3), repeat=g.size):
        if all(coloring[x] != coloring[y] for x, y in g.rel("E")):
            return True
    return False


def test_three_colorability_reduction_exhaustive():
    """G is 3-colorable iff G -> K3, and iff G + 3 isolated vertices maps
    surjectively onto K3; exhaustive over all graphs on <= 5 vertices."""
    k3 = gen.clique(3)
    count = 0
    for n in range(1, 6):
        for g in all_undirected_graphs(n):
            expect = brute_three_colorable(g)
            assert (find_hom(g, k3) is not None) == expect
            padded = disjoint_union(g, gen.k1s(3))
            assert (find_surjective_hom(padded, k3) is not None) == expect
            count += 1
    assert count == 1 + 2 + 8 + 64 + 1024

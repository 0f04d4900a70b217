import pytest

from qcsptools.errors import ParseError, SentenceError
from qcsptools.sentences import (
    EqAtom,
    RelAtom,
    canonical_query,
    classify,
    normalize_strict_alternation,
    parse_sentence,
    pretty,
    propagate_equalities,
    sentence_to_structure,
    strip_dummies,
    structure_to_sentence,
)
from qcsptools import generators as gen
from qcsptools.structures import expansion


def test_parse_basic():
    s = parse_sentence("forall x exists y : E(x,y) & x = y")
    assert s.prefix == (("forall", ("x",)), ("exists", ("y",)))
    assert s.matrix == (RelAtom("E", ("x", "y")), EqAtom("x", "y"))


def test_parse_comments_whitespace_and_true():
    s = parse_sentence("# leading comment\n forall x :\n   true # trailing\n")
    assert s.matrix == ()
    assert pretty(s) == "forall x : true"


def test_parse_round_trip():
    text = "forall x z exists y : E(x,y) & E(y,z)"
    s = parse_sentence(text)
    assert parse_sentence(pretty(s)) == s


@pytest.mark.parametrize("bad,where", [
    ("", 0),
    ("forall : E(x,x)", 7),
    ("forall x : E(x,y)", 15),          # unbound y
    ("forall x exists x : E(x,x)", 16),  # duplicate
    ("E(x,y)", 0),                       # no prefix
    ("forall x : E(x x)", 15),           # missing comma
    ("forall _d1 : E(_d1,_d1)", 7),      # reserved prefix
    ("forall x : x = ", 15),             # truncated
    ("forall x : E(x,x) junk", 18),      # trailing
])
def test_parse_errors_report_positions(bad, where):
    with pytest.raises(ParseError) as exc:
        parse_sentence(bad)
    assert exc.value.position == where


def test_variable_used_with_two_arities():
    s = parse_sentence("forall x : E(x,x) & E(x,x,x)")
    with pytest.raises(SentenceError):
        s.relation_arities()


def test_normalize_strict_alternation_and_strip():
    s = parse_sentence("exists y1 y2 : E(y1,y2)")
    n = normalize_strict_alternation(s)
    quants = [q for q, _ in n.flat_prefix()]
    assert quants == ["forall", "exists", "forall", "exists"]
    assert strip_dummies(n) == s

    s2 = parse_sentence("forall x1 x2 : E(x1,x2)")
    n2 = normalize_strict_alternation(s2)
    assert [q for q, _ in n2.flat_prefix()] == ["forall", "exists"] * 2
    assert strip_dummies(n2) == s2


def test_classify_shapes():
    pi2 = parse_sentence("forall x exists y : E(x,y)")
    shape = classify(pi2)
    assert shape.is_pi2 and not shape.is_sigma1
    assert shape.universal_count == 1 and shape.existential_count == 1
    assert shape.depth == 1

    sigma1 = parse_sentence("exists y : E(y,y)")
    assert classify(sigma1).is_sigma1 and classify(sigma1).is_pi2

    pi4 = parse_sentence("forall a exists b forall c exists d : E(a,d)")
    s4 = classify(pi4)
    assert not s4.is_pi2 and s4.depth == 2


def test_degenerate_detection():
    # two universals forced equal
    assert classify(parse_sentence("forall x y : x = y")).is_degenerate
    # existential bound before the universal it must equal
    assert classify(parse_sentence("exists y forall x : y = x")).is_degenerate
    # existential bound after: not degenerate
    assert not classify(parse_sentence("forall x exists y : x = y")).is_degenerate
    assert not classify(parse_sentence("forall x : x = x")).is_degenerate


def test_propagate_equalities():
    s = parse_sentence("forall x exists y : x = y & E(x,y)")
    out = propagate_equalities(s)
    assert out.matrix == (RelAtom("E", ("x", "x")),)
    assert [v for _, v in out.flat_prefix()] == ["x"]
    with pytest.raises(SentenceError):
        propagate_equalities(parse_sentence("forall x y : x = y"))


def test_propagate_chained_equalities():
    s = parse_sentence("forall x exists y z : x = y & y = z & E(z,x)")
    out = propagate_equalities(s)
    assert out.matrix == (RelAtom("E", ("x", "x")),)


def test_sentence_structure_round_trip():
    s = parse_sentence("forall x1 x2 exists y1 : E(x1,y1) & E(y1,x2)")
    d = sentence_to_structure(s)
    assert d.size == 3
    assert d.signature.constant_count == 2
    back = structure_to_sentence(d)
    # same shape up to variable names
    assert classify(back).universal_count == 2
    assert len(back.matrix) == 2
    d2 = sentence_to_structure(back)
    assert d2.tuples == d.tuples and d2.constants == d.constants


def test_sentence_to_structure_rejects_wrong_shapes():
    with pytest.raises(SentenceError):
        sentence_to_structure(parse_sentence("forall x exists y forall z : E(x,y)"))
    with pytest.raises(SentenceError):
        sentence_to_structure(parse_sentence("forall x exists y : x = y"))


def test_structure_to_sentence_rejects_constant_collision():
    a = expansion(gen.clique(2), [0, 0])
    with pytest.raises(SentenceError):
        structure_to_sentence(a)


def test_canonical_query():
    q = canonical_query(gen.clique(2))
    assert classify(q).is_sigma1
    assert len(q.matrix) == 2

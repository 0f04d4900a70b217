import pytest

from qcsptools import generators as gen
from qcsptools.errors import FormatError


def test_cliques():
    k3 = gen.clique(3)
    assert k3.size == 3
    assert (0, 1) in k3.rel("E") and (0, 0) not in k3.rel("E")
    rk2 = gen.clique(2, reflexive=True)
    assert (0, 0) in rk2.rel("E")


def test_h2_is_k4_minus_one_edge():
    h2 = gen.h2()
    e = h2.rel("E")
    assert h2.size == 4
    assert len(e) == 10  # 5 undirected edges
    assert (0, 3) not in e and (3, 0) not in e


def test_path_loops_follow_bit_string():
    p = gen.path("101")
    e = p.rel("E")
    assert (0, 0) in e and (1, 1) not in e and (2, 2) in e
    assert (0, 1) in e and (1, 0) in e and (0, 2) not in e


def test_p01_and_dp1_star():
    p01 = gen.p01()
    assert p01.rel("E") == frozenset({(0, 1), (1, 0), (1, 1)})
    dp = gen.dp1_star()
    assert dp.rel("E") == frozenset({(0, 0), (0, 1), (1, 1)})


def test_linear_order():
    lo = gen.linear_order(3)
    assert (0, 2) in lo.rel("E") and (2, 0) not in lo.rel("E")
    assert all((i, i) in lo.rel("E") for i in range(3))


def test_unary_family():
    a = gen.a_k_unary(3)
    assert a.size == 3
    assert a.rel("U1") == frozenset({(1,), (2,)})
    b = gen.b_unary(3)
    assert b.size == 2
    assert all(b.rel(f"U{i}") == frozenset({(1,)}) for i in (1, 2, 3))


def test_cycle_family():
    a = gen.a_k_cycle(3)
    assert a.rel("E") == frozenset({(0, 1), (1, 2), (2, 0)})
    assert a.rel("U") == frozenset({(0,), (1,)})
    b = gen.b_cycle()
    assert b.rel("E") == frozenset({(0, 0), (1, 1)})
    assert b.rel("U") == frozenset({(1,)})


def test_k1s():
    two = gen.k1s(2)
    assert two.size == 2 and not two.rel("E")


def test_generate_dispatch():
    assert gen.generate("clique", 2).size == 2
    assert gen.generate("h2").size == 4
    with pytest.raises(FormatError):
        gen.generate("nonsense")

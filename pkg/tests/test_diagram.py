import itertools

import pytest
from hypothesis import given, settings, strategies as st

from obddmin.boolfn import TruthTable, parse_expression
from obddmin.diagram import (
    Kind,
    VariableOrder,
    build_diagram,
    canonical_form,
    evaluate,
    export_dot,
    level_width,
    reduction_violations,
)


def test_fig1_sizes(fig1):
    good = build_diagram(fig1, VariableOrder.from_read_order([0, 1, 2, 3, 4, 5]))
    assert good.nonterminals == 6 and good.total == 8
    assert good.widths == (1,) * 6
    assert level_width(good, 0) == 1
    bad = build_diagram(fig1, VariableOrder.from_read_order([0, 2, 4, 1, 3, 5]))
    assert bad.total == 16


def test_constant_false():
    tt = TruthTable.constant(0, 3)
    for order in itertools.permutations(range(3)):
        d = build_diagram(tt, VariableOrder(order))
        assert d.root == 0 and d.nonterminals == 0
        assert all(level_width(d, v) == 0 for v in range(3))
        assert evaluate(d, (1, 0, 1)) == 0


def test_majority_widths(majority):
    d = build_diagram(majority, VariableOrder.identity(3))
    assert d.summary()["widths_root_to_bottom"] == [1, 2, 1]


def test_order_conventions():
    order = VariableOrder.from_read_order([2, 0, 1])
    assert order.pi == (1, 0, 2)  # pi[0] sits at level 1, read last
    assert order.read_order == (2, 0, 1)
    assert order.level_of(2) == 3
    with pytest.raises(ValueError):
        VariableOrder((0, 0))


def test_zdd_indicator():
    # indicator of {x1=1, x2=0}
    tt = parse_expression("x1&~x2", 2)
    for order in (VariableOrder((0, 1)), VariableOrder((1, 0))):
        d = build_diagram(tt, order, Kind.ZDD)
        assert evaluate(d, (1, 0)) == 1
        assert evaluate(d, (1, 1)) == 0
        for b in range(4):
            point = (b & 1, b >> 1)
            assert evaluate(d, point) == tt.bits[b]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32 - 1), st.sampled_from(list(Kind)), st.randoms())
def test_reduced_and_faithful(n, seed, kind, rnd):
    tt = TruthTable.random(n, seed)
    pi = list(range(n))
    rnd.shuffle(pi)
    d = build_diagram(tt, VariableOrder(tuple(pi)), kind)
    assert reduction_violations(d) == []
    for b in range(1 << n):
        assert evaluate(d, tuple((b >> i) & 1 for i in range(n))) == tt.bits[b]


def test_canonical_form_is_unique():
    # two different expressions of the same function give the same diagram
    a = parse_expression("x1&x2|x1&x3", 3)
    b = parse_expression("x1&(x2|x3)", 3)
    order = VariableOrder((2, 1, 0))
    assert canonical_form(build_diagram(a, order)) == canonical_form(build_diagram(b, order))
    c = parse_expression("x1|x2&x3", 3)
    assert canonical_form(build_diagram(a, order)) != canonical_form(build_diagram(c, order))


def test_dot_counts(fig1, xnor):
    dot = export_dot(build_diagram(fig1, VariableOrder.from_read_order(range(6))))
    assert dot.count("shape=") == 8
    assert dot.count("->") == 12
    dot = export_dot(build_diagram(xnor, VariableOrder((0, 1))))
    assert dot.count("shape=circle") == 3 and dot.count("shape=box") == 2
    dot = export_dot(build_diagram(TruthTable.constant(0, 2), VariableOrder((0, 1))))
    assert dot.count("shape=box") == 2 and "->" not in dot


def test_json_summary(fig1):
    d = build_diagram(fig1, VariableOrder.from_read_order([0, 2, 4, 1, 3, 5]))
    s = d.summary()
    assert s["order_read_first_to_last"] == [1, 3, 5, 2, 4, 6]
    assert s["total"] == 16 and sum(s["widths_root_to_bottom"]) == s["nonterminals"]
